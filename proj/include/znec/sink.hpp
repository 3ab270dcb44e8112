#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "znec/codec.hpp"
#include "znec/signaling.hpp"

namespace znec {

// Everything the sink can see in one round. The helper relay's feedback
// arrives twice: a tamper-prone copy goes to the downstream relay, and the
// copy echoed here rides the unbounded direct link, so it is authentic.
// Claim presence is framing metadata and cannot be forged, but the claim
// values travel on the downstream links and each column is corruptible by
// whoever owns that link.
struct SinkView {
    SymbolMatrix upstream;    // a x n, as received
    SymbolMatrix downstream;  // c x m, as received
    RoundFeedback echo;       // what the helper relay actually sent
    bool claim_present = false;
    std::optional<SymbolMatrix> claim;  // (a - c) x m when present
};

// Evidence regime the round was decoded under. All regimes run the same
// engine: every allowed removal hypothesis is solved against the surviving
// cell equations and all consistent answers must agree.
enum class DecodeMode {
    SingleAdversary,   // one-link budget
    NoSignalSubset,    // no alarm, no claim, nothing identified yet
    ClaimMds,          // claim delivered: its cells join the system
    PostIdentified,    // two or more links already pinned
    VerifiedFeedback,  // one upstream link pinned, relayed values vouch for the rest
};

struct DecodeOptions {
    // Solve every hypothesis and require all consistent solutions to agree;
    // turning this off returns the first consistent solution.
    bool verify_agreement = true;
};

struct DecodeOutcome {
    bool ok = false;
    DecodeMode mode = DecodeMode::NoSignalSubset;
    MessageBlock message;
    // links whose received symbols differ from the decoded truth this round
    std::vector<std::size_t> implicated;
};

// Cross-round decoding state: certified-bad links, the positions the helper
// relay has pinned (carried in earlier alarms), and a mirror of the
// downstream relay's per-row pins. The mirror matters on silent rounds: with
// an honest feedback link, silence proves the relay's checks passed, and the
// exact checks it ran depend on which positions it had pinned.
struct DecodeContext {
    std::set<std::size_t> identified;  // forward link ids
    bool fb_identified = false;
    std::map<int, int> helper_pins;  // top row -> wire position (helper side)
    std::map<int, int> relay_pins;   // top row -> wire position (downstream side)
    // When false the relay's pin state is unknown and silence proves nothing.
    bool relay_state_known = true;
};

// Wire symbols that survive removing the identified links in the worst case;
// stays at or above the message count in the tight regime.
int post_removal_count(const NetworkParams& p);

// Symbol budget behind the verified-feedback decoder: r1 symbols on rows the
// sink can trust outright once one upstream link is pinned, r2 symbols left
// after the worst-case removal sweep, and the signalled values relayed
// verbatim. r1 + r2 + relayed meets the message count in the tight regime.
// Only defined for the feedback capacities the decoder covers; throws
// otherwise.
struct SingleIdentifiedBudget {
    int r1 = 0;
    int r2 = 0;
    int relayed = 0;
};

SingleIdentifiedBudget single_identified_budget(const NetworkParams& p);

// Removal-hypothesis sweep over the forward links. Every hypothesis within
// the link budget is solved from the cell equations that survive it; under
// the feedback-honest family a silent round additionally binds the answer to
// the checks the downstream relay must have passed. All consistent answers
// must agree or the round is refused.
DecodeOutcome consistency_decode(const CodecKeys& keys, const SinkView& view,
                                 const DecodeContext& ctx, const DecodeOptions& opt = {});

// Same sweep with the claim cells joined to the system.
DecodeOutcome decode_with_claim(const CodecKeys& keys, const SinkView& view,
                                const DecodeContext& ctx, const DecodeOptions& opt = {});

// Same sweep labelled for the >= 2 identified links regime.
DecodeOutcome decode_post_identified(const CodecKeys& keys, const SinkView& view,
                                     const DecodeContext& ctx, const DecodeOptions& opt = {});

// Dispatch on the round's evidence.
DecodeOutcome decode(const CodecKeys& keys, const SinkView& view, const DecodeContext& ctx,
                     const DecodeOptions& opt = {});

// Cross-round sink: accumulates certified link identifications and watches
// the echoed feedback for proof that the feedback link itself is owned.
class SinkSession {
  public:
    explicit SinkSession(const CodecKeys& keys, DecodeOptions opt = {});

    DecodeOutcome process_round(const SinkView& view);

    const std::set<std::size_t>& identified() const { return ctx_.identified; }
    bool feedback_identified() const { return ctx_.fb_identified; }
    const DecodeContext& context() const { return ctx_; }

  private:
    const CodecKeys& keys_;
    DecodeOptions opt_;
    DecodeContext ctx_;
    NodeBState b_mirror_;
    bool mirror_valid_ = true;
};

}  // namespace znec
