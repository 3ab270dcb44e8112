#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "znec/bounds.hpp"
#include "znec/codec.hpp"
#include "znec/signaling.hpp"

namespace znec {

// One round's worth of tampering. Wire errors are additive per link; feedback
// fields apply only when the feedback link is owned.
struct AdversaryAction {
    std::map<std::size_t, std::vector<Symbol>> wire_errors;   // link id -> additive error
    std::map<std::size_t, std::vector<Symbol>> claim_errors;  // downstream link id -> a-c symbols
    bool fb_suppress_to_clean = false;  // replace feedback with a clean recomputation
    bool fb_forge_cs = false;           // raise the alarm flag on a clean round
    std::vector<Symbol> fb_additive;    // added to the payload symbols in order

    bool touches_anything() const;
};

enum class StrategyKind {
    None,
    SingleFirst,
    Hide,
    ParityOnly,
    FeedbackTamper,
    Random,
    Exhaustive,
};

enum class TamperMode { Additive, SuppressClean, ForgeCs };

struct StrategySpec {
    StrategyKind kind = StrategyKind::None;
    std::size_t link = 0;             // SingleFirst / ParityOnly / Exhaustive target
    std::vector<std::size_t> follow;  // Hide: links attacked after the opener
    std::size_t row = 0;              // ParityOnly: which top row to touch
    std::size_t coord = 0;            // ParityOnly: wire position (upstream link id)
    TamperMode mode = TamperMode::Additive;
    std::uint64_t seed = 1;
    std::uint64_t cursor = 0;  // Exhaustive: index into the attack space

    // Accepts "name" or "name:key=value,key=value". Lists use '+' separators.
    static StrategySpec parse(const std::string& text);
    std::string name() const;
};

// Round scaling patterns applied to a base error vector over a short session.
const std::vector<std::vector<Symbol>>& attack_schedules();

// Number of distinct (target, pattern, schedule) triples the exhaustive
// strategy walks: one nonzero pattern per owned link times the schedules.
std::uint64_t exhaustive_space_size(const NetworkParams& p);

class Adversary {
  public:
    Adversary(const CodecKeys& keys, StrategySpec spec);

    const std::set<std::size_t>& owned() const { return owned_; }
    const StrategySpec& spec() const { return spec_; }

    // Decide this round's tampering. `sent` is the true codeword (the threat
    // model grants full knowledge of keys and traffic).
    AdversaryAction next_action(std::size_t round, const Codeword& sent);

    // Apply the feedback-link part of the action to what relay A sent.
    RoundFeedback tamper_feedback(const AdversaryAction& act, const RoundFeedback& a_sent);

  private:
    const CodecKeys& keys_;
    StrategySpec spec_;
    std::set<std::size_t> owned_;
    Rng rng_;
    NodeAState clean_mirror_;      // relay-A state under a pretend-clean history
    RoundFeedback clean_fb_;       // what A would send this round on clean wire
    std::size_t fb_link_ = 0;

    void derive_owned();
    std::vector<Symbol> seeded_nonzero(std::size_t len);
};

// Corrupted copy of a codeword: wire errors added onto upstream columns and
// the downstream rows they own.
Codeword apply_wire_errors(const CodecKeys& keys, const Codeword& sent,
                           const AdversaryAction& act);

// Replay both halves of a confusion pair against a tiny network and return
// the two sink observations; indistinguishability means equal structs.
std::pair<TinyObservation, TinyObservation> confusion_replay(
    const TinyNetwork& net, const ConfusionPair& pair,
    const std::vector<TinyCodeword>& codebook);

}  // namespace znec
