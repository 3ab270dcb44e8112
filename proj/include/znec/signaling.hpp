#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "znec/codec.hpp"

namespace znec {

// Per-row feedback payload shapes. Every round carries one entry per top row;
// rows with no signalled redundancy have an empty payload.
enum class FeedbackVariant {
    MaskedSet,         // masked copies of the row's signalled messages
    MaskedSetReduced,  // same, recomputed around one pinned wire position
    FullParity,        // check symbols of an all-message row
    RawValues,         // the signalled messages verbatim (single-parity rows)
};

struct RowFeedback {
    FeedbackVariant variant = FeedbackVariant::MaskedSet;
    std::vector<Symbol> payload;
    int bare_index = -1;  // which signalled message the trailing bare sum replaces
};

struct RoundFeedback {
    std::vector<RowFeedback> rows;  // always a - c entries
    bool cs = false;                // alarm sentinel;—claims follow unconditionally
    std::optional<std::pair<int, int>> cs_located;  // (row, wire position) when pinned
};

int payload_symbols(const RoundFeedback& fb);

struct RowMemory {
    bool event_seen = false;
    int identified_pos = -1;  // wire position within the row, -1 if unknown
};

struct NodeAState {
    std::vector<RowMemory> rows;
    int cs_count = 0;
};

NodeAState make_node_a(const CodecKeys& keys);

// Relay A: check each received top row against its wire parity, escalate on
// anomalies, and assemble the round's feedback payload.
RoundFeedback node_a_observe(NodeAState& st, const CodecKeys& keys,
                             const SymbolMatrix& received_upstream);

struct NodeBState {
    std::vector<RowMemory> rows;
    int claims_sent = 0;
};

NodeBState make_node_b(const CodecKeys& keys);

struct BVerdict {
    bool send_claim = false;
    std::optional<std::pair<int, int>> located;  // relay B's own in-row pin, if any
};

// Relay B: verify the received feedback against the true messages; any
// discrepancy or alarm triggers a claim.
BVerdict node_b_verify(NodeBState& st, const CodecKeys& keys, const MessageBlock& truth,
                       const RoundFeedback& received);

// Side information is no longer needed once the sink has pinned two upstream
// links or holds a decodable claim.
bool detection_complete(const NetworkParams& p, int identified_upstream, bool claim_delivered);

}  // namespace znec
