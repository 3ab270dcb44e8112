#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "znec/adversary.hpp"
#include "znec/sink.hpp"

namespace znec {

// One simulated transmission session: fresh random messages each round, one
// adversary following a strategy, both relays running the signalling
// protocol, and the sink decoding every round.
struct SessionConfig {
    NetworkParams p;
    int rounds = 3;
    StrategySpec strategy;
    std::uint64_t seed = 1;  // drives the message stream
    KeyOptions key_options;  // used when no prebuilt keys are supplied
    // Prebuilt keys shared across many sessions (must match p); optional.
    const CodecKeys* keys = nullptr;
};

struct RoundTranscript {
    int round = 0;
    bool adversary_active = false;
    bool alarm = false;  // the helper relay's echoed alarm flag
    bool claim = false;
    bool decode_ok = false;
    bool decode_correct = false;
    DecodeMode mode = DecodeMode::NoSignalSubset;
    int feedback_symbols = 0;
    std::uint64_t message_digest = 0;
    std::uint64_t decoded_digest = 0;
    std::vector<std::size_t> newly_identified;
};

enum class SessionVerdict { AllCorrect, Failure };

struct SessionResult {
    SessionVerdict verdict = SessionVerdict::Failure;
    std::vector<RoundTranscript> rounds;
    std::vector<std::size_t> identified;
    bool feedback_identified = false;
    int alarms = 0;
    int claims = 0;
};

SessionResult run_session(const SessionConfig& cfg);

const char* mode_name(DecodeMode mode);
const char* verdict_name(SessionVerdict v);

// CSV writers: one header row, stable columns.
void write_bounds_csv(std::ostream& out, const std::vector<NetworkParams>& tuples);
void write_session_csv(std::ostream& out, const SessionResult& result);

}  // namespace znec
