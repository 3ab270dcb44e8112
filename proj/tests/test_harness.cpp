#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "znec/harness.hpp"

using namespace znec;

namespace {

NetworkParams tuple(int n, int m, int a, int b, int c, int z, std::uint32_t q = 257) {
    NetworkParams p;
    p.n = n;
    p.m = m;
    p.a = a;
    p.b = b;
    p.c = c;
    p.z = z;
    p.q = q;
    return p;
}

const NetworkParams kRef0 = tuple(3, 4, 4, 2, 2, 2);

SessionConfig config(const NetworkParams& p, const std::string& strategy, std::uint64_t seed) {
    SessionConfig cfg;
    cfg.p = p;
    cfg.strategy = StrategySpec::parse(strategy);
    cfg.strategy.seed = seed;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("clean sessions decode every round using the exact feedback budget") {
    for (const NetworkParams& p : {kRef0, tuple(4, 6, 3, 1, 2, 3)}) {
        SessionResult res = run_session(config(p, "none", 5));
        CHECK(res.verdict == SessionVerdict::AllCorrect);
        CHECK(res.alarms == 0);
        CHECK(res.claims == 0);
        CHECK(res.identified.empty());
        CHECK_FALSE(res.feedback_identified);
        REQUIRE(res.rounds.size() == 3);
        for (const RoundTranscript& tr : res.rounds) {
            CHECK_FALSE(tr.adversary_active);
            CHECK(tr.decode_ok);
            CHECK(tr.decode_correct);
            CHECK(tr.feedback_symbols == p.b);
            CHECK(tr.message_digest == tr.decoded_digest);
        }
    }
}

TEST_CASE("sessions are deterministic in the seed") {
    SessionConfig cfg = config(kRef0, "random", 42);
    SessionResult r1 = run_session(cfg);
    SessionResult r2 = run_session(cfg);
    std::ostringstream s1, s2;
    write_session_csv(s1, r1);
    write_session_csv(s2, r2);
    CHECK(s1.str() == s2.str());

    SessionConfig other = config(kRef0, "random", 43);
    std::ostringstream s3;
    write_session_csv(s3, run_session(other));
    CHECK(s1.str() != s3.str());
}

TEST_CASE("named strategies never defeat the decoder on the reference tuple") {
    for (const char* strategy :
         {"single-first:link=0", "single-first:link=4", "hide:link=0,follow=5",
          "parity-only:row=1,coord=1", "feedback-tamper:mode=additive",
          "feedback-tamper:mode=suppress", "feedback-tamper:mode=forge-cs", "random"}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            SessionConfig cfg = config(kRef0, strategy, seed);
            SessionResult res = run_session(cfg);
            INFO(strategy, " seed ", seed);
            CHECK(res.verdict == SessionVerdict::AllCorrect);
            for (const RoundTranscript& tr : res.rounds) {
                if (tr.adversary_active) {
                    // each meddled round leaves a trace or decodes anyway
                    CHECK((tr.alarm || tr.claim || tr.decode_correct));
                }
            }
        }
    }
}

TEST_CASE("exhaustive attack walk samples decode on the one-adversary tuple") {
    NetworkParams p = tuple(2, 2, 3, 1, 1, 1, 5);
    CodecKeys keys = make_keys(p);
    for (std::uint64_t cursor = 0; cursor < 2600; cursor += 131) {
        SessionConfig cfg = config(p, "exhaustive", 1);
        cfg.strategy.cursor = cursor;
        cfg.keys = &keys;
        SessionResult res = run_session(cfg);
        INFO("cursor ", cursor);
        CHECK(res.verdict == SessionVerdict::AllCorrect);
    }
}

TEST_CASE("sessions demand the regime the scheme is built for") {
    // outside the tight feedback regime
    CHECK_THROWS_AS((void)run_session(config(tuple(2, 2, 3, 2, 1, 1), "none", 1)),
                    std::invalid_argument);
    // claim channel disabled by options
    SessionConfig no_claims = config(kRef0, "none", 1);
    no_claims.key_options.with_claims = false;
    CHECK_THROWS_AS((void)run_session(no_claims), std::invalid_argument);
    // shared keys built for different parameters
    CodecKeys wrong = make_keys(tuple(4, 6, 3, 1, 2, 3));
    SessionConfig mismatched = config(kRef0, "none", 1);
    mismatched.keys = &wrong;
    CHECK_THROWS_AS((void)run_session(mismatched), std::invalid_argument);
}

TEST_CASE("bounds table serializes with a stable header") {
    std::ostringstream out;
    write_bounds_csv(out, {kRef0});
    CHECK(out.str() ==
          "n,m,a,b,c,z,category,tight,upper_bound,sb1,sb2,sb3,sb4\n"
          "3,4,4,2,2,2,1,1,10,12,12,12,10\n");
}

TEST_CASE("session transcript serializes one row per round") {
    SessionResult res = run_session(config(kRef0, "single-first:link=0", 9));
    std::ostringstream out;
    write_session_csv(out, res);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "round,adversary_active,alarm,claim,mode,decode_ok,decode_correct,"
          "feedback_symbols,newly_identified,message_digest,decoded_digest");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("mode and verdict names are stable strings") {
    CHECK(std::string(mode_name(DecodeMode::SingleAdversary)) == "single-adversary");
    CHECK(std::string(mode_name(DecodeMode::NoSignalSubset)) == "no-signal-subset");
    CHECK(std::string(mode_name(DecodeMode::ClaimMds)) == "claim-mds");
    CHECK(std::string(mode_name(DecodeMode::PostIdentified)) == "post-identified");
    CHECK(std::string(mode_name(DecodeMode::VerifiedFeedback)) == "verified-feedback");
    CHECK(std::string(verdict_name(SessionVerdict::AllCorrect)) == "all-correct");
    CHECK(std::string(verdict_name(SessionVerdict::Failure)) == "failure");
}

TEST_CASE("longer adversarial sessions keep accumulating evidence") {
    SessionConfig cfg = config(kRef0, "hide:link=0,follow=5", 3);
    cfg.rounds = 6;
    SessionResult res = run_session(cfg);
    CHECK(res.verdict == SessionVerdict::AllCorrect);
    CHECK(res.rounds.size() == 6);
}
