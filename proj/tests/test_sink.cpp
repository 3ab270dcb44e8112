#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "znec/adversary.hpp"
#include "znec/sink.hpp"

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

// Drives one transmission round end to end with hand-written tampering so
// each decoder path can be exercised in isolation.
struct RoundLab {
    const CodecKeys& keys;
    NodeAState a_state;
    NodeAState a_clean;  // pretend-clean history, for feedback suppression
    NodeBState b_state;
    Rng rng;

    explicit RoundLab(const CodecKeys& k, std::uint64_t seed = 77)
        : keys(k),
          a_state(make_node_a(k)),
          a_clean(make_node_a(k)),
          b_state(make_node_b(k)),
          rng(seed) {}

    struct Step {
        MessageBlock msg;
        SinkView view;
    };

    Step run(const AdversaryAction& act) {
        const NetworkParams& p = keys.p;
        Field f(p.q);
        Step st;
        st.msg = random_message(keys, rng);
        Codeword sent = encode(keys, st.msg);
        Codeword recv = apply_wire_errors(keys, sent, act);

        SymbolMatrix up(std::size_t(p.a), std::size_t(p.n), f);
        for (int r = 0; r < p.a; ++r)
            for (int j = 0; j < p.n; ++j) up.at(r, j) = recv.mat.at(r, j);
        RoundFeedback a_fb = node_a_observe(a_state, keys, up);

        SymbolMatrix up_clean(std::size_t(p.a), std::size_t(p.n), f);
        for (int r = 0; r < p.a; ++r)
            for (int j = 0; j < p.n; ++j) up_clean.at(r, j) = sent.mat.at(r, j);
        RoundFeedback clean_fb = node_a_observe(a_clean, keys, up_clean);

        RoundFeedback to_b = act.fb_suppress_to_clean ? clean_fb : a_fb;
        if (act.fb_forge_cs) to_b.cs = true;
        if (!act.fb_additive.empty()) {
            std::size_t k = 0;
            for (RowFeedback& rf : to_b.rows)
                for (Symbol& s : rf.payload)
                    s = f.add(s, act.fb_additive[k++ % act.fb_additive.size()]);
        }

        BVerdict verdict = node_b_verify(b_state, keys, st.msg, to_b);

        st.view.upstream = up;
        st.view.downstream = SymbolMatrix(std::size_t(p.c), std::size_t(p.m), f);
        for (int t = 0; t < p.c; ++t)
            for (int j = 0; j < p.m; ++j)
                st.view.downstream.at(t, j) = recv.mat.at(p.a - p.c + t, p.n + j);
        st.view.echo = a_fb;
        st.view.claim_present = verdict.send_claim;
        if (verdict.send_claim && keys.claims_enabled) {
            SymbolMatrix x_block(std::size_t(p.a - p.c), std::size_t(p.n), f);
            for (int r = 0; r < p.a - p.c; ++r)
                for (int j = 0; j < p.n; ++j) x_block.at(r, j) = sent.mat.at(r, j);
            SymbolMatrix w = claim_matrix(keys, x_block);
            for (const auto& [link, err] : act.claim_errors)
                for (int r = 0; r < p.a - p.c; ++r)
                    w.at(r, link - p.n) = f.add(w.at(r, link - p.n), err.at(std::size_t(r)));
            st.view.claim = w;
        }
        return st;
    }
};

bool decoded_matches(const CodecKeys& keys, const DecodeOutcome& out, const MessageBlock& msg) {
    return out.ok && flatten_message(keys, out.message) == flatten_message(keys, msg);
}

AdversaryAction upstream_error(const CodecKeys& keys, std::size_t link,
                               std::vector<Symbol> err) {
    REQUIRE(err.size() == std::size_t(keys.p.a));
    AdversaryAction act;
    act.wire_errors[link] = std::move(err);
    return act;
}

AdversaryAction downstream_error(const CodecKeys& keys, std::size_t link,
                                 std::vector<Symbol> err) {
    REQUIRE(err.size() == std::size_t(keys.p.c));
    AdversaryAction act;
    act.wire_errors[link] = std::move(err);
    return act;
}

}  // namespace

TEST_CASE("surviving symbol count after the worst-case removal") {
    CHECK(post_removal_count(kRef0) == 12);
    CHECK(post_removal_count(tuple(4, 6, 3, 1, 2, 3)) == 12);
    CHECK(post_removal_count(tuple(3, 4, 4, 1, 1, 2)) == 8);
    CHECK(post_removal_count(tuple(4, 6, 3, 2, 2, 3)) == 12);
    // never below the message count in the tight regime
    for (const NetworkParams& p :
         {kRef0, tuple(4, 6, 3, 1, 2, 3), tuple(3, 4, 4, 1, 1, 2), tuple(4, 6, 3, 2, 2, 3)}) {
        CHECK(post_removal_count(p) >= upper_bound(p));
    }
}

TEST_CASE("symbol budget behind the verified-feedback decoder") {
    // larger budget, feedback one below its ceiling
    SingleIdentifiedBudget b1 = single_identified_budget(tuple(4, 6, 3, 2, 2, 3));
    CHECK(b1.r1 == 0);
    CHECK(b1.r2 == 10);
    CHECK(b1.relayed == 2);
    CHECK(b1.r1 + b1.r2 + b1.relayed >= upper_bound(tuple(4, 6, 3, 2, 2, 3)));

    // two-link budget with an odd feedback capacity
    SingleIdentifiedBudget b2 = single_identified_budget(tuple(3, 4, 4, 1, 1, 2));
    CHECK(b2.r1 == 2);
    CHECK(b2.r2 == 4);
    CHECK(b2.relayed == 1);
    CHECK(b2.r1 + b2.r2 + b2.relayed == upper_bound(tuple(3, 4, 4, 1, 1, 2)));

    // even feedback at z == 2 is outside the covered regimes
    CHECK_THROWS_AS((void)single_identified_budget(kRef0), std::invalid_argument);
}

TEST_CASE("clean rounds decode everywhere") {
    for (const NetworkParams& p : {kRef0, tuple(4, 6, 3, 1, 2, 3)}) {
        CodecKeys keys = make_keys(p);
        RoundLab lab(keys);
        SinkSession sink(keys);
        for (int round = 0; round < 3; ++round) {
            RoundLab::Step st = lab.run({});
            CHECK_FALSE(st.view.claim_present);
            DecodeOutcome out = sink.process_round(st.view);
            CHECK(decoded_matches(keys, out, st.msg));
            CHECK(out.mode == DecodeMode::NoSignalSubset);
            CHECK(out.implicated.empty());
        }
        CHECK(sink.identified().empty());
        CHECK_FALSE(sink.feedback_identified());
    }
}

TEST_CASE("one-link budget decodes through the plain sweep") {
    CodecKeys keys = make_keys(tuple(2, 2, 3, 1, 1, 1, 5));
    RoundLab lab(keys);
    SinkSession sink(keys);

    RoundLab::Step clean = lab.run({});
    DecodeOutcome out = sink.process_round(clean.view);
    CHECK(decoded_matches(keys, out, clean.msg));
    CHECK(out.mode == DecodeMode::SingleAdversary);

    RoundLab::Step hit = lab.run(downstream_error(keys, 2, {3}));
    DecodeOutcome out2 = sink.process_round(hit.view);
    CHECK(decoded_matches(keys, out2, hit.msg));
    CHECK(out2.implicated == std::vector<std::size_t>{2});
    CHECK(sink.identified() == std::set<std::size_t>{2});
}

TEST_CASE("silent downstream corruption is removed by hypothesis sweep") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    RoundLab::Step st = lab.run(downstream_error(keys, 5, {4, 9}));
    CHECK_FALSE(st.view.claim_present);  // neither relay can see it
    CHECK_FALSE(st.view.echo.cs);
    DecodeOutcome out = sink.process_round(st.view);
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(out.implicated == std::vector<std::size_t>{5});
    CHECK(sink.identified() == std::set<std::size_t>{5});
}

TEST_CASE("an upstream hit on an all-message row rides home on the claim") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    // row 0 is the all-message row; the helper relay cannot alarm but the
    // downstream relay claims, and the claim carries enough redundancy
    AdversaryAction act = upstream_error(keys, 0, {5, 0, 0, 0});
    RoundLab::Step st = lab.run(act);
    CHECK_FALSE(st.view.echo.cs);
    CHECK(st.view.claim_present);
    DecodeOutcome out = sink.process_round(st.view);
    CHECK(out.mode == DecodeMode::ClaimMds);
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(out.implicated == std::vector<std::size_t>{0});
    CHECK(sink.identified() == std::set<std::size_t>{0});
}

TEST_CASE("claim columns can be corrupted without losing the round") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    AdversaryAction act = upstream_error(keys, 0, {5, 0, 0, 0});
    act.claim_errors[3] = {7, 2};  // downstream link 3 owns claim column 0
    RoundLab::Step st = lab.run(act);
    REQUIRE(st.view.claim_present);
    DecodeOutcome out = sink.process_round(st.view);
    CHECK(out.mode == DecodeMode::ClaimMds);
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(out.implicated == std::vector<std::size_t>{0, 3});
    CHECK(sink.identified() == std::set<std::size_t>{0, 3});
}

TEST_CASE("suppressed feedback betrays the feedback link itself") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    // corrupt the wire-parity row so the helper relay alarms, then deliver a
    // clean-looking forgery to the downstream relay
    AdversaryAction act = upstream_error(keys, 0, {0, 6, 0, 0});
    act.fb_suppress_to_clean = true;
    RoundLab::Step st = lab.run(act);
    CHECK(st.view.echo.cs);            // the authentic echo still alarms
    CHECK_FALSE(st.view.claim_present);  // the forgery kept the relay quiet

    DecodeOutcome out = sink.process_round(st.view);
    CHECK(sink.feedback_identified());
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(out.implicated == std::vector<std::size_t>{0});
    CHECK(sink.identified() == std::set<std::size_t>{0});
}

TEST_CASE("additive feedback tampering is exposed by replaying the verifier") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    AdversaryAction act;
    act.fb_additive = {1};
    RoundLab::Step st = lab.run(act);
    CHECK(st.view.claim_present);  // the downstream relay sees the mismatch
    CHECK_FALSE(st.view.echo.cs);

    DecodeOutcome out = sink.process_round(st.view);
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(out.implicated.empty());      // no wire was touched
    CHECK(sink.feedback_identified());  // a claim the echo cannot explain
}

TEST_CASE("a forged alarm flag is exposed the same way") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    AdversaryAction act;
    act.fb_forge_cs = true;
    RoundLab::Step st = lab.run(act);
    CHECK(st.view.claim_present);
    CHECK_FALSE(st.view.echo.cs);

    DecodeOutcome out = sink.process_round(st.view);
    CHECK(decoded_matches(keys, out, st.msg));
    CHECK(sink.feedback_identified());
}

TEST_CASE("identification accumulates across rounds") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    SinkSession sink(keys);

    // round 1: silent bottom-cell corruption on upstream link 0
    RoundLab::Step r1 = lab.run(upstream_error(keys, 0, {0, 0, 8, 0}));
    CHECK(decoded_matches(keys, sink.process_round(r1.view), r1.msg));
    CHECK(sink.identified() == std::set<std::size_t>{0});

    // round 2: a second silent culprit downstream
    RoundLab::Step r2 = lab.run(downstream_error(keys, 5, {1, 1}));
    CHECK(decoded_matches(keys, sink.process_round(r2.view), r2.msg));
    CHECK(sink.identified() == std::set<std::size_t>{0, 5});

    // round 3: both known culprits fire at once; the sweep has them for free
    AdversaryAction both;
    both.wire_errors[0] = {0, 0, 3, 1};
    both.wire_errors[5] = {2, 9};
    RoundLab::Step r3 = lab.run(both);
    DecodeOutcome out3 = sink.process_round(r3.view);
    CHECK(out3.mode == DecodeMode::PostIdentified);
    CHECK(decoded_matches(keys, out3, r3.msg));
}

TEST_CASE("verified-feedback decoding covers the one-identified-link regime") {
    CodecKeys keys = make_keys(tuple(3, 4, 4, 1, 1, 2, 11));
    REQUIRE(keys.claims_enabled);
    REQUIRE(keys.plans.size() == 3);
    REQUIRE(keys.plans[2].kind == RowCase::SingleSyndrome);

    DecodeContext ctx;
    ctx.identified = {0};

    SUBCASE("clean view") {
        RoundLab lab(keys);
        RoundLab::Step st = lab.run({});
        DecodeOutcome out = decode(keys, st.view, ctx);
        CHECK(out.mode == DecodeMode::VerifiedFeedback);
        CHECK(decoded_matches(keys, out, st.msg));
    }

    SUBCASE("silent bottom corruption next to the signalled link") {
        RoundLab lab(keys);
        RoundLab::Step st = lab.run(upstream_error(keys, 1, {0, 0, 0, 6}));
        CHECK_FALSE(st.view.claim_present);
        DecodeOutcome out = decode(keys, st.view, ctx);
        CHECK(out.mode == DecodeMode::VerifiedFeedback);
        CHECK(decoded_matches(keys, out, st.msg));
        CHECK(out.implicated == std::vector<std::size_t>{1});
    }

    SUBCASE("silent downstream corruption") {
        RoundLab lab(keys);
        RoundLab::Step st = lab.run(downstream_error(keys, 4, {3}));
        DecodeOutcome out = decode(keys, st.view, ctx);
        CHECK(out.mode == DecodeMode::VerifiedFeedback);
        CHECK(decoded_matches(keys, out, st.msg));
        CHECK(out.implicated == std::vector<std::size_t>{4});
    }
}

TEST_CASE("agreement checking can be traded for speed on clean rounds") {
    CodecKeys keys = make_keys(kRef0);
    RoundLab lab(keys);
    DecodeOptions fast;
    fast.verify_agreement = false;

    RoundLab::Step st = lab.run({});
    DecodeOutcome out = decode(keys, st.view, {}, fast);
    CHECK(decoded_matches(keys, out, st.msg));
}

TEST_CASE("hypothesis enumeration refuses oversized networks") {
    NetworkParams p = tuple(12, 10, 3, 1, 1, 2, 23);
    KeyOptions opt;
    opt.verify = false;
    CodecKeys keys = make_keys(p, opt);
    RoundLab lab(keys);
    RoundLab::Step st = lab.run({});
    CHECK_THROWS_AS((void)consistency_decode(keys, st.view, {}), std::invalid_argument);
}
