#include "znec/harness.hpp"

#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "znec/bounds.hpp"

namespace znec {

namespace {

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string join_links(const std::vector<std::size_t>& links) {
    std::ostringstream out;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (i) out << ';';
        out << links[i];
    }
    return out.str();
}

}  // namespace

const char* mode_name(DecodeMode mode) {
    switch (mode) {
        case DecodeMode::SingleAdversary: return "single-adversary";
        case DecodeMode::NoSignalSubset: return "no-signal-subset";
        case DecodeMode::ClaimMds: return "claim-mds";
        case DecodeMode::PostIdentified: return "post-identified";
        case DecodeMode::VerifiedFeedback: return "verified-feedback";
    }
    return "unknown";
}

const char* verdict_name(SessionVerdict v) {
    return v == SessionVerdict::AllCorrect ? "all-correct" : "failure";
}

SessionResult run_session(const SessionConfig& cfg) {
    cfg.p.validate();
    if (!tight_condition(cfg.p)) {
        throw std::invalid_argument("sessions require the tight feedback regime");
    }

    CodecKeys local;
    const CodecKeys* keys = cfg.keys;
    if (keys) {
        const NetworkParams& kp = keys->p;
        if (kp.n != cfg.p.n || kp.m != cfg.p.m || kp.a != cfg.p.a || kp.b != cfg.p.b ||
            kp.c != cfg.p.c || kp.z != cfg.p.z || kp.q != cfg.p.q) {
            throw std::invalid_argument("shared keys were built for different parameters");
        }
    } else {
        local = make_keys(cfg.p, cfg.key_options);
        keys = &local;
    }
    if (!keys->claims_enabled) {
        throw std::invalid_argument("sessions need the claim channel enabled");
    }

    const std::size_t n = std::size_t(keys->p.n);
    const std::size_t m = std::size_t(keys->p.m);
    const std::size_t a = std::size_t(keys->p.a);
    const std::size_t c = std::size_t(keys->p.c);
    const std::size_t top = a - c;
    const Field f(keys->p.q);

    Rng msg_rng(cfg.seed ^ 0x6d65737361676531ULL);
    Adversary adv(*keys, cfg.strategy);
    NodeAState a_state = make_node_a(*keys);
    NodeBState b_state = make_node_b(*keys);
    SinkSession sink(*keys);

    SessionResult result;
    bool all_correct = true;

    for (int r = 0; r < cfg.rounds; ++r) {
        MessageBlock msg = random_message(*keys, msg_rng);
        Codeword sent = encode(*keys, msg);
        AdversaryAction act = adv.next_action(std::size_t(r), sent);
        Codeword received = apply_wire_errors(*keys, sent, act);

        SymbolMatrix upstream(a, n, f);
        for (std::size_t i = 0; i < a; ++i) {
            for (std::size_t j = 0; j < n; ++j) upstream.at(i, j) = received.mat.at(i, j);
        }

        RoundFeedback a_sent = node_a_observe(a_state, *keys, upstream);
        RoundFeedback b_copy = adv.tamper_feedback(act, a_sent);
        BVerdict verdict = node_b_verify(b_state, *keys, msg, b_copy);

        SinkView view;
        view.upstream = upstream;
        view.downstream = SymbolMatrix(c, m, f);
        for (std::size_t t = 0; t < c; ++t) {
            for (std::size_t j = 0; j < m; ++j) {
                view.downstream.at(t, j) = received.mat.at(top + t, n + j);
            }
        }
        view.echo = a_sent;
        view.claim_present = verdict.send_claim;
        if (verdict.send_claim) {
            SymbolMatrix x_block(top, n, f);
            for (std::size_t i = 0; i < top; ++i) {
                for (std::size_t j = 0; j < n; ++j) x_block.at(i, j) = sent.mat.at(i, j);
            }
            SymbolMatrix w = claim_matrix(*keys, x_block);
            for (const auto& [link, err] : act.claim_errors) {
                const std::size_t col = link - n;
                for (std::size_t i = 0; i < top && i < err.size(); ++i) {
                    w.at(i, col) = f.add(w.at(i, col), err[i]);
                }
            }
            view.claim = std::move(w);
        }

        const std::set<std::size_t> before = sink.identified();
        DecodeOutcome out = sink.process_round(view);

        RoundTranscript tr;
        tr.round = r;
        tr.adversary_active = act.touches_anything();
        tr.alarm = a_sent.cs;
        tr.claim = verdict.send_claim;
        tr.decode_ok = out.ok;
        tr.mode = out.mode;
        tr.feedback_symbols = payload_symbols(a_sent);
        const std::vector<Symbol> truth = flatten_message(*keys, msg);
        tr.message_digest = fnv1a64(truth);
        if (out.ok) {
            const std::vector<Symbol> decoded = flatten_message(*keys, out.message);
            tr.decoded_digest = fnv1a64(decoded);
            tr.decode_correct = decoded == truth;
        }
        for (std::size_t link : sink.identified()) {
            if (!before.count(link)) tr.newly_identified.push_back(link);
        }
        if (!tr.decode_correct) all_correct = false;
        if (tr.alarm) ++result.alarms;
        if (tr.claim) ++result.claims;
        result.rounds.push_back(std::move(tr));
    }

    result.identified.assign(sink.identified().begin(), sink.identified().end());
    result.feedback_identified = sink.feedback_identified();
    result.verdict = all_correct ? SessionVerdict::AllCorrect : SessionVerdict::Failure;
    return result;
}

void write_bounds_csv(std::ostream& out, const std::vector<NetworkParams>& tuples) {
    out << "n,m,a,b,c,z,category,tight,upper_bound,sb1,sb2,sb3,sb4\n";
    for (const NetworkParams& p : tuples) {
        BoundReport rep = bound_report(p);
        out << p.n << ',' << p.m << ',' << p.a << ',' << p.b << ',' << p.c << ',' << p.z << ','
            << rep.category << ',' << (rep.tight ? 1 : 0) << ',' << rep.ub << ','
            << rep.sb.at("SB1") << ',' << rep.sb.at("SB2") << ',' << rep.sb.at("SB3") << ','
            << rep.sb.at("SB4") << '\n';
    }
}

void write_session_csv(std::ostream& out, const SessionResult& result) {
    out << "round,adversary_active,alarm,claim,mode,decode_ok,decode_correct,"
           "feedback_symbols,newly_identified,message_digest,decoded_digest\n";
    for (const RoundTranscript& tr : result.rounds) {
        out << tr.round << ',' << (tr.adversary_active ? 1 : 0) << ',' << (tr.alarm ? 1 : 0)
            << ',' << (tr.claim ? 1 : 0) << ',' << mode_name(tr.mode) << ','
            << (tr.decode_ok ? 1 : 0) << ',' << (tr.decode_correct ? 1 : 0) << ','
            << tr.feedback_symbols << ',' << join_links(tr.newly_identified) << ','
            << hex64(tr.message_digest) << ',' << hex64(tr.decoded_digest) << '\n';
    }
}

}  // namespace znec
