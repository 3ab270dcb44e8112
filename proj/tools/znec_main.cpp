#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "znec/adversary.hpp"
#include "znec/bounds.hpp"
#include "znec/harness.hpp"

namespace {

std::uint64_t env_seed() {
    const char* s = std::getenv("ZNEC_SEED");
    if (!s || !*s) return 1;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') return 1;
    return v;
}

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

int run_bounds(const znec::NetworkParams& p, bool csv) {
    if (csv) {
        znec::write_bounds_csv(std::cout, {p});
        return 0;
    }
    znec::BoundReport rep = znec::bound_report(p);
    std::cout << "upper_bound=" << rep.ub << "\ncategory=" << rep.category
              << "\ntight=" << (rep.tight ? "yes" : "no");
    for (const auto& [name, value] : rep.sb) std::cout << '\n' << name << '=' << value;
    std::cout << "\nmargin_at_2=" << rep.margin_at_2 << '\n';
    return 0;
}

int run_sweep(int a_max, int z_max, int n_max, int m_max, bool tight_only, bool csv) {
    std::vector<znec::NetworkParams> tuples;
    int tight = 0;
    for (int a = 2; a <= a_max; ++a) {
        for (int c = 1; c < a; ++c) {
            for (int b = 1; b < a; ++b) {
                for (int z = 1; z <= z_max; ++z) {
                    for (int n = z; n <= n_max; ++n) {
                        for (int m = z; m <= m_max; ++m) {
                            znec::NetworkParams p;
                            p.n = n;
                            p.m = m;
                            p.a = a;
                            p.b = b;
                            p.c = c;
                            p.z = z;
                            const bool is_tight = znec::tight_condition(p);
                            if (is_tight) ++tight;
                            if (tight_only && !is_tight) continue;
                            tuples.push_back(p);
                        }
                    }
                }
            }
        }
    }
    if (csv) {
        znec::write_bounds_csv(std::cout, tuples);
    } else {
        std::cout << "tuples=" << tuples.size() << " tight=" << tight << '\n';
    }
    return 0;
}

struct SimulateArgs {
    znec::NetworkParams p;
    int rounds = 3;
    int trials = 1;
    std::string strategy = "none";
    std::uint64_t seed = 1;
    bool csv = false;
    std::string keys_in;
    std::string keys_out;
};

int run_simulate(const SimulateArgs& args) {
    znec::CodecKeys keys;
    if (!args.keys_in.empty()) {
        std::ifstream in(args.keys_in, std::ios::binary);
        if (!in) {
            std::cerr << "cannot read key blob: " << args.keys_in << '\n';
            return 2;
        }
        std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
        keys = znec::deserialize_keys(blob);
    } else {
        keys = znec::make_keys(args.p);
    }
    if (!args.keys_out.empty()) {
        const std::vector<std::uint8_t> blob = znec::serialize_keys(keys);
        std::ofstream out(args.keys_out, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write key blob: " << args.keys_out << '\n';
            return 2;
        }
        out.write(reinterpret_cast<const char*>(blob.data()),
                  std::streamsize(blob.size()));
        std::cout << "keys_digest=" << hex64(znec::fnv1a64(blob.data(), blob.size())) << '\n';
    }

    if (args.csv) {
        std::cout << "trial,round,adversary_active,alarm,claim,mode,decode_ok,decode_correct,"
                     "feedback_symbols,newly_identified,message_digest,decoded_digest\n";
    }

    int all_correct = 0;
    for (int trial = 0; trial < args.trials; ++trial) {
        znec::SessionConfig cfg;
        cfg.p = args.p;
        cfg.rounds = args.rounds;
        cfg.strategy = znec::StrategySpec::parse(args.strategy);
        cfg.strategy.seed = args.seed + std::uint64_t(trial);
        cfg.seed = args.seed + std::uint64_t(trial);
        cfg.keys = &keys;
        znec::SessionResult res = znec::run_session(cfg);
        if (res.verdict == znec::SessionVerdict::AllCorrect) ++all_correct;

        if (args.csv) {
            for (const znec::RoundTranscript& tr : res.rounds) {
                std::cout << trial << ',' << tr.round << ',' << (tr.adversary_active ? 1 : 0)
                          << ',' << (tr.alarm ? 1 : 0) << ',' << (tr.claim ? 1 : 0) << ','
                          << znec::mode_name(tr.mode) << ',' << (tr.decode_ok ? 1 : 0) << ','
                          << (tr.decode_correct ? 1 : 0) << ',' << tr.feedback_symbols << ','
                          << join_links(tr.newly_identified) << ','
                          << hex64(tr.message_digest) << ',' << hex64(tr.decoded_digest)
                          << '\n';
            }
        } else {
            std::cout << "trial=" << trial << " verdict=" << znec::verdict_name(res.verdict)
                      << " alarms=" << res.alarms << " claims=" << res.claims
                      << " identified=" << join_links(res.identified)
                      << " feedback_identified=" << (res.feedback_identified ? 1 : 0) << '\n';
        }
    }
    if (!args.csv) {
        std::cout << "trials=" << args.trials << " all_correct=" << all_correct << '\n';
    }
    return all_correct == args.trials ? 0 : 1;
}

int run_attack_demo(const std::string& preset) {
    if (preset != "z1q2") {
        std::cerr << "unknown preset: " << preset << " (available: z1q2)\n";
        return 2;
    }
    znec::NetworkParams p;
    p.n = 2;
    p.m = 2;
    p.a = 2;
    p.b = 1;
    p.c = 1;
    p.z = 1;
    p.q = 2;
    const znec::TinyNetwork net = znec::make_tiny_network(p, 1);

    // Smallest codebook that must contain a confusable pair for some choice
    // of single adversarial links on each side of the relay.
    const znec::CutSpec cut = znec::four_node_cut(p);
    const int exponent = znec::min_confusion_bound(cut, p.z);
    std::size_t size = 1;
    for (int i = 0; i < exponent; ++i) size *= p.q;
    size += 1;
    const std::vector<znec::TinyCodeword> codebook = znec::tiny_codebook(net, size);
    std::cout << "codebook=" << codebook.size() << " distinguishable_exponent=" << exponent
              << '\n';

    for (int up = 0; up < p.n; ++up) {
        for (int down = 0; down < p.m; ++down) {
            const std::vector<int> z1{up};
            const std::vector<int> z2{p.n + down};
            auto pair = znec::confusion_attack(net, codebook, z1, z2);
            if (!pair) continue;
            auto [obs1, obs2] = znec::confusion_replay(net, *pair, codebook);
            const bool identical = obs1.upstream == obs2.upstream &&
                                   obs1.downstream == obs2.downstream &&
                                   obs1.feedback == obs2.feedback;
            std::cout << "confusable=yes upstream_link=" << up << " downstream_link="
                      << (p.n + down) << " first=" << pair->first << " second=" << pair->second
                      << " replay_identical=" << (identical ? "yes" : "no") << '\n';
            return identical ? 0 : 1;
        }
    }
    std::cout << "confusable=no\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network error correction with a low-capacity helper feedback link"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");

    int rc = 0;

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "rate bounds for one parameter tuple");
    bounds_cmd->configurable();
    znec::NetworkParams bp;
    bp.n = 3;
    bp.m = 4;
    bp.a = 4;
    bp.b = 2;
    bp.c = 2;
    bp.z = 2;
    bool bounds_csv = false;
    bounds_cmd->add_option("-n,--n", bp.n, "upstream links");
    bounds_cmd->add_option("-m,--m", bp.m, "downstream links");
    bounds_cmd->add_option("-a,--a", bp.a, "upstream link capacity");
    bounds_cmd->add_option("-b,--b", bp.b, "feedback link capacity");
    bounds_cmd->add_option("-c,--c", bp.c, "downstream link capacity");
    bounds_cmd->add_option("-z,--z", bp.z, "adversarial link budget");
    bounds_cmd->add_flag("--csv", bounds_csv, "emit CSV with a header row");
    bounds_cmd->callback([&] { rc = run_bounds(bp, bounds_csv); });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "bounds over a parameter grid");
    sweep_cmd->configurable();
    int a_max = 8, z_max = 3, n_max = 6, m_max = 8;
    bool tight_only = false, sweep_csv = false;
    sweep_cmd->add_option("--a-max", a_max, "largest upstream capacity");
    sweep_cmd->add_option("--z-max", z_max, "largest adversary budget");
    sweep_cmd->add_option("--n-max", n_max, "largest upstream link count");
    sweep_cmd->add_option("--m-max", m_max, "largest downstream link count");
    sweep_cmd->add_flag("--tight-only", tight_only, "keep only tight-regime tuples");
    sweep_cmd->add_flag("--csv", sweep_csv, "emit CSV with a header row");
    sweep_cmd->callback([&] { rc = run_sweep(a_max, z_max, n_max, m_max, tight_only, sweep_csv); });

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run adversarial sessions");
    sim_cmd->configurable();
    SimulateArgs sa;
    sa.p.n = 3;
    sa.p.m = 4;
    sa.p.a = 4;
    sa.p.b = 2;
    sa.p.c = 2;
    sa.p.z = 2;
    sa.p.q = 257;
    sa.seed = env_seed();
    sim_cmd->add_option("-n,--n", sa.p.n, "upstream links");
    sim_cmd->add_option("-m,--m", sa.p.m, "downstream links");
    sim_cmd->add_option("-a,--a", sa.p.a, "upstream link capacity");
    sim_cmd->add_option("-b,--b", sa.p.b, "feedback link capacity");
    sim_cmd->add_option("-c,--c", sa.p.c, "downstream link capacity");
    sim_cmd->add_option("-z,--z", sa.p.z, "adversarial link budget");
    sim_cmd->add_option("-q,--q", sa.p.q, "field size (prime)");
    sim_cmd->add_option("--rounds", sa.rounds, "rounds per session");
    sim_cmd->add_option("--trials", sa.trials, "independent sessions");
    sim_cmd->add_option("--strategy", sa.strategy,
                        "adversary strategy, e.g. none, single-first:link=0, hide:link=0+follow=5");
    sim_cmd->add_option("--seed", sa.seed, "base seed (default: ZNEC_SEED or 1)");
    sim_cmd->add_flag("--csv", sa.csv, "emit per-round CSV with a header row");
    sim_cmd->add_option("--keys-out", sa.keys_out, "write the key blob to this file");
    sim_cmd->add_option("--keys-in", sa.keys_in, "load the key blob from this file");
    sim_cmd->callback([&] { rc = run_simulate(sa); });

    // attack-demo
    auto* demo_cmd = app.add_subcommand("attack-demo",
                                        "exhibit a confusable pair on a tiny network");
    demo_cmd->configurable();
    std::string preset = "z1q2";
    demo_cmd->add_option("--tiny-preset", preset, "tiny network preset name");
    demo_cmd->callback([&] { rc = run_attack_demo(preset); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
