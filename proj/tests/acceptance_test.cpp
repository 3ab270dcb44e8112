// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets are wall-clock limits enforced in code.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

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

const NetworkParams kRef0 = tuple(3, 4, 4, 2, 2, 2);        // z = 2 reference
const NetworkParams kRef1 = tuple(4, 6, 3, 1, 2, 3);        // z = 3 reference
const NetworkParams kOne = tuple(2, 2, 3, 1, 1, 1, 5);      // z = 1, small field
const NetworkParams kTiny = tuple(2, 2, 2, 1, 1, 1, 2);     // converse preset

bool g_all_ok = true;

// Runs one criterion body, times it, prints exactly one result line.
void criterion(int id, const char* label, double budget_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        ok = false;
        detail += detail.empty() ? "" : "; ";
        detail += "over budget";
    }
    std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs)%s%s\n", ok ? "PASS" : "FAIL", id,
                label, secs, budget_s, detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) g_all_ok = false;
}

// The shared parameter grid: every admissible small tuple.
template <typename F>
int for_each_grid_tuple(F&& fn) {
    int count = 0;
    for (int a = 2; a <= 8; ++a)
        for (int c = 1; c < a; ++c)
            for (int b = 1; b < a; ++b)
                for (int z = 1; z <= 3; ++z)
                    for (int n = z; n <= 6; ++n)
                        for (int m = z; m <= 8; ++m) {
                            ++count;
                            if (!fn(tuple(n, m, a, b, c, z))) return -count;
                        }
    return count;
}

// Enumerate all size-s subsets of {0..l-1}.
template <typename F>
void for_each_support(std::size_t l, std::size_t s, F&& fn) {
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = s;
        while (i > 0 && idx[i - 1] == l - s + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Check that one code corrects every error of the given support exhaustively
// over all nonzero value assignments.
bool corrects_all_values(const MdsCode& code, const std::vector<Symbol>& msg,
                         const std::vector<std::size_t>& support, std::size_t t) {
    const std::uint32_t q = code.field.order();
    std::vector<Symbol> word = mds_encode(code, msg);
    std::vector<Symbol> vals(support.size(), 1);
    while (true) {
        std::vector<Symbol> received = word;
        for (std::size_t i = 0; i < support.size(); ++i)
            received[support[i]] = code.field.add(received[support[i]], vals[i]);
        ErrorDecodeResult res = mds_error_decode(code, received, t);
        if (!res.ok || res.message != msg) return false;
        std::vector<std::size_t> pos = res.error_positions;
        std::sort(pos.begin(), pos.end());
        if (pos != support) return false;
        // odometer over nonzero values
        std::size_t i = 0;
        while (i < vals.size() && vals[i] == q - 1) vals[i++] = 1;
        if (i == vals.size()) break;
        ++vals[i];
    }
    return true;
}

SessionConfig session_config(const NetworkParams& p, const std::string& strategy,
                             std::uint64_t seed, const CodecKeys* keys) {
    SessionConfig cfg;
    cfg.p = p;
    cfg.strategy = StrategySpec::parse(strategy);
    cfg.strategy.seed = seed;
    cfg.seed = seed;
    cfg.keys = keys;
    return cfg;
}

}  // namespace

int main() {
    criterion(1, "rate identity on the z=2 reference tuple", 1.0, [](std::string& detail) {
        CodecKeys keys = make_keys(kRef0);
        int consumed = message_symbol_count(keys);
        int ub = upper_bound(kRef0);
        Rng rng(7);
        MessageBlock msg = random_message(keys, rng);
        bool sized = flatten_message(keys, msg).size() == static_cast<std::size_t>(consumed);
        std::ostringstream os;
        os << "symbols_per_codeword=" << consumed << " bound=" << ub;
        detail = os.str();
        return consumed == ub && ub == 10 && sized;
    });

    criterion(2, "bound ordering and identified margin on the grid", 10.0, [](std::string& detail) {
        int tight_count = 0;
        bool ok = true;
        int total = for_each_grid_tuple([&](const NetworkParams& p) {
            BoundReport r = bound_report(p);
            if (!r.tight) return true;
            ++tight_count;
            int smin = std::min({r.sb.at("SB1"), r.sb.at("SB2"), r.sb.at("SB3")});
            if (!(r.ub < smin) || !(identified_margin(p, 2) > 0)) {
                ok = false;
                return false;
            }
            return true;
        });
        std::ostringstream os;
        os << "tuples=" << std::abs(total) << " tight=" << tight_count;
        detail = os.str();
        return ok && total == 14980 && tight_count > 0;
    });

    criterion(3, "cut bound matches the rate formula on the grid", 5.0, [](std::string& detail) {
        int total = for_each_grid_tuple([&](const NetworkParams& p) {
            std::vector<int> z1, z2;
            for (int i = 0; i < p.z; ++i) {
                z1.push_back(i);
                z2.push_back(p.n + i);
            }
            return confusion_bound(four_node_cut(p), z1, z2, p.z) == upper_bound(p);
        });
        std::ostringstream os;
        os << "tuples=" << std::abs(total);
        detail = os.str();
        return total == 14980;
    });

    criterion(4, "tiny-preset converse: confusable pair with identical replay", 60.0,
              [](std::string& detail) {
                  TinyNetwork net = make_tiny_network(kTiny, 1);
                  int expo = min_confusion_bound(four_node_cut(kTiny), kTiny.z);
                  std::size_t size = 1;
                  for (int i = 0; i < expo; ++i) size *= kTiny.q;
                  size += 1;
                  std::vector<TinyCodeword> book = tiny_codebook(net, size);
                  bool found = false, identical = false;
                  for (int up = 0; up < kTiny.n && !found; ++up)
                      for (int down = 0; down < kTiny.m && !found; ++down) {
                          auto pair = confusion_attack(net, book, {up}, {kTiny.n + down});
                          if (!pair) continue;
                          found = true;
                          auto [o1, o2] = confusion_replay(net, *pair, book);
                          identical = o1.upstream == o2.upstream &&
                                      o1.downstream == o2.downstream && o1.feedback == o2.feedback;
                      }
                  std::ostringstream os;
                  os << "codebook=" << size << " exponent=" << expo;
                  detail = os.str();
                  return expo == 4 && size == 17 && found && identical;
              });

    criterion(5, "MDS construction, erasure, and error-correction sweeps", 60.0,
              [](std::string& detail) {
                  // (a) every dim-subset of columns has full rank, lengths <= 12
                  for (std::uint32_t q : {13u, 257u})
                      for (std::size_t l = 1; l <= 12; ++l)
                          for (std::size_t k = 1; k <= l; ++k)
                              if (!verify_mds(make_mds(k, l, q, 11))) {
                                  detail = "rank check failed";
                                  return false;
                              }
                  // (b) erasure decoding from every dim-subset, (3,7) over GF(11),
                  // exhaustively over all messages
                  MdsCode er = make_mds(3, 7, 11, 5);
                  for (std::uint32_t v = 0; v < 11 * 11 * 11; ++v) {
                      std::vector<Symbol> msg = {v % 11, (v / 11) % 11, (v / 121) % 11};
                      std::vector<Symbol> word = mds_encode(er, msg);
                      bool ok = true;
                      for_each_support(7, 3, [&](const std::vector<std::size_t>& keep) {
                          std::map<std::size_t, Symbol> known;
                          for (std::size_t posn : keep) known[posn] = word[posn];
                          ErasureResult res = mds_erasure_decode(er, known);
                          if (!res.ok || res.message != msg) ok = false;
                      });
                      if (!ok) {
                          detail = "erasure decode failed";
                          return false;
                      }
                  }
                  // (c) bounded-distance error decoding, all supports x all nonzero
                  // values. The construction needs q > length, so GF(5) covers
                  // lengths up to 4 and GF(11) carries lengths 5..8.
                  for (std::size_t l = 3; l <= 8; ++l) {
                      std::uint32_t q = l < 5 ? 5 : 11;
                      for (std::size_t k = 1; k + 2 <= l; ++k) {
                          std::size_t t = (l - k) / 2;
                          MdsCode code = make_mds(k, l, q, 3);
                          std::vector<std::vector<Symbol>> msgs;
                          if (q == 5) {  // all messages (k <= 2 here)
                              std::size_t count = 1;
                              for (std::size_t i = 0; i < k; ++i) count *= q;
                              for (std::size_t v = 0; v < count; ++v) {
                                  std::vector<Symbol> msg(k);
                                  std::size_t rem = v;
                                  for (std::size_t i = 0; i < k; ++i, rem /= q) msg[i] = rem % q;
                                  msgs.push_back(msg);
                              }
                          } else {
                              Rng rng(l * 100 + k);
                              for (int r = 0; r < 3; ++r) {
                                  std::vector<Symbol> msg(k);
                                  for (auto& sym : msg) sym = static_cast<Symbol>(rng.below(q));
                                  msgs.push_back(msg);
                              }
                          }
                          for (const auto& msg : msgs)
                              for (std::size_t s = 1; s <= t; ++s) {
                                  bool ok = true;
                                  for_each_support(l, s, [&](const std::vector<std::size_t>& sup) {
                                      if (!corrects_all_values(code, msg, sup, t)) ok = false;
                                  });
                                  if (!ok) {
                                      std::ostringstream os;
                                      os << "error decode failed at length " << l << " dim " << k;
                                      detail = os.str();
                                      return false;
                                  }
                              }
                      }
                  }
                  detail = "fields: GF(5) through length 4, GF(11) for 5..8 (codes need q > length)";
                  return true;
              });

    criterion(6, "10^5 clean rounds: no alarms, no claims, budget-exact feedback", 60.0,
              [](std::string& detail) {
                  long long rounds = 0;
                  for (const NetworkParams& p : {kRef0, kRef1}) {
                      CodecKeys keys = make_keys(p);
                      NodeAState a_state = make_node_a(keys);
                      NodeBState b_state = make_node_b(keys);
                      Rng rng(0x5eedULL + p.z);
                      SymbolMatrix up(p.a, p.n, Field(p.q));
                      for (int r = 0; r < 50000; ++r) {
                          MessageBlock msg = random_message(keys, rng);
                          Codeword cw = encode(keys, msg);
                          for (int i = 0; i < p.a; ++i)
                              for (int j = 0; j < p.n; ++j) up.at(i, j) = cw.mat.at(i, j);
                          RoundFeedback fb = node_a_observe(a_state, keys, up);
                          BVerdict verdict = node_b_verify(b_state, keys, msg, fb);
                          if (fb.cs || verdict.send_claim || payload_symbols(fb) != p.b) {
                              std::ostringstream os;
                              os << "violation at round " << r << " on z=" << p.z;
                              detail = os.str();
                              return false;
                          }
                          ++rounds;
                      }
                  }
                  std::ostringstream os;
                  os << "rounds=" << rounds;
                  detail = os.str();
                  return rounds == 100000;
              });

    criterion(7, "single-adversary tuple: exhaustive attack walk decodes", 300.0,
              [](std::string& detail) {
                  CodecKeys keys = make_keys(kOne);
                  std::uint64_t space = exhaustive_space_size(kOne);
                  if (space != 2600) {
                      detail = "unexpected attack-space size";
                      return false;
                  }
                  for (std::uint64_t cursor = 0; cursor < space; ++cursor) {
                      SessionConfig cfg = session_config(kOne, "exhaustive", 1 + cursor, &keys);
                      cfg.strategy.cursor = cursor;
                      SessionResult res = run_session(cfg);
                      if (res.verdict != SessionVerdict::AllCorrect) {
                          std::ostringstream os;
                          os << "failure at cursor " << cursor;
                          detail = os.str();
                          return false;
                      }
                  }
                  std::ostringstream os;
                  os << "sessions=" << space << " rounds_each=3";
                  detail = os.str();
                  return true;
              });

    criterion(8, "z=2 scenario battery: 5 strategies x 10^4 seeded trials", 600.0,
              [](std::string& detail) {
                  CodecKeys keys = make_keys(kRef0);
                  const char* modes[] = {"additive", "suppress", "forge-cs"};
                  long long sessions = 0;
                  for (int family = 0; family < 5; ++family)
                      for (std::uint64_t trial = 0; trial < 10000; ++trial) {
                          std::ostringstream spec;
                          switch (family) {
                              case 0: spec << "single-first:link=" << trial % 7; break;
                              case 1:
                                  spec << "hide:link=" << trial % 3 << ",follow=" << 3 + trial % 4;
                                  break;
                              case 2:
                                  spec << "parity-only:row=" << trial % 2 << ",coord=" << trial % 3;
                                  break;
                              case 3: spec << "feedback-tamper:mode=" << modes[trial % 3]; break;
                              case 4: spec << "random"; break;
                          }
                          SessionConfig cfg = session_config(kRef0, spec.str(), 1 + trial, &keys);
                          SessionResult res = run_session(cfg);
                          ++sessions;
                          bool traced = true;
                          for (const RoundTranscript& tr : res.rounds)
                              if (tr.adversary_active && !tr.alarm && !tr.claim && !tr.decode_correct)
                                  traced = false;
                          if (res.verdict != SessionVerdict::AllCorrect || !traced) {
                              std::ostringstream os;
                              os << "failure: strategy " << spec.str() << " trial " << trial;
                              detail = os.str();
                              return false;
                          }
                      }
                  std::ostringstream os;
                  os << "sessions=" << sessions;
                  detail = os.str();
                  return sessions == 50000;
              });

    criterion(9, "scope note", 1.0, [](std::string& detail) {
        detail =
            "no external numeric result tables exist for this scheme; "
            "all acceptance is property-based per criteria 1-8";
        return true;
    });

    std::printf("%s\n", g_all_ok ? "ACCEPTANCE: all criteria passed"
                                 : "ACCEPTANCE: at least one criterion failed");
    return g_all_ok ? 0 : 1;
}
