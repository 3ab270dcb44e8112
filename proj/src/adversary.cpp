#include "znec/adversary.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace znec {

namespace {

SymbolMatrix top_wire_block(const CodecKeys& keys, const Codeword& sent) {
    const std::size_t n = static_cast<std::size_t>(keys.p.n);
    const std::size_t a = static_cast<std::size_t>(keys.p.a);
    SymbolMatrix out(a, n, sent.mat.field());
    for (std::size_t r = 0; r < a; ++r) {
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = sent.mat.at(r, c);
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

bool AdversaryAction::touches_anything() const {
    if (!wire_errors.empty() || !claim_errors.empty()) return true;
    if (fb_suppress_to_clean || fb_forge_cs) return true;
    for (Symbol s : fb_additive) {
        if (s != 0) return true;
    }
    return false;
}

StrategySpec StrategySpec::parse(const std::string& text) {
    StrategySpec spec;
    std::string name = text;
    std::string args;
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
        name = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    if (name == "none") spec.kind = StrategyKind::None;
    else if (name == "single-first") spec.kind = StrategyKind::SingleFirst;
    else if (name == "hide") spec.kind = StrategyKind::Hide;
    else if (name == "parity-only") spec.kind = StrategyKind::ParityOnly;
    else if (name == "feedback-tamper") spec.kind = StrategyKind::FeedbackTamper;
    else if (name == "random") spec.kind = StrategyKind::Random;
    else if (name == "exhaustive") spec.kind = StrategyKind::Exhaustive;
    else throw std::invalid_argument("unknown strategy: " + name);

    for (const std::string& kv : split(args, ',')) {
        if (kv.empty()) continue;
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("strategy option needs key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "link") spec.link = std::stoul(value);
        else if (key == "row") spec.row = std::stoul(value);
        else if (key == "coord") spec.coord = std::stoul(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "cursor") spec.cursor = std::stoull(value);
        else if (key == "follow") {
            spec.follow.clear();
            for (const std::string& part : split(value, '+')) {
                if (!part.empty()) spec.follow.push_back(std::stoul(part));
            }
        } else if (key == "mode") {
            if (value == "additive") spec.mode = TamperMode::Additive;
            else if (value == "suppress") spec.mode = TamperMode::SuppressClean;
            else if (value == "forge-cs") spec.mode = TamperMode::ForgeCs;
            else throw std::invalid_argument("unknown tamper mode: " + value);
        } else {
            throw std::invalid_argument("unknown strategy option: " + key);
        }
    }
    return spec;
}

std::string StrategySpec::name() const {
    switch (kind) {
        case StrategyKind::None: return "none";
        case StrategyKind::SingleFirst: return "single-first";
        case StrategyKind::Hide: return "hide";
        case StrategyKind::ParityOnly: return "parity-only";
        case StrategyKind::FeedbackTamper: return "feedback-tamper";
        case StrategyKind::Random: return "random";
        case StrategyKind::Exhaustive: return "exhaustive";
    }
    return "unknown";
}

const std::vector<std::vector<Symbol>>& attack_schedules() {
    static const std::vector<std::vector<Symbol>> kSchedules = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 3},
        {2, 0, 1}, {3, 1, 0}, {1, 0, 2}, {2, 2, 2}, {4, 1, 4},
    };
    return kSchedules;
}

std::uint64_t exhaustive_space_size(const NetworkParams& p) {
    const std::uint64_t q = p.q;
    auto pow_q = [q](int e) {
        std::uint64_t r = 1;
        for (int i = 0; i < e; ++i) r *= q;
        return r;
    };
    const std::uint64_t per_up = pow_q(p.a) - 1;
    const std::uint64_t per_down = pow_q(p.c) - 1;
    const std::uint64_t base =
        std::uint64_t(p.n) * per_up + std::uint64_t(p.m) * per_down + (q - 1);
    return base * attack_schedules().size();
}

Adversary::Adversary(const CodecKeys& keys, StrategySpec spec)
    : keys_(keys),
      spec_(std::move(spec)),
      rng_(spec_.seed ^ 0x5a5a5a5a5a5a5a5aULL),
      clean_mirror_(make_node_a(keys)),
      fb_link_(static_cast<std::size_t>(keys.p.n + keys.p.m)) {
    derive_owned();
    if (static_cast<int>(owned_.size()) > keys_.p.z) {
        throw std::invalid_argument("strategy owns more links than the adversary budget");
    }
    for (std::size_t id : owned_) {
        if (id > fb_link_) throw std::invalid_argument("owned link id out of range");
    }
}

void Adversary::derive_owned() {
    const std::size_t n = static_cast<std::size_t>(keys_.p.n);
    const std::size_t m = static_cast<std::size_t>(keys_.p.m);
    switch (spec_.kind) {
        case StrategyKind::None:
            break;
        case StrategyKind::SingleFirst:
            if (spec_.link >= n + m) throw std::invalid_argument("single-first needs a forward link");
            owned_.insert(spec_.link);
            break;
        case StrategyKind::Hide:
            if (spec_.link >= n) throw std::invalid_argument("hide opens on an upstream link");
            owned_.insert(spec_.link);
            for (std::size_t id : spec_.follow) owned_.insert(id);
            break;
        case StrategyKind::ParityOnly:
            if (spec_.coord >= n) throw std::invalid_argument("parity-only targets an upstream position");
            if (spec_.row >= keys_.plans.size()) throw std::invalid_argument("parity-only row out of range");
            owned_.insert(spec_.coord);
            break;
        case StrategyKind::FeedbackTamper:
            owned_.insert(fb_link_);
            if (keys_.p.z >= 2) owned_.insert(std::size_t{0});
            break;
        case StrategyKind::Random: {
            // z distinct links drawn over every link including feedback
            Rng pick(spec_.seed * 0x9e3779b97f4a7c15ULL + 1);
            const std::size_t universe = n + m + 1;
            while (owned_.size() < static_cast<std::size_t>(keys_.p.z) &&
                   owned_.size() < universe) {
                owned_.insert(static_cast<std::size_t>(pick.below(universe)));
            }
            break;
        }
        case StrategyKind::Exhaustive: {
            const std::uint64_t space = exhaustive_space_size(keys_.p);
            if (spec_.cursor >= space) throw std::invalid_argument("exhaustive cursor out of range");
            const std::uint64_t q = keys_.p.q;
            auto pow_q = [q](int e) {
                std::uint64_t r = 1;
                for (int i = 0; i < e; ++i) r *= q;
                return r;
            };
            const std::uint64_t per_up = pow_q(keys_.p.a) - 1;
            const std::uint64_t per_down = pow_q(keys_.p.c) - 1;
            std::uint64_t rest = spec_.cursor % (space / attack_schedules().size());
            if (rest < n * per_up) {
                owned_.insert(static_cast<std::size_t>(rest / per_up));
            } else {
                rest -= n * per_up;
                if (rest < m * per_down) {
                    owned_.insert(n + static_cast<std::size_t>(rest / per_down));
                } else {
                    owned_.insert(fb_link_);
                }
            }
            break;
        }
    }
}

std::vector<Symbol> Adversary::seeded_nonzero(std::size_t len) {
    Field f(keys_.p.q);
    std::vector<Symbol> out(len, 0);
    bool any = false;
    for (std::size_t i = 0; i < len; ++i) {
        out[i] = rng_.symbol(f);
        if (out[i] != 0) any = true;
    }
    if (!any && len > 0) out[0] = rng_.nonzero(f);
    return out;
}

AdversaryAction Adversary::next_action(std::size_t round, const Codeword& sent) {
    // Keep a pretend-clean relay state in sync so suppression can present a
    // believable history at any round.
    clean_fb_ = node_a_observe(clean_mirror_, keys_, top_wire_block(keys_, sent));

    AdversaryAction act;
    Field f(keys_.p.q);
    const std::size_t n = static_cast<std::size_t>(keys_.p.n);
    const std::size_t a = static_cast<std::size_t>(keys_.p.a);
    const std::size_t c = static_cast<std::size_t>(keys_.p.c);
    const auto& schedules = attack_schedules();

    auto scaled = [&](const std::vector<Symbol>& base, Symbol sc) {
        std::vector<Symbol> out(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) out[i] = f.mul(base[i], f.reduce(sc));
        return out;
    };

    switch (spec_.kind) {
        case StrategyKind::None:
            break;

        case StrategyKind::SingleFirst: {
            const auto& sched = schedules[spec_.seed % schedules.size()];
            const Symbol sc = sched[round % sched.size()];
            if (sc == 0) break;
            const std::size_t len = spec_.link < n ? a : c;
            act.wire_errors[spec_.link] = scaled(seeded_nonzero(len), sc);
            break;
        }

        case StrategyKind::Hide: {
            if (round == 0) {
                act.wire_errors[spec_.link] = seeded_nonzero(a);
                break;
            }
            for (std::size_t id : spec_.follow) {
                if (id >= n) {
                    act.wire_errors[id] = seeded_nonzero(c);
                    continue;
                }
                // Upstream follower: touch only positions the relay never
                // checks — single-check rows' wire parity and the mixed
                // bottom symbols.
                std::vector<Symbol> err(a, 0);
                for (std::size_t i = 0; i < keys_.plans.size(); ++i) {
                    const RowPlan& pl = keys_.plans[i];
                    if (pl.kind == RowCase::SingleSyndrome &&
                        id >= static_cast<std::size_t>(pl.k1 + pl.k2p)) {
                        err[i] = rng_.nonzero(f);
                    }
                }
                for (std::size_t r = a - c; r < a; ++r) err[r] = rng_.nonzero(f);
                act.wire_errors[id] = std::move(err);
            }
            break;
        }

        case StrategyKind::ParityOnly: {
            const auto& sched = schedules[spec_.seed % schedules.size()];
            const Symbol sc = sched[round % sched.size()];
            if (sc == 0) break;
            std::vector<Symbol> err(a, 0);
            err[spec_.row] = f.mul(rng_.nonzero(f), f.reduce(sc));
            act.wire_errors[spec_.coord] = std::move(err);
            break;
        }

        case StrategyKind::FeedbackTamper: {
            if (owned_.count(0)) {
                const auto& sched = schedules[spec_.seed % schedules.size()];
                const Symbol sc = sched[round % sched.size()];
                if (sc != 0) act.wire_errors[0] = scaled(seeded_nonzero(a), sc);
            }
            switch (spec_.mode) {
                case TamperMode::Additive:
                    act.fb_additive = seeded_nonzero(static_cast<std::size_t>(keys_.p.b));
                    break;
                case TamperMode::SuppressClean:
                    act.fb_suppress_to_clean = true;
                    break;
                case TamperMode::ForgeCs:
                    act.fb_forge_cs = true;
                    break;
            }
            break;
        }

        case StrategyKind::Random: {
            for (std::size_t id : owned_) {
                if (rng_.below(2) == 0) continue;
                if (id == fb_link_) {
                    switch (rng_.below(3)) {
                        case 0: act.fb_additive = seeded_nonzero(static_cast<std::size_t>(keys_.p.b)); break;
                        case 1: act.fb_suppress_to_clean = true; break;
                        default: act.fb_forge_cs = true; break;
                    }
                } else if (id < n) {
                    act.wire_errors[id] = seeded_nonzero(a);
                } else {
                    act.wire_errors[id] = seeded_nonzero(c);
                    if (keys_.claims_enabled && rng_.below(2) == 1) {
                        act.claim_errors[id] = seeded_nonzero(a - c);
                    }
                }
            }
            break;
        }

        case StrategyKind::Exhaustive: {
            const std::uint64_t q = keys_.p.q;
            auto pow_q = [q](int e) {
                std::uint64_t r = 1;
                for (int i = 0; i < e; ++i) r *= q;
                return r;
            };
            const std::uint64_t per_up = pow_q(keys_.p.a) - 1;
            const std::uint64_t per_down = pow_q(keys_.p.c) - 1;
            const std::uint64_t base_space = exhaustive_space_size(keys_.p) / schedules.size();
            const std::size_t sched_idx = static_cast<std::size_t>(spec_.cursor / base_space);
            std::uint64_t rest = spec_.cursor % base_space;
            const Symbol sc = schedules[sched_idx][round % schedules[sched_idx].size()];
            if (sc == 0) break;

            auto decode_pattern = [&](std::uint64_t idx, std::size_t len) {
                std::vector<Symbol> out(len, 0);
                std::uint64_t v = idx + 1;  // skip the all-zero pattern
                for (std::size_t i = 0; i < len; ++i) {
                    out[i] = static_cast<Symbol>(v % q);
                    v /= q;
                }
                return out;
            };

            if (rest < n * per_up) {
                const std::size_t link = static_cast<std::size_t>(rest / per_up);
                act.wire_errors[link] = scaled(decode_pattern(rest % per_up, a), sc);
            } else {
                rest -= n * per_up;
                if (rest < static_cast<std::uint64_t>(keys_.p.m) * per_down) {
                    const std::size_t link = n + static_cast<std::size_t>(rest / per_down);
                    act.wire_errors[link] = scaled(decode_pattern(rest % per_down, c), sc);
                } else {
                    rest -= static_cast<std::uint64_t>(keys_.p.m) * per_down;
                    const Symbol e = f.mul(static_cast<Symbol>(rest + 1), f.reduce(sc));
                    act.fb_additive.assign(static_cast<std::size_t>(keys_.p.b), e);
                }
            }
            break;
        }
    }

    // Drop no-op wire entries and enforce ownership.
    for (auto it = act.wire_errors.begin(); it != act.wire_errors.end();) {
        bool any = false;
        for (Symbol s : it->second) any = any || s != 0;
        if (!any) it = act.wire_errors.erase(it);
        else {
            if (!owned_.count(it->first)) throw std::logic_error("strategy touched an unowned link");
            ++it;
        }
    }
    for (const auto& [id, err] : act.claim_errors) {
        (void)err;
        if (!owned_.count(id)) throw std::logic_error("strategy touched an unowned claim column");
    }
    if ((act.fb_suppress_to_clean || act.fb_forge_cs || !act.fb_additive.empty()) &&
        !owned_.count(fb_link_)) {
        throw std::logic_error("strategy tampered feedback without owning the link");
    }
    return act;
}

RoundFeedback Adversary::tamper_feedback(const AdversaryAction& act, const RoundFeedback& a_sent) {
    if (!owned_.count(fb_link_)) return a_sent;
    if (act.fb_suppress_to_clean) return clean_fb_;
    RoundFeedback out = a_sent;
    if (act.fb_forge_cs) out.cs = true;
    if (!act.fb_additive.empty()) {
        Field f(keys_.p.q);
        std::size_t k = 0;
        for (RowFeedback& rf : out.rows) {
            for (Symbol& s : rf.payload) {
                s = f.add(s, act.fb_additive[k % act.fb_additive.size()]);
                ++k;
            }
        }
    }
    return out;
}

Codeword apply_wire_errors(const CodecKeys& keys, const Codeword& sent,
                           const AdversaryAction& act) {
    Codeword out = sent;
    Field f(keys.p.q);
    const std::size_t n = static_cast<std::size_t>(keys.p.n);
    const std::size_t m = static_cast<std::size_t>(keys.p.m);
    const std::size_t a = static_cast<std::size_t>(keys.p.a);
    const std::size_t c = static_cast<std::size_t>(keys.p.c);
    for (const auto& [link, err] : act.wire_errors) {
        if (link < n) {
            if (err.size() != a) throw std::invalid_argument("upstream error length mismatch");
            for (std::size_t r = 0; r < a; ++r) {
                out.mat.at(r, link) = f.add(out.mat.at(r, link), err[r]);
            }
        } else if (link < n + m) {
            if (err.size() != c) throw std::invalid_argument("downstream error length mismatch");
            for (std::size_t t = 0; t < c; ++t) {
                out.mat.at(a - c + t, link) = f.add(out.mat.at(a - c + t, link), err[t]);
            }
        } else {
            throw std::invalid_argument("wire errors cannot target the feedback link");
        }
    }
    return out;
}

std::pair<TinyObservation, TinyObservation> confusion_replay(const TinyNetwork& net,
                                                             const ConfusionPair& pair,
                                                             const std::vector<TinyCodeword>& codebook) {
    const NetworkParams& p = net.p;
    Field f(p.q);
    if (pair.first >= codebook.size() || pair.second >= codebook.size()) {
        throw std::invalid_argument("confusion pair indexes outside the codebook");
    }
    TinyObservation one;
    TinyObservation two;

    one.upstream = codebook[pair.first].upstream;
    one.downstream = codebook[pair.first].downstream;
    for (const auto& [j, err] : pair.errors_z1) {
        for (int r = 0; r < p.a; ++r) {
            one.upstream.at(r, j) = f.add(one.upstream.at(r, j), err[static_cast<std::size_t>(r)]);
        }
    }
    std::vector<Symbol> flat1(one.upstream.data().begin(), one.upstream.data().end());
    one.feedback = mat_vec(net.feedback_map, flat1);

    two.upstream = codebook[pair.second].upstream;
    two.downstream = codebook[pair.second].downstream;
    for (const auto& [id, err] : pair.errors_z2) {
        const int j = id - p.n;
        for (int r = 0; r < p.c; ++r) {
            two.downstream.at(r, j) = f.add(two.downstream.at(r, j), err[static_cast<std::size_t>(r)]);
        }
    }
    std::vector<Symbol> flat2(two.upstream.data().begin(), two.upstream.data().end());
    two.feedback = mat_vec(net.feedback_map, flat2);

    return {std::move(one), std::move(two)};
}

}  // namespace znec
