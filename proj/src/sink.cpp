#include "znec/sink.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace znec {

namespace {

using Mask = std::uint64_t;

Mask bit(std::size_t i) { return Mask{1} << i; }

Mask set_mask(const std::set<std::size_t>& links) {
    Mask m = 0;
    for (std::size_t l : links) m |= bit(l);
    return m;
}

int popcount(Mask m) { return std::popcount(m); }

// One linear equation over the flattened message.
struct FlatEquation {
    std::vector<Symbol> coef;
    Symbol rhs = 0;
};

int relay_pin_for(const std::map<int, int>& pins, std::size_t row) {
    auto it = pins.find(int(row));
    return it == pins.end() ? -1 : it->second;
}

// Replay the downstream relay's silent-round checks symbolically. The echo
// rides the reliable direct link, so it is exactly what the helper sent; if
// the feedback link is honest it is also exactly what the downstream relay
// received and, by staying silent, certified against the true message. Each
// passed check becomes one linear equation over the message. Returns nothing
// when no honest relay could have stayed silent on this echo, which rules
// the feedback-honest family out for the round.
std::optional<std::vector<FlatEquation>> silence_certificates(
    const CodecKeys& keys, const RoundFeedback& echo, const std::map<int, int>& relay_pins) {
    if (echo.cs) return std::nullopt;  // a delivered alarm always draws a claim
    if (echo.rows.size() != keys.plans.size()) return std::nullopt;
    const std::size_t z = std::size_t(keys.p.z);
    const std::size_t ub = std::size_t(keys.message_count());
    std::vector<FlatEquation> eqs;

    auto fresh = [&]() {
        FlatEquation eq;
        eq.coef.assign(ub, 0);
        return eq;
    };

    for (std::size_t i = 0; i < keys.plans.size(); ++i) {
        const RowPlan& pl = keys.plans[i];
        const RowFeedback& rf = echo.rows[i];
        const Field& f = keys.row_codes[i].field;
        const std::size_t base = std::size_t(keys.x_offset[i]);
        const std::size_t k1 = std::size_t(pl.k1);
        const std::size_t k2p = std::size_t(pl.k2p);
        const std::size_t dim = k1 + k2p;
        const int pin = relay_pin_for(relay_pins, i);

        if (pl.kind == RowCase::NoSyndrome) {
            if (rf.variant != FeedbackVariant::FullParity || rf.payload.size() != z ||
                !keys.relay_code)
                return std::nullopt;
            SymbolMatrix par = keys.relay_code->parity();
            if (z >= 2 && pin >= 0 && std::size_t(pin) < dim) {
                // Silence with a pinned position means the payload residual
                // stayed proportional to that position's parity column.
                const std::size_t l = std::size_t(pin);
                for (std::size_t j = 1; j < z; ++j) {
                    FlatEquation eq = fresh();
                    for (std::size_t t = 0; t < dim; ++t)
                        eq.coef[base + t] = f.sub(f.mul(par.at(l, j), par.at(t, 0)),
                                                  f.mul(par.at(l, 0), par.at(t, j)));
                    eq.rhs = f.sub(f.mul(par.at(l, j), rf.payload[0]),
                                   f.mul(par.at(l, 0), rf.payload[j]));
                    eqs.push_back(std::move(eq));
                }
            } else {
                // Unpinned silence means the payload matched outright.
                for (std::size_t j = 0; j < z; ++j) {
                    FlatEquation eq = fresh();
                    for (std::size_t t = 0; t < dim; ++t) eq.coef[base + t] = par.at(t, j);
                    eq.rhs = rf.payload[j];
                    eqs.push_back(std::move(eq));
                }
            }
            continue;
        }

        if (pl.kind == RowCase::SingleSyndrome) {
            if (rf.variant != FeedbackVariant::RawValues || rf.payload.size() != k2p)
                return std::nullopt;
            for (std::size_t j = 0; j < k2p; ++j) {
                FlatEquation eq = fresh();
                eq.coef[base + k1 + j] = 1;
                eq.rhs = rf.payload[j];
                eqs.push_back(std::move(eq));
            }
            continue;
        }

        if (pl.kind == RowCase::FullSyndrome) {
            if (rf.variant != FeedbackVariant::MaskedSet || !rf.payload.empty())
                return std::nullopt;
            continue;
        }

        // PartialSyndrome: the passed check takes the shape the relay's own
        // pin state selects.
        const bool reduced = pin >= 0 && std::size_t(pin) < dim;
        if (!reduced) {
            if (rf.variant != FeedbackVariant::MaskedSet || rf.payload.size() != k2p)
                return std::nullopt;
            for (std::size_t j = 0; j < k2p; ++j) {
                FlatEquation eq = fresh();
                eq.coef[base + k1 + j] = 1;
                for (std::size_t t = 0; t < k1; ++t)
                    eq.coef[base + t] = keys.masked_coef.at(t, j);
                eq.rhs = rf.payload[j];
                eqs.push_back(std::move(eq));
            }
            continue;
        }
        if (rf.variant != FeedbackVariant::MaskedSetReduced || rf.payload.size() != k2p)
            return std::nullopt;
        const std::size_t l = std::size_t(pin);
        if (l < k1) {
            if (rf.bare_index != -1) return std::nullopt;
            for (std::size_t j = 0; j < k2p; ++j) {
                FlatEquation eq = fresh();
                eq.coef[base + k1 + j] = 1;
                for (std::size_t t = 0; t < k1; ++t) {
                    if (t == l) continue;
                    eq.coef[base + t] = keys.masked_coef.at(t, j);
                }
                eq.rhs = rf.payload[j];
                eqs.push_back(std::move(eq));
            }
            continue;
        }
        const std::size_t lp = l - k1;
        if (rf.bare_index != int(lp)) return std::nullopt;
        std::size_t cursor = 0;
        for (std::size_t j = 0; j < k2p; ++j) {
            if (j == lp) continue;
            FlatEquation eq = fresh();
            eq.coef[base + k1 + j] = 1;
            for (std::size_t t = 0; t < k1; ++t) eq.coef[base + t] = keys.masked_coef.at(t, j);
            eq.rhs = rf.payload[cursor++];
            eqs.push_back(std::move(eq));
        }
        FlatEquation bare = fresh();
        for (std::size_t t = 0; t < k1; ++t) bare.coef[base + t] = keys.masked_coef.at(t, lp);
        bare.rhs = rf.payload[cursor];
        eqs.push_back(std::move(bare));
    }
    return eqs;
}

bool satisfies(const Field& f, const std::vector<FlatEquation>& eqs,
               const std::vector<Symbol>& flat) {
    for (const FlatEquation& eq : eqs) {
        Symbol acc = 0;
        for (std::size_t u = 0; u < flat.size(); ++u)
            acc = f.add(acc, f.mul(eq.coef[u], flat[u]));
        if (acc != eq.rhs) return false;
    }
    return true;
}

// Every observed cell the sweep can lean on: its functional row in the
// system matrix, its received value, and the link it rode on.
struct ObservedCell {
    std::size_t slot = 0;
    std::size_t link = 0;
    Symbol value = 0;
};

std::vector<ObservedCell> gather_cells(const CodecKeys& keys, const SinkView& view) {
    const NetworkParams& p = keys.p;
    std::vector<ObservedCell> cells;
    for (int link = 0; link < p.n; ++link)
        for (int r = 0; r < p.a; ++r)
            cells.push_back({slot_up(keys, link, r), std::size_t(link),
                             view.upstream.at(std::size_t(r), std::size_t(link))});
    for (int link = p.n; link < p.n + p.m; ++link)
        for (int t = 0; t < p.c; ++t)
            cells.push_back({slot_down(keys, link, t), std::size_t(link),
                             view.downstream.at(std::size_t(t), std::size_t(link - p.n))});
    if (keys.claims_enabled && view.claim_present && view.claim) {
        for (int link = p.n; link < p.n + p.m; ++link)
            for (int r = 0; r < p.a - p.c; ++r)
                cells.push_back({slot_claim(keys, link, r), std::size_t(link),
                                 view.claim->at(std::size_t(r), std::size_t(link - p.n))});
    }
    return cells;
}

DecodeOutcome finish(const CodecKeys& keys, const SinkView& view, const std::vector<Symbol>& flat,
                     DecodeMode mode) {
    DecodeOutcome out;
    out.ok = true;
    out.mode = mode;
    out.message = unflatten_message(keys, flat);

    Codeword cw = encode(keys, out.message);
    const std::size_t n = std::size_t(keys.p.n);
    const std::size_t m = std::size_t(keys.p.m);
    const std::size_t a = std::size_t(keys.p.a);
    const std::size_t c = std::size_t(keys.p.c);
    std::set<std::size_t> links;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < a; ++i) {
            if (cw.mat.at(i, j) != view.upstream.at(i, j)) {
                links.insert(j);
                break;
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t t = 0; t < c; ++t) {
            if (cw.mat.at(a - c + t, n + j) != view.downstream.at(t, j)) {
                links.insert(n + j);
                break;
            }
        }
    }
    if (keys.claims_enabled && view.claim_present && view.claim) {
        SymbolMatrix x_block(a - c, n, Field(keys.p.q));
        for (std::size_t i = 0; i < a - c; ++i) {
            for (std::size_t j = 0; j < n; ++j) x_block.at(i, j) = cw.mat.at(i, j);
        }
        SymbolMatrix expected = claim_matrix(keys, x_block);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < a - c; ++i) {
                if (expected.at(i, j) != view.claim->at(i, j)) {
                    links.insert(n + j);
                    break;
                }
            }
        }
    }
    out.implicated.assign(links.begin(), links.end());
    return out;
}

DecodeMode sweep_label(const CodecKeys& keys, const DecodeContext& ctx) {
    if (keys.p.z == 1) return DecodeMode::SingleAdversary;
    if (ctx.identified.size() >= 2) return DecodeMode::PostIdentified;
    return DecodeMode::NoSignalSubset;
}

// The decoding engine. Every removal hypothesis is a set W of suspect links
// (always covering the identified ones) together with a stance on the
// feedback link. The cells on links outside W, plus the claim cells when a
// claim arrived, form a linear system over the message; key verification
// guarantees it has full rank for every W within budget, so each hypothesis
// either contradicts the observations or names exactly one candidate.
//
// A hypothesis gets a vote when some stance endorses it: "feedback owned"
// allows at most z - 1 suspect wires and asks nothing else; "feedback
// honest" allows z but on silent rounds additionally requires the candidate
// to satisfy every check the downstream relay certified by staying quiet.
// The true hypothesis is always enumerated, always consistent, and its
// candidate is the real message - so when all votes agree the answer is
// right, and any disagreement is refused rather than guessed at.
DecodeOutcome run_sweep(const CodecKeys& keys, const SinkView& view, const DecodeContext& ctx,
                        const DecodeOptions& opt, DecodeMode label) {
    const std::size_t links = std::size_t(keys.p.n + keys.p.m);
    if (links > 20) throw std::invalid_argument("exhaustive decoding supports at most 20 links");
    const Field f(keys.p.q);
    const int z = keys.p.z;
    const int ub = keys.message_count();
    const Mask id_mask = set_mask(ctx.identified);

    bool fb_honest = !ctx.fb_identified;
    std::vector<FlatEquation> certs;
    if (fb_honest && !view.claim_present) {
        if (view.echo.cs) {
            fb_honest = false;  // echoed alarm with no claim: no honest silent round
        } else if (ctx.relay_state_known) {
            auto built = silence_certificates(keys, view.echo, ctx.relay_pins);
            if (built)
                certs = std::move(*built);
            else
                fb_honest = false;
        }
    }

    const std::vector<ObservedCell> cells = gather_cells(keys, view);
    const SymbolMatrix sys = system_matrix(keys);

    std::vector<Mask> masks;
    for (Mask mask = 0; mask < bit(links); ++mask) {
        if ((mask & id_mask) == id_mask && popcount(mask) <= z) masks.push_back(mask);
    }
    std::sort(masks.begin(), masks.end(), [](Mask x, Mask y) {
        const int px = popcount(x);
        const int py = popcount(y);
        return px != py ? px < py : x < y;
    });

    std::optional<std::vector<Symbol>> agreed;
    bool underdetermined = false;
    for (Mask mask : masks) {
        std::vector<std::size_t> keep;
        keep.reserve(cells.size());
        for (std::size_t ci = 0; ci < cells.size(); ++ci)
            if (!(mask & bit(cells[ci].link))) keep.push_back(ci);

        SymbolMatrix lhs(keep.size(), std::size_t(ub), f);
        std::vector<Symbol> rhs(keep.size());
        for (std::size_t r = 0; r < keep.size(); ++r) {
            const ObservedCell& cell = cells[keep[r]];
            for (int u = 0; u < ub; ++u)
                lhs.at(r, std::size_t(u)) = sys.at(cell.slot, std::size_t(u));
            rhs[r] = cell.value;
        }
        SolveResult res = mat_solve(lhs, rhs);
        if (res.status == SolveStatus::Underdetermined) {
            underdetermined = true;
            continue;
        }
        if (res.status != SolveStatus::Unique) continue;

        const bool votes_honest = fb_honest && satisfies(f, certs, res.solution);
        const bool votes_owned = popcount(mask) <= z - 1;
        if (!votes_honest && !votes_owned) continue;

        // The minimal hypothesis is contained in every other one, so once it
        // is consistent, full rank forces every consistent hypothesis to the
        // same candidate and agreement is automatic.
        if (!opt.verify_agreement || (mask == id_mask && keys.verified))
            return finish(keys, view, res.solution, label);
        if (!agreed) {
            agreed = std::move(res.solution);
        } else if (*agreed != res.solution) {
            DecodeOutcome out;
            out.mode = label;
            return out;  // conflicting consistent answers: refuse to guess
        }
    }
    if (!agreed || underdetermined) {
        DecodeOutcome out;
        out.mode = label;
        return out;
    }
    return finish(keys, view, *agreed, label);
}

}  // namespace

int post_removal_count(const NetworkParams& p) {
    if (2 * p.z - 2 <= p.n) return p.a * (p.n + 2 - 2 * p.z) + p.c * p.m;
    return p.c * (p.m + p.n - 2 * p.z + 2);
}

SingleIdentifiedBudget single_identified_budget(const NetworkParams& p) {
    p.validate();
    SingleIdentifiedBudget out;
    if (p.z > 2 && p.b == p.z * (p.a - p.c) - 1) {
        out.r1 = (p.n - 1) * (p.a - p.c - 1);
    } else if (p.z == 2 && p.b % 2 == 1 && p.b < p.z * (p.a - p.c) - 1) {
        out.r1 = (p.n - 2) * (p.a - p.c - 1) + (p.b - 1) - p.b / 2;
    } else {
        throw std::invalid_argument("no verified-feedback budget for this feedback capacity");
    }
    if (p.n > 2 * (p.z - 1)) {
        out.r2 = (p.n - 1 - 2 * (p.z - 1)) * (p.c + 1) + p.m * p.c;
    } else {
        out.r2 = (p.n + p.m - 2 * p.z + 1) * p.c;
    }
    out.relayed = p.z - 1;
    return out;
}

DecodeOutcome consistency_decode(const CodecKeys& keys, const SinkView& view,
                                 const DecodeContext& ctx, const DecodeOptions& opt) {
    return run_sweep(keys, view, ctx, opt, sweep_label(keys, ctx));
}

DecodeOutcome decode_with_claim(const CodecKeys& keys, const SinkView& view,
                                const DecodeContext& ctx, const DecodeOptions& opt) {
    return run_sweep(keys, view, ctx, opt, DecodeMode::ClaimMds);
}

DecodeOutcome decode_post_identified(const CodecKeys& keys, const SinkView& view,
                                     const DecodeContext& ctx, const DecodeOptions& opt) {
    return run_sweep(keys, view, ctx, opt, DecodeMode::PostIdentified);
}

DecodeOutcome decode(const CodecKeys& keys, const SinkView& view, const DecodeContext& ctx,
                     const DecodeOptions& opt) {
    if (keys.claims_enabled && view.claim_present && view.claim) {
        return decode_with_claim(keys, view, ctx, opt);
    }
    if (keys.p.z == 1) return consistency_decode(keys, view, ctx, opt);
    if (ctx.identified.size() == 1 && !ctx.fb_identified && keys.p.m >= 2 * keys.p.z) {
        bool has_single = false;
        for (const RowPlan& pl : keys.plans) {
            if (pl.kind == RowCase::SingleSyndrome) has_single = true;
        }
        if (*ctx.identified.begin() < std::size_t(keys.p.n) && has_single) {
            return run_sweep(keys, view, ctx, opt, DecodeMode::VerifiedFeedback);
        }
    }
    return consistency_decode(keys, view, ctx, opt);
}

SinkSession::SinkSession(const CodecKeys& keys, DecodeOptions opt)
    : keys_(keys), opt_(opt), b_mirror_(make_node_b(keys)) {}

DecodeOutcome SinkSession::process_round(const SinkView& view) {
    // An echoed alarm with no claim behind it proves the helper's message to
    // the downstream relay was tampered with in transit.
    if (keys_.claims_enabled && view.echo.cs && !view.claim_present) {
        ctx_.fb_identified = true;
    }
    if (view.echo.cs_located) {
        ctx_.helper_pins.emplace(view.echo.cs_located->first, view.echo.cs_located->second);
    }

    // Expose the downstream relay's pin state as of the start of this round;
    // silence certificates must replay exactly the checks it would run.
    ctx_.relay_pins.clear();
    ctx_.relay_state_known = mirror_valid_;
    if (mirror_valid_) {
        for (std::size_t i = 0; i < b_mirror_.rows.size(); ++i) {
            if (b_mirror_.rows[i].identified_pos >= 0)
                ctx_.relay_pins[int(i)] = b_mirror_.rows[i].identified_pos;
        }
    }

    DecodeOutcome out = znec::decode(keys_, view, ctx_, opt_);

    if (out.ok) {
        if (keys_.claims_enabled && !ctx_.fb_identified && mirror_valid_) {
            // Replay the downstream relay's checks on the authentic echo: a
            // claim that an honest check would not send (or a missing claim
            // an honest check would have sent) pins the feedback link.
            NodeBState probe = b_mirror_;
            BVerdict expect = node_b_verify(probe, keys_, out.message, view.echo);
            if (expect.send_claim != view.claim_present) {
                ctx_.fb_identified = true;
                mirror_valid_ = false;
            } else {
                b_mirror_ = probe;
            }
        }
        for (std::size_t link : out.implicated) {
            if (link < std::size_t(keys_.p.n + keys_.p.m)) ctx_.identified.insert(link);
        }
    } else {
        // A refused round leaves the relay's reaction unexplained; its pin
        // state can no longer be tracked, so silence stops proving anything.
        mirror_valid_ = false;
    }
    return out;
}

}  // namespace znec
