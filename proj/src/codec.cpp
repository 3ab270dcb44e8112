#include "znec/codec.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "znec/subset_iter.hpp"

namespace znec {

std::vector<RowPlan> plan_layout(const NetworkParams& p) {
    p.validate();
    if (!tight_condition(p))
        throw std::invalid_argument("layout exists only under the tight feedback condition");
    const int rows = p.a - p.c;
    const int z = p.z;
    const int d = z * rows - p.b;  // >= 1 when tight
    const int t = (d - 1) / z;
    const int phi = d - z * t;  // in [1, z]

    std::vector<int> k2p(rows, 0);
    auto fill_front = [&](int count, int value) {
        for (int i = 0; i < count; ++i) k2p[i] = value;
    };
    if (t == 0) {
        if (phi >= 2) {
            fill_front(rows - 1, z);
            k2p[rows - 1] = z - phi;
        } else if (z > 2) {
            fill_front(rows - 1, z);
            k2p[rows - 1] = z - 1;
        } else if (z == 1) {
            fill_front(rows - 1, 1);
        } else {
            // z == 2 with b == 2(a-c) - 1 admits no row layout in this scheme
            throw std::invalid_argument("no feedback layout for z == 2 with b == 2(a-c) - 1");
        }
    } else {
        if (phi == z) {
            fill_front(rows - t - 1, z);
        } else if (z == 2) {
            // odd b strictly below the uncovered corner
            fill_front(p.b / 2, 2);
            k2p[rows - 1] = 1;
        } else {
            fill_front(rows - t - 1, z);
            k2p[rows - t - 1] = z - phi - 1;
            k2p[rows - t] = 1;
        }
    }

    int total = 0;
    std::vector<RowPlan> plans(rows);
    for (int i = 0; i < rows; ++i) {
        RowPlan& pl = plans[i];
        pl.k1 = p.n - z;
        pl.k2p = k2p[i];
        pl.k3 = z - k2p[i];
        if (pl.k2p == z)
            pl.kind = RowCase::NoSyndrome;
        else if (pl.k2p == 0)
            pl.kind = RowCase::FullSyndrome;
        else if (pl.k2p == z - 1)
            pl.kind = RowCase::SingleSyndrome;
        else
            pl.kind = RowCase::PartialSyndrome;
        total += pl.k2p;
    }
    if (total != p.b) throw std::logic_error("row layout does not consume the feedback budget");
    return plans;
}

namespace {

MdsCode degenerate_code(std::size_t length, Field f) {
    MdsCode code;
    code.length = length;
    code.dim = 0;
    code.field = f;
    code.generator = SymbolMatrix(0, length, f);
    return code;
}

// Stacked in-row detection functionals (z x n): the wire syndromes plus the
// masked feedback checks. Rows that keep no wire parity are covered by the
// relay check code instead; single-parity rows are excluded by design.
SymbolMatrix detection_matrix(const CodecKeys& k, std::size_t row) {
    const Field f(k.p.q);
    const RowPlan& pl = k.plans[row];
    const int dim = pl.k1 + pl.k2p;
    SymbolMatrix d(k.p.z, k.p.n, f);
    if (pl.kind == RowCase::NoSyndrome) {
        SymbolMatrix par = k.relay_code->parity();
        for (int j = 0; j < k.p.z; ++j)
            for (int i = 0; i < k.p.n; ++i) d.at(j, i) = par.at(i, j);
        return d;
    }
    SymbolMatrix par = k.row_codes[row].parity();
    for (int j = 0; j < pl.k3; ++j) {
        for (int i = 0; i < dim; ++i) d.at(j, i) = f.neg(par.at(i, j));
        d.at(j, dim + j) = 1;
    }
    for (int j = 0; j < pl.k2p; ++j) {
        for (int i = 0; i < pl.k1; ++i) d.at(pl.k3 + j, i) = k.masked_coef.at(i, j);
        d.at(pl.k3 + j, pl.k1 + j) = 1;
    }
    return d;
}

// Residual functionals once wire position l of the row is pinned as bad:
// (z-1) checks that ignore column l entirely.
SymbolMatrix residual_matrix(const CodecKeys& k, std::size_t row, int l) {
    const Field f(k.p.q);
    const RowPlan& pl = k.plans[row];
    const int dim = pl.k1 + pl.k2p;
    std::vector<std::vector<Symbol>> rows;

    if (pl.kind == RowCase::NoSyndrome) {
        SymbolMatrix par = k.relay_code->parity();
        Symbol ref = f.inv(par.at(l, 0));
        for (int j = 1; j < k.p.z; ++j) {
            std::vector<Symbol> r(k.p.n, 0);
            Symbol coef = f.mul(par.at(l, j), ref);
            for (int i = 0; i < k.p.n; ++i)
                r[i] = f.sub(par.at(i, j), f.mul(coef, par.at(i, 0)));
            rows.push_back(std::move(r));
        }
    } else {
        SymbolMatrix par = k.row_codes[row].parity();
        if (l < dim) {
            // cancel the pinned message column against a reference syndrome
            int ref_j = (pl.kind == RowCase::FullSyndrome) ? 0 : pl.k3 - 1;
            Symbol ref = f.inv(par.at(l, ref_j));
            for (int j = 0; j < pl.k3; ++j) {
                if (j == ref_j) continue;
                std::vector<Symbol> r(k.p.n, 0);
                Symbol coef = f.mul(par.at(l, j), ref);
                for (int i = 0; i < dim; ++i)
                    r[i] = f.sub(f.neg(par.at(i, j)), f.mul(coef, f.neg(par.at(i, ref_j))));
                r[dim + j] = 1;
                r[dim + ref_j] = f.neg(coef);
                rows.push_back(std::move(r));
            }
            if (l < pl.k1) {
                // masked checks recomputed without the pinned message symbol
                for (int j = 0; j < pl.k2p; ++j) {
                    std::vector<Symbol> r(k.p.n, 0);
                    for (int i = 0; i < pl.k1; ++i)
                        if (i != l) r[i] = k.masked_coef.at(i, j);
                    r[pl.k1 + j] = 1;
                    rows.push_back(std::move(r));
                }
            } else {
                int lp = l - pl.k1;
                for (int j = 0; j < pl.k2p; ++j) {
                    if (j == lp) continue;
                    std::vector<Symbol> r(k.p.n, 0);
                    for (int i = 0; i < pl.k1; ++i) r[i] = k.masked_coef.at(i, j);
                    r[pl.k1 + j] = 1;
                    rows.push_back(std::move(r));
                }
                std::vector<Symbol> bare(k.p.n, 0);
                for (int i = 0; i < pl.k1; ++i) bare[i] = k.masked_coef.at(i, lp);
                rows.push_back(std::move(bare));
            }
        } else {
            int idx = l - dim;
            for (int j = 0; j < pl.k3; ++j) {
                if (j == idx) continue;
                std::vector<Symbol> r(k.p.n, 0);
                for (int i = 0; i < dim; ++i) r[i] = f.neg(par.at(i, j));
                r[dim + j] = 1;
                rows.push_back(std::move(r));
            }
            for (int j = 0; j < pl.k2p; ++j) {
                std::vector<Symbol> r(k.p.n, 0);
                for (int i = 0; i < pl.k1; ++i) r[i] = k.masked_coef.at(i, j);
                r[pl.k1 + j] = 1;
                rows.push_back(std::move(r));
            }
        }
    }

    SymbolMatrix out(rows.size(), std::size_t(k.p.n) - 1, f);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t cc = 0;
        for (int i = 0; i < k.p.n; ++i) {
            if (i == l) continue;
            out.at(r, cc++) = rows[r][i];
        }
    }
    return out;
}

// Columns flagged in `blind` may form wholly-uncovered subsets; any subset
// touching an unflagged column must still be regular.
bool all_minors_regular(const SymbolMatrix& m, std::size_t order,
                        const std::vector<bool>& blind = {}) {
    if (order == 0) return true;
    if (m.rows() < order) return false;
    return !for_each_subset(m.cols(), order, [&](const std::vector<std::size_t>& cols) {
        if (!blind.empty()) {
            bool covered_required = false;
            for (std::size_t c : cols)
                if (!blind[c]) {
                    covered_required = true;
                    break;
                }
            if (!covered_required) return false;  // tolerated blind spot
        }
        SymbolMatrix sub(order, order, m.field());
        for (std::size_t i = 0; i < order; ++i)
            for (std::size_t j = 0; j < order; ++j) sub.at(i, j) = m.at(i, cols[j]);
        return mat_rank(sub) != order;  // stop on the first singular minor
    });
}

// Stage 1: every adversarial pattern confined to one top row must move some
// in-row check, before and after a single position is pinned. One exception
// is allowed: once a PARTIAL row has a position pinned, the remaining checks
// are a mix of wire syndromes and message masks, and patterns confined to the
// row's wire-parity cells can slip through them. Those cells carry no message
// value and the sink's removal sweeps clear them wholesale, so decoding is
// unaffected; the pinned-row functionals are not required to cover them.
bool verify_detection_minors(const CodecKeys& k) {
    for (std::size_t row = 0; row < k.plans.size(); ++row) {
        const RowPlan& pl = k.plans[row];
        if (pl.kind == RowCase::SingleSyndrome) continue;
        SymbolMatrix d = detection_matrix(k, row);
        if (!all_minors_regular(d, std::size_t(k.p.z))) return false;
        if (k.p.z < 2) continue;
        const int dim = pl.k1 + pl.k2p;
        for (int l = 0; l < k.p.n; ++l) {
            SymbolMatrix r = residual_matrix(k, row, l);
            std::vector<bool> blind;
            if (pl.kind == RowCase::PartialSyndrome && l < dim) {
                blind.assign(r.cols(), false);
                for (int j = 0; j < pl.k3; ++j) {
                    int col = dim + j;  // wire-parity position, shifted past l
                    blind[std::size_t(col - 1)] = true;
                }
            }
            if (!all_minors_regular(r, std::size_t(k.p.z) - 1, blind)) return false;
        }
    }
    return true;
}

// Stage 2: the sink recovers the message by solving whatever cell equations
// survive a link-removal hypothesis. Two rank sweeps make every hypothesis
// the decoder can ever form well-posed:
//  - dropping any set of up to max(z, 2z - 2) links must leave the surviving
//    wire cells at full message rank, so each hypothesis yields a unique
//    candidate or a contradiction, never an underdetermined system;
//  - dropping any set of up to 2z links must leave the surviving bottom
//    cells at full rank over the bottom symbols alone, so two overlapping
//    hypotheses can never disagree about the bottom block.
bool verify_solver_ranks(const CodecKeys& k) {
    const NetworkParams& p = k.p;
    const SymbolMatrix sys = system_matrix(k);
    const std::size_t links = std::size_t(p.n + p.m);
    const std::size_t ub = std::size_t(k.message_count());
    const Field f(p.q);

    // The functionals the downstream relay certifies by staying silent, in
    // their strongest (event-free) form: the sink leans on them whenever it
    // trusts the feedback link. One row per certified equation, over the
    // flattened message.
    std::vector<std::vector<Symbol>> certs;
    for (std::size_t i = 0; i < k.plans.size(); ++i) {
        const RowPlan& pl = k.plans[i];
        const std::size_t base = std::size_t(k.x_offset[i]);
        const std::size_t k1 = std::size_t(pl.k1);
        if (pl.kind == RowCase::NoSyndrome) {
            SymbolMatrix par = k.relay_code->parity();
            for (int j = 0; j < p.z; ++j) {
                std::vector<Symbol> row(ub, 0);
                for (int t = 0; t < p.n; ++t)
                    row[base + std::size_t(t)] = par.at(std::size_t(t), std::size_t(j));
                certs.push_back(std::move(row));
            }
        } else if (pl.kind == RowCase::SingleSyndrome) {
            for (int j = 0; j < pl.k2p; ++j) {
                std::vector<Symbol> row(ub, 0);
                row[base + k1 + std::size_t(j)] = 1;
                certs.push_back(std::move(row));
            }
        } else if (pl.kind == RowCase::PartialSyndrome) {
            for (int j = 0; j < pl.k2p; ++j) {
                std::vector<Symbol> row(ub, 0);
                row[base + k1 + std::size_t(j)] = 1;
                for (std::size_t t = 0; t < k1; ++t)
                    row[base + t] = k.masked_coef.at(t, std::size_t(j));
                certs.push_back(std::move(row));
            }
        }
    }

    auto rank_after = [&](const std::vector<std::size_t>& drop, bool with_certs) {
        std::vector<bool> removed(links, false);
        for (std::size_t l : drop) removed[l] = true;
        std::vector<std::size_t> slots;
        for (int link = 0; link < p.n; ++link) {
            if (removed[std::size_t(link)]) continue;
            for (int r = 0; r < p.a; ++r) slots.push_back(slot_up(k, link, r));
        }
        for (int link = p.n; link < p.n + p.m; ++link) {
            if (removed[std::size_t(link)]) continue;
            for (int t = 0; t < p.c; ++t) slots.push_back(slot_down(k, link, t));
        }
        const std::size_t extra = with_certs ? certs.size() : 0;
        SymbolMatrix sub(slots.size() + extra, ub, f);
        for (std::size_t i = 0; i < slots.size(); ++i)
            for (std::size_t u = 0; u < ub; ++u) sub.at(i, u) = sys.at(slots[i], u);
        for (std::size_t i = 0; i < extra; ++i)
            for (std::size_t u = 0; u < ub; ++u) sub.at(slots.size() + i, u) = certs[i][u];
        return mat_rank(sub) == ub;
    };

    // With the feedback link suspect there is no silence to lean on, but at
    // most z - 1 wires are corrupt and at most z - 1 more hypothesised away.
    const std::size_t bare_bound = std::min(links, std::size_t(std::max(p.z, 2 * p.z - 2)));
    for (std::size_t w = 0; w <= bare_bound; ++w)
        if (for_each_subset(links, w, [&](const std::vector<std::size_t>& drop) {
                return !rank_after(drop, false);
            }))
            return false;

    // With the feedback link trusted, up to z corrupt wires plus z
    // hypothesised ones must still leave the message pinned once the
    // silent-round checks are joined in; this is what lets the checks veto
    // every wrong candidate instead of merely flagging disagreement.
    const std::size_t certified_bound = std::min(links, std::size_t(2 * p.z));
    for (std::size_t w = 0; w <= certified_bound; ++w)
        if (for_each_subset(links, w, [&](const std::vector<std::size_t>& drop) {
                return !rank_after(drop, true);
            }))
            return false;
    return true;
}

CodecKeys build_keys(const NetworkParams& p, const KeyOptions& opt, std::uint64_t seed) {
    CodecKeys k;
    k.p = p;
    k.plans = plan_layout(p);
    k.seed = seed;
    const Field f(p.q);
    if (p.q <= std::uint32_t(p.n + p.m))
        throw std::invalid_argument("field too small for the shared downstream code");
    int cat = classify(p);
    k.claims_enabled = opt.with_claims && (cat == 1 || cat == 2);

    k.x_total = 0;
    for (const RowPlan& pl : k.plans) {
        k.x_offset.push_back(k.x_total);
        k.x_total += pl.k1 + pl.k2p;
    }
    k.y_total = p.c * (p.n + p.m - 2 * p.z);

    Rng rng(seed);
    const std::size_t code_len = k.claims_enabled ? std::size_t(p.n + p.m) : std::size_t(p.n);
    for (const RowPlan& pl : k.plans) {
        std::uint64_t s = rng.next();
        std::size_t dim = std::size_t(pl.k1) + pl.k2p;
        k.row_codes.push_back(dim == 0 ? degenerate_code(code_len, f)
                                       : make_mds(dim, code_len, p.q, s));
    }

    bool any_full_message = false;
    int max_k2p = 0;
    for (const RowPlan& pl : k.plans) {
        if (pl.kind == RowCase::NoSyndrome)
            any_full_message = true;
        else
            max_k2p = std::max(max_k2p, pl.k2p);
    }
    if (any_full_message) {
        if (p.q <= std::uint32_t(p.n + p.z))
            throw std::invalid_argument("field too small for the all-message row check code");
        k.relay_code = make_mds(std::size_t(p.n), std::size_t(p.n + p.z), p.q, rng.next());
    }

    k.masked_coef = SymbolMatrix(std::size_t(p.n - p.z), std::size_t(max_k2p), f);
    for (auto& v : k.masked_coef.data()) v = rng.nonzero(f);
    for (const RowPlan& pl : k.plans) {
        SymbolMatrix m(std::size_t(pl.k1), std::size_t(pl.k2p), f);
        for (auto& v : m.data()) v = rng.nonzero(f);
        k.raw_fb_coef.push_back(std::move(m));
    }

    k.bottom_code = make_mds(std::size_t(k.y_cols()), std::size_t(p.n + p.m), p.q, rng.next());
    k.mix_coef =
        SymbolMatrix(std::size_t(p.c) * std::size_t(2 * p.z), std::size_t(k.x_total), f);
    for (auto& v : k.mix_coef.data()) v = rng.nonzero(f);
    return k;
}

}  // namespace

CodecKeys make_keys(const NetworkParams& p, const KeyOptions& opt) {
    p.validate();
    constexpr int kMaxAttempts = 32;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        CodecKeys k = build_keys(p, opt, opt.seed + std::uint64_t(attempt));
        if (!opt.verify) return k;
        if (!verify_detection_minors(k)) continue;
        if (!verify_solver_ranks(k)) continue;
        k.verified = true;
        return k;
    }
    throw std::runtime_error("key construction failed verification; field likely too small");
}

int message_symbol_count(const CodecKeys& keys) { return keys.message_count(); }

MessageBlock random_message(const CodecKeys& keys, Rng& rng) {
    const Field f(keys.p.q);
    MessageBlock msg;
    for (std::size_t i = 0; i < keys.plans.size(); ++i) {
        std::vector<Symbol> row(keys.row_dim(i));
        for (auto& v : row) v = rng.symbol(f);
        msg.x_rows.push_back(std::move(row));
    }
    msg.y = SymbolMatrix(keys.p.c, keys.y_cols(), f);
    for (auto& v : msg.y.data()) v = rng.symbol(f);
    return msg;
}

std::vector<Symbol> flatten_message(const CodecKeys& keys, const MessageBlock& msg) {
    if (msg.x_rows.size() != keys.plans.size())
        throw std::invalid_argument("message row count mismatch");
    std::vector<Symbol> flat;
    flat.reserve(keys.message_count());
    for (std::size_t i = 0; i < msg.x_rows.size(); ++i) {
        if (msg.x_rows[i].size() != std::size_t(keys.row_dim(i)))
            throw std::invalid_argument("message row length mismatch");
        flat.insert(flat.end(), msg.x_rows[i].begin(), msg.x_rows[i].end());
    }
    if (int(msg.y.rows()) != keys.p.c || int(msg.y.cols()) != keys.y_cols())
        throw std::invalid_argument("message bottom block shape mismatch");
    flat.insert(flat.end(), msg.y.data().begin(), msg.y.data().end());
    return flat;
}

MessageBlock unflatten_message(const CodecKeys& keys, const std::vector<Symbol>& flat) {
    if (flat.size() != std::size_t(keys.message_count()))
        throw std::invalid_argument("flat message length mismatch");
    MessageBlock msg;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < keys.plans.size(); ++i) {
        msg.x_rows.emplace_back(flat.begin() + pos, flat.begin() + pos + keys.row_dim(i));
        pos += keys.row_dim(i);
    }
    msg.y = SymbolMatrix(keys.p.c, keys.y_cols(), Field(keys.p.q));
    std::copy(flat.begin() + pos, flat.end(), msg.y.data().begin());
    return msg;
}

Codeword encode(const CodecKeys& keys, const MessageBlock& msg) {
    const NetworkParams& p = keys.p;
    const Field f(p.q);
    const std::vector<Symbol> flat = flatten_message(keys, msg);
    const int yc = keys.y_cols();

    Codeword cw;
    cw.mat = SymbolMatrix(p.a, std::size_t(p.n + p.m), f);
    for (std::size_t i = 0; i < keys.plans.size(); ++i) {
        std::vector<Symbol> wire = mds_encode(keys.row_codes[i], msg.x_rows[i]);
        for (int j = 0; j < p.n; ++j) cw.mat.at(i, j) = wire[j];
    }
    const SymbolMatrix bpar = keys.bottom_code.parity();
    for (int t = 0; t < p.c; ++t) {
        for (int col = 0; col < p.n + p.m; ++col) {
            Symbol v{};
            if (col < yc) {
                v = msg.y.at(std::size_t(t), std::size_t(col));
            } else {
                const std::size_t pj = std::size_t(col - yc);
                for (std::size_t j = 0; j < std::size_t(yc); ++j)
                    v = f.add(v, f.mul(bpar.at(j, pj), msg.y.at(std::size_t(t), j)));
                const std::size_t mr = std::size_t(t) * std::size_t(2 * p.z) + pj;
                for (std::size_t u = 0; u < std::size_t(keys.x_total); ++u)
                    v = f.add(v, f.mul(keys.mix_coef.at(mr, u), flat[u]));
            }
            cw.mat.at(std::size_t(p.a - p.c + t), std::size_t(col)) = v;
        }
    }
    return cw;
}

std::vector<Symbol> compute_delta(const CodecKeys& keys, std::size_t row,
                                  const std::vector<Symbol>& received_row) {
    if (row >= keys.plans.size()) throw std::invalid_argument("row out of range");
    if (received_row.size() != std::size_t(keys.p.n))
        throw std::invalid_argument("row symbol count mismatch");
    const Field f(keys.p.q);
    const RowPlan& pl = keys.plans[row];
    const int dim = pl.k1 + pl.k2p;
    SymbolMatrix par = keys.row_codes[row].parity();
    std::vector<Symbol> delta(pl.k3);
    for (int j = 0; j < pl.k3; ++j) {
        Symbol acc = received_row[dim + j];
        for (int i = 0; i < dim; ++i) acc = f.sub(acc, f.mul(par.at(i, j), received_row[i]));
        delta[j] = acc;
    }
    return delta;
}

std::vector<Symbol> feedback_symbols(const CodecKeys& keys, std::size_t row,
                                     const std::vector<Symbol>& received_row) {
    if (row >= keys.plans.size()) throw std::invalid_argument("row out of range");
    if (received_row.size() != std::size_t(keys.p.n))
        throw std::invalid_argument("row symbol count mismatch");
    const Field f(keys.p.q);
    const RowPlan& pl = keys.plans[row];
    const SymbolMatrix& coef = keys.raw_fb_coef[row];
    std::vector<Symbol> out(pl.k2p);
    for (int i = 0; i < pl.k2p; ++i) {
        Symbol acc = received_row[pl.k1 + i];
        for (int j = 0; j < pl.k1; ++j) acc = f.sub(acc, f.mul(coef.at(j, i), received_row[j]));
        out[i] = acc;
    }
    return out;
}

SymbolMatrix claim_matrix(const CodecKeys& keys, const SymbolMatrix& x_block) {
    if (!keys.claims_enabled) throw std::logic_error("claims are not enabled for these keys");
    const NetworkParams& p = keys.p;
    if (int(x_block.rows()) != p.a - p.c || int(x_block.cols()) != p.n)
        throw std::invalid_argument("top block shape mismatch");
    SymbolMatrix w(std::size_t(p.a - p.c), std::size_t(p.m), Field(p.q));
    for (int i = 0; i < p.a - p.c; ++i) {
        std::vector<Symbol> m(keys.row_dim(i));
        for (std::size_t j = 0; j < m.size(); ++j) m[j] = x_block.at(i, j);
        std::vector<Symbol> full = mds_encode(keys.row_codes[i], m);
        for (int j = 0; j < p.m; ++j) w.at(i, j) = full[p.n + j];
    }
    return w;
}

SymbolMatrix system_matrix(const CodecKeys& keys) {
    const NetworkParams& p = keys.p;
    const Field f(p.q);
    const int ub = keys.message_count();
    const int yc = keys.y_cols();
    std::size_t nrows = std::size_t(p.n) * p.a + std::size_t(p.m) * p.c;
    if (keys.claims_enabled) nrows += std::size_t(p.m) * (p.a - p.c);
    SymbolMatrix sys(nrows, std::size_t(ub), f);

    const SymbolMatrix bpar = keys.bottom_code.parity();
    auto bottom_functional = [&](std::size_t slot, int t, int col) {
        if (col < yc) {
            sys.at(slot, keys.x_total + std::size_t(t) * yc + col) = Symbol{1};
        } else {
            const std::size_t pj = std::size_t(col - yc);
            for (int j = 0; j < yc; ++j)
                sys.at(slot, keys.x_total + std::size_t(t) * yc + j) = bpar.at(std::size_t(j), pj);
            const std::size_t mr = std::size_t(t) * std::size_t(2 * p.z) + pj;
            for (int u = 0; u < keys.x_total; ++u)
                sys.at(slot, std::size_t(u)) = keys.mix_coef.at(mr, std::size_t(u));
        }
    };

    for (int link = 0; link < p.n; ++link) {
        for (int r = 0; r < p.a - p.c; ++r) {
            std::size_t slot = slot_up(keys, link, r);
            for (int t = 0; t < keys.row_dim(r); ++t)
                sys.at(slot, keys.x_offset[r] + t) = keys.row_codes[r].generator.at(t, link);
        }
        for (int t = 0; t < p.c; ++t)
            bottom_functional(slot_up(keys, link, p.a - p.c + t), t, link);
    }
    for (int link = p.n; link < p.n + p.m; ++link)
        for (int t = 0; t < p.c; ++t) bottom_functional(slot_down(keys, link, t), t, link);

    if (keys.claims_enabled) {
        for (int link = p.n; link < p.n + p.m; ++link)
            for (int r = 0; r < p.a - p.c; ++r) {
                std::size_t slot = slot_claim(keys, link, r);
                for (int t = 0; t < keys.row_dim(r); ++t)
                    sys.at(slot, keys.x_offset[r] + t) = keys.row_codes[r].generator.at(t, link);
            }
    }
    return sys;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

struct Reader {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;
    std::uint32_t u32() {
        if (pos + 4 > buf.size()) throw std::invalid_argument("truncated key blob");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        if (pos + 8 > buf.size()) throw std::invalid_argument("truncated key blob");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
};

void put_matrix(std::vector<std::uint8_t>& out, const SymbolMatrix& m) {
    for (Symbol v : m.data()) put_u32(out, v);
}

SymbolMatrix read_matrix(Reader& r, std::size_t rows, std::size_t cols, Field f) {
    SymbolMatrix m(rows, cols, f);
    for (auto& v : m.data()) v = f.reduce(r.u32());
    return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_keys(const CodecKeys& keys) {
    std::vector<std::uint8_t> out;
    const char magic[] = "ZNEC1";
    out.insert(out.end(), magic, magic + 5);
    const NetworkParams& p = keys.p;
    for (int v : {int(p.q), p.n, p.m, p.a, p.b, p.c, p.z}) put_u32(out, std::uint32_t(v));
    std::uint32_t flags = (keys.claims_enabled ? 1u : 0u) | (keys.verified ? 2u : 0u);
    put_u32(out, flags);
    put_u32(out, std::uint32_t(keys.plans.size()));
    for (const RowPlan& pl : keys.plans) put_u32(out, std::uint32_t(pl.k2p));
    put_u64(out, keys.seed);
    for (const MdsCode& code : keys.row_codes) put_matrix(out, code.generator);
    if (keys.relay_code) put_matrix(out, keys.relay_code->generator);
    put_matrix(out, keys.masked_coef);
    for (const SymbolMatrix& m : keys.raw_fb_coef) put_matrix(out, m);
    put_matrix(out, keys.bottom_code.generator);
    put_matrix(out, keys.mix_coef);
    return out;
}

CodecKeys deserialize_keys(const std::vector<std::uint8_t>& blob) {
    if (blob.size() < 5 || std::memcmp(blob.data(), "ZNEC1", 5) != 0)
        throw std::invalid_argument("bad key blob magic");
    Reader r{blob, 5};
    NetworkParams p;
    p.q = r.u32();
    p.n = int(r.u32());
    p.m = int(r.u32());
    p.a = int(r.u32());
    p.b = int(r.u32());
    p.c = int(r.u32());
    p.z = int(r.u32());
    p.validate();
    const Field f(p.q);
    std::uint32_t flags = r.u32();
    std::uint32_t nrows = r.u32();
    if (nrows != std::uint32_t(p.a - p.c)) throw std::invalid_argument("row count mismatch");

    CodecKeys k;
    k.p = p;
    k.plans = plan_layout(p);
    k.claims_enabled = flags & 1u;
    k.verified = flags & 2u;
    for (std::size_t i = 0; i < k.plans.size(); ++i)
        if (std::uint32_t(k.plans[i].k2p) != r.u32())
            throw std::invalid_argument("stored layout disagrees with parameters");
    k.seed = r.u64();

    k.x_total = 0;
    for (const RowPlan& pl : k.plans) {
        k.x_offset.push_back(k.x_total);
        k.x_total += pl.k1 + pl.k2p;
    }
    k.y_total = p.c * (p.n + p.m - 2 * p.z);

    const std::size_t code_len = k.claims_enabled ? std::size_t(p.n + p.m) : std::size_t(p.n);
    for (std::size_t i = 0; i < k.plans.size(); ++i) {
        std::size_t dim = std::size_t(k.plans[i].k1) + k.plans[i].k2p;
        MdsCode code;
        code.length = code_len;
        code.dim = dim;
        code.field = f;
        code.generator = read_matrix(r, dim, code_len, f);
        k.row_codes.push_back(std::move(code));
    }
    bool any_full_message = false;
    int max_k2p = 0;
    for (const RowPlan& pl : k.plans) {
        if (pl.kind == RowCase::NoSyndrome)
            any_full_message = true;
        else
            max_k2p = std::max(max_k2p, pl.k2p);
    }
    if (any_full_message) {
        MdsCode code;
        code.length = std::size_t(p.n + p.z);
        code.dim = std::size_t(p.n);
        code.field = f;
        code.generator = read_matrix(r, code.dim, code.length, f);
        k.relay_code = std::move(code);
    }
    k.masked_coef = read_matrix(r, std::size_t(p.n - p.z), std::size_t(max_k2p), f);
    for (const RowPlan& pl : k.plans)
        k.raw_fb_coef.push_back(read_matrix(r, std::size_t(pl.k1), std::size_t(pl.k2p), f));
    k.bottom_code.length = std::size_t(p.n + p.m);
    k.bottom_code.dim = std::size_t(k.y_cols());
    k.bottom_code.field = f;
    k.bottom_code.generator = read_matrix(r, k.bottom_code.dim, k.bottom_code.length, f);
    k.mix_coef =
        read_matrix(r, std::size_t(p.c) * std::size_t(2 * p.z), std::size_t(k.x_total), f);
    if (r.pos != blob.size()) throw std::invalid_argument("trailing bytes in key blob");
    return k;
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::vector<Symbol>& symbols) {
    std::uint64_t h = 14695981039346656037ull;
    for (Symbol s : symbols) {
        for (int i = 0; i < 4; ++i) {
            h ^= std::uint8_t(s >> (8 * i));
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace znec
