#include "znec/signaling.hpp"

#include <stdexcept>

namespace znec {

namespace {

// True when every entry of delta is zero.
bool all_zero(const std::vector<Symbol>& v) {
    for (Symbol s : v) {
        if (s != 0) return false;
    }
    return true;
}

// Cross-ratio test: delta is proportional to column l of the row's parity
// functionals. Requires every parity entry in that column to be nonzero,
// which holds for the Cauchy-built codes used here.
bool matches_column(const Field& f, const std::vector<Symbol>& delta, const SymbolMatrix& parity,
                    std::size_t l) {
    const std::size_t k3 = delta.size();
    for (std::size_t j = 0; j < k3; ++j) {
        if (delta[j] == 0) return false;
        if (f.mul(delta[j], parity.at(l, 0)) != f.mul(delta[0], parity.at(l, j))) return false;
    }
    return true;
}

// Post-pin residual for a message position: delta must stay proportional to
// parity column l. Checks delta_j * eta_{l,ref} == delta_ref * eta_{l,j}.
bool residual_clean(const Field& f, const std::vector<Symbol>& delta, const SymbolMatrix& parity,
                    std::size_t l, std::size_t ref) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
        if (j == ref) continue;
        if (f.mul(delta[j], parity.at(l, ref)) != f.mul(delta[ref], parity.at(l, j))) return false;
    }
    return true;
}

// Exhaustive single-position explanation of a nonzero syndrome. Returns the
// unique wire position consistent with one corrupted coordinate, or -1.
int locate_single(const Field& f, const std::vector<Symbol>& delta, const SymbolMatrix& parity,
                  std::size_t dim, std::size_t n) {
    const std::size_t k3 = delta.size();
    std::size_t nonzero = 0;
    std::size_t last_nz = 0;
    for (std::size_t j = 0; j < k3; ++j) {
        if (delta[j] != 0) {
            ++nonzero;
            last_nz = j;
        }
    }
    if (nonzero == 0) return -1;
    if (k3 < 2) return -1;  // a single check symbol cannot localise anything
    if (nonzero == 1) return static_cast<int>(dim + last_nz);
    if (nonzero < k3) return -1;  // mixed pattern: no single position explains it
    int found = -1;
    for (std::size_t l = 0; l < dim; ++l) {
        if (matches_column(f, delta, parity, l)) {
            if (found >= 0) return -1;  // ambiguous (cannot occur for 2-regular codes)
            found = static_cast<int>(l);
        }
    }
    (void)n;
    return found;
}

std::vector<Symbol> masked_payload(const CodecKeys& keys, std::size_t row,
                                   const std::vector<Symbol>& wire_row, int excluded) {
    const Field& f = keys.row_codes[row].field;
    const std::size_t k1 = keys.plans[row].k1;
    const std::size_t k2p = keys.plans[row].k2p;
    std::vector<Symbol> out(k2p, 0);
    for (std::size_t j = 0; j < k2p; ++j) {
        Symbol acc = wire_row[k1 + j];
        for (std::size_t i = 0; i < k1; ++i) {
            if (static_cast<int>(i) == excluded) continue;
            acc = f.add(acc, f.mul(keys.masked_coef.at(i, j), wire_row[i]));
        }
        out[j] = acc;
    }
    return out;
}

Symbol bare_sum(const CodecKeys& keys, std::size_t row, const std::vector<Symbol>& wire_row,
                std::size_t col) {
    const Field& f = keys.row_codes[row].field;
    const std::size_t k1 = keys.plans[row].k1;
    Symbol acc = 0;
    for (std::size_t i = 0; i < k1; ++i) {
        acc = f.add(acc, f.mul(keys.masked_coef.at(i, col), wire_row[i]));
    }
    return acc;
}

}  // namespace

int payload_symbols(const RoundFeedback& fb) {
    int total = 0;
    for (const RowFeedback& rf : fb.rows) total += static_cast<int>(rf.payload.size());
    return total;
}

NodeAState make_node_a(const CodecKeys& keys) {
    NodeAState st;
    st.rows.resize(keys.plans.size());
    return st;
}

NodeBState make_node_b(const CodecKeys& keys) {
    NodeBState st;
    st.rows.resize(keys.plans.size());
    return st;
}

RoundFeedback node_a_observe(NodeAState& st, const CodecKeys& keys,
                             const SymbolMatrix& received_upstream) {
    const std::size_t n = keys.p.n;
    const std::size_t z = keys.p.z;
    RoundFeedback fb;
    fb.rows.resize(keys.plans.size());
    for (std::size_t i = 0; i < keys.plans.size(); ++i) {
        const RowPlan& pl = keys.plans[i];
        RowMemory& mem = st.rows[i];
        RowFeedback& rf = fb.rows[i];
        std::vector<Symbol> wire_row(n, 0);
        for (std::size_t j = 0; j < n; ++j) wire_row[j] = received_upstream.at(i, j);

        if (pl.kind == RowCase::NoSyndrome) {
            // All wire symbols carry messages: forward the check symbols of the
            // shared length-(n+z) code so the downstream side can audit them.
            rf.variant = FeedbackVariant::FullParity;
            const MdsCode& relay = *keys.relay_code;
            const Field& f = relay.field;
            SymbolMatrix par = relay.parity();
            rf.payload.assign(z, 0);
            for (std::size_t j = 0; j < z; ++j) {
                Symbol acc = 0;
                for (std::size_t t = 0; t < n; ++t) {
                    acc = f.add(acc, f.mul(par.at(t, j), wire_row[t]));
                }
                rf.payload[j] = acc;
            }
            continue;
        }

        if (pl.kind == RowCase::SingleSyndrome) {
            // One check symbol: alarm once, and relay the signalled values
            // verbatim every round so the downstream check stays exact.
            std::vector<Symbol> delta = compute_delta(keys, i, wire_row);
            if (!all_zero(delta) && !mem.event_seen) {
                mem.event_seen = true;
                fb.cs = true;
                ++st.cs_count;
            }
            rf.variant = FeedbackVariant::RawValues;
            rf.payload.assign(wire_row.begin() + static_cast<std::ptrdiff_t>(pl.k1),
                              wire_row.begin() + static_cast<std::ptrdiff_t>(pl.k1 + pl.k2p));
            continue;
        }

        // FullSyndrome and PartialSyndrome rows share the syndrome machinery.
        const MdsCode& code = keys.row_codes[i];
        const Field& f = code.field;
        const std::size_t dim = code.dim;
        SymbolMatrix par = code.parity();
        std::vector<Symbol> delta = compute_delta(keys, i, wire_row);
        const std::size_t k3 = delta.size();
        bool alarm = false;
        std::optional<std::pair<int, int>> located;

        if (z == 1) {
            // No capacity to localise: alarm on every anomaly.
            if (!all_zero(delta)) {
                alarm = true;
                mem.event_seen = true;
            }
        } else if (mem.identified_pos >= 0) {
            const std::size_t l = static_cast<std::size_t>(mem.identified_pos);
            if (l < dim) {
                const std::size_t ref = (pl.kind == RowCase::FullSyndrome) ? 0 : k3 - 1;
                if (!residual_clean(f, delta, par, l, ref)) alarm = true;
            } else {
                const std::size_t idx = l - dim;
                for (std::size_t j = 0; j < k3; ++j) {
                    if (j != idx && delta[j] != 0) alarm = true;
                }
            }
        } else if (mem.event_seen) {
            if (!all_zero(delta)) alarm = true;
        } else if (!all_zero(delta)) {
            alarm = true;
            mem.event_seen = true;
            int pos = locate_single(f, delta, par, dim, n);
            if (pos >= 0) {
                mem.identified_pos = pos;
                located = std::make_pair(static_cast<int>(i), pos);
            }
        }

        if (alarm) {
            fb.cs = true;
            ++st.cs_count;
            if (located && !fb.cs_located) fb.cs_located = located;
        }

        if (pl.kind == RowCase::FullSyndrome) {
            rf.variant = FeedbackVariant::MaskedSet;  // empty payload
            continue;
        }

        // PartialSyndrome payload: masked signalled values, reshaped around an
        // identified position when one is pinned.
        const int ident = mem.identified_pos;
        const std::size_t k1 = pl.k1;
        if (ident >= 0 && static_cast<std::size_t>(ident) < k1) {
            rf.variant = FeedbackVariant::MaskedSetReduced;
            rf.payload = masked_payload(keys, i, wire_row, ident);
        } else if (ident >= 0 && static_cast<std::size_t>(ident) < dim) {
            // The pinned position is itself a signalled value: drop its masked
            // copy and append the bare mask sum so nothing rides on it.
            rf.variant = FeedbackVariant::MaskedSetReduced;
            const std::size_t lp = static_cast<std::size_t>(ident) - k1;
            std::vector<Symbol> full = masked_payload(keys, i, wire_row, -1);
            rf.payload.clear();
            for (std::size_t j = 0; j < static_cast<std::size_t>(pl.k2p); ++j) {
                if (j != lp) rf.payload.push_back(full[j]);
            }
            rf.payload.push_back(bare_sum(keys, i, wire_row, lp));
            rf.bare_index = static_cast<int>(lp);
        } else {
            rf.variant = FeedbackVariant::MaskedSet;
            rf.payload = masked_payload(keys, i, wire_row, -1);
        }
    }
    return fb;
}

BVerdict node_b_verify(NodeBState& st, const CodecKeys& keys, const MessageBlock& truth,
                       const RoundFeedback& received) {
    BVerdict verdict;
    const std::size_t z = keys.p.z;
    bool claim = false;

    if (received.cs) {
        claim = true;
        if (received.cs_located) {
            const int row = received.cs_located->first;
            const int pos = received.cs_located->second;
            if (row >= 0 && static_cast<std::size_t>(row) < st.rows.size() &&
                st.rows[static_cast<std::size_t>(row)].identified_pos < 0) {
                st.rows[static_cast<std::size_t>(row)].identified_pos = pos;
            }
        }
    }

    if (received.rows.size() != keys.plans.size()) {
        claim = true;
    } else {
        for (std::size_t i = 0; i < keys.plans.size(); ++i) {
            const RowPlan& pl = keys.plans[i];
            const RowFeedback& rf = received.rows[i];
            RowMemory& mem = st.rows[i];
            const std::vector<Symbol>& x = truth.x_rows[i];
            const Field& f = keys.row_codes[i].field;
            const std::size_t k1 = pl.k1;
            const std::size_t dim = k1 + pl.k2p;

            if (pl.kind == RowCase::NoSyndrome) {
                if (rf.variant != FeedbackVariant::FullParity || rf.payload.size() != z) {
                    claim = true;
                    continue;
                }
                const MdsCode& relay = *keys.relay_code;
                SymbolMatrix par = relay.parity();
                std::vector<Symbol> omega(z, 0);
                bool any_nz = false;
                bool all_nz = true;
                for (std::size_t j = 0; j < z; ++j) {
                    Symbol acc = rf.payload[j];
                    for (std::size_t t = 0; t < x.size(); ++t) {
                        acc = f.sub(acc, f.mul(par.at(t, j), x[t]));
                    }
                    omega[j] = acc;
                    if (acc != 0) any_nz = true;
                    else all_nz = false;
                }
                if (!any_nz) continue;
                if (z >= 2 && mem.identified_pos >= 0) {
                    // Residual check against the pinned wire position.
                    const std::size_t l = static_cast<std::size_t>(mem.identified_pos);
                    if (residual_clean(f, omega, par, l, 0)) continue;  // same culprit
                    claim = true;
                    continue;
                }
                claim = true;
                if (z >= 2 && all_nz) {
                    int found = -1;
                    for (std::size_t l = 0; l < x.size(); ++l) {
                        if (matches_column(f, omega, par, l)) {
                            found = (found >= 0) ? -1 : static_cast<int>(l);
                            if (found < 0) break;
                        }
                    }
                    if (found >= 0) {
                        mem.identified_pos = found;
                        if (!verdict.located) {
                            verdict.located = std::make_pair(static_cast<int>(i), found);
                        }
                    }
                }
                continue;
            }

            if (pl.kind == RowCase::SingleSyndrome) {
                if (rf.variant != FeedbackVariant::RawValues || rf.payload.size() != static_cast<std::size_t>(pl.k2p)) {
                    claim = true;
                    continue;
                }
                for (std::size_t j = 0; j < static_cast<std::size_t>(pl.k2p); ++j) {
                    if (rf.payload[j] != x[k1 + j]) claim = true;
                }
                continue;
            }

            if (pl.kind == RowCase::FullSyndrome) {
                if (rf.variant != FeedbackVariant::MaskedSet || !rf.payload.empty()) claim = true;
                continue;
            }

            // PartialSyndrome: recompute the masked values from the truth.
            const bool reduced_expected =
                mem.identified_pos >= 0 && static_cast<std::size_t>(mem.identified_pos) < dim;
            if (!reduced_expected) {
                if (rf.variant != FeedbackVariant::MaskedSet || rf.payload.size() != static_cast<std::size_t>(pl.k2p)) {
                    claim = true;
                    continue;
                }
                for (std::size_t j = 0; j < static_cast<std::size_t>(pl.k2p); ++j) {
                    Symbol acc = x[k1 + j];
                    for (std::size_t t = 0; t < k1; ++t) {
                        acc = f.add(acc, f.mul(keys.masked_coef.at(t, j), x[t]));
                    }
                    if (rf.payload[j] != acc) claim = true;
                }
                continue;
            }

            const std::size_t l = static_cast<std::size_t>(mem.identified_pos);
            if (rf.variant != FeedbackVariant::MaskedSetReduced ||
                rf.payload.size() != static_cast<std::size_t>(pl.k2p)) {
                claim = true;
                continue;
            }
            if (l < k1) {
                if (rf.bare_index != -1) {
                    claim = true;
                    continue;
                }
                for (std::size_t j = 0; j < static_cast<std::size_t>(pl.k2p); ++j) {
                    Symbol acc = x[k1 + j];
                    for (std::size_t t = 0; t < k1; ++t) {
                        if (t == l) continue;
                        acc = f.add(acc, f.mul(keys.masked_coef.at(t, j), x[t]));
                    }
                    if (rf.payload[j] != acc) claim = true;
                }
            } else {
                const std::size_t lp = l - k1;
                if (rf.bare_index != static_cast<int>(lp)) {
                    claim = true;
                    continue;
                }
                std::size_t cursor = 0;
                for (std::size_t j = 0; j < static_cast<std::size_t>(pl.k2p); ++j) {
                    if (j == lp) continue;
                    Symbol acc = x[k1 + j];
                    for (std::size_t t = 0; t < k1; ++t) {
                        acc = f.add(acc, f.mul(keys.masked_coef.at(t, j), x[t]));
                    }
                    if (rf.payload[cursor] != acc) claim = true;
                    ++cursor;
                }
                Symbol bare = 0;
                for (std::size_t t = 0; t < k1; ++t) {
                    bare = f.add(bare, f.mul(keys.masked_coef.at(t, lp), x[t]));
                }
                if (rf.payload[cursor] != bare) claim = true;
            }
        }
    }

    if (claim) {
        verdict.send_claim = true;
        ++st.claims_sent;
    }
    return verdict;
}

bool detection_complete(const NetworkParams& p, int identified_upstream, bool claim_delivered) {
    (void)p;
    return identified_upstream >= 2 || claim_delivered;
}

}  // namespace znec
