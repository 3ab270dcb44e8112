#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "znec/bounds.hpp"
#include "znec/mds.hpp"

namespace znec {

// Per-row feedback shapes, by how much of the row's redundancy rides the
// feedback link instead of the wire:
//   NoSyndrome     k2p == z      all n wire symbols are messages
//   PartialSyndrome 0 < k2p <= z-2  k3 >= 2 wire parity symbols remain
//   FullSyndrome   k2p == 0      all z redundant symbols on the wire
//   SingleSyndrome k2p == z-1    one wire parity symbol (z >= 2 only)
enum class RowCase { NoSyndrome, PartialSyndrome, FullSyndrome, SingleSyndrome };

struct RowPlan {
    int k1 = 0;   // message symbols fixed per row (n - z)
    int k2p = 0;  // message symbols whose redundancy is signalled over feedback
    int k3 = 0;   // wire parity symbols (z - k2p)
    RowCase kind = RowCase::FullSyndrome;
};

// Distribute the feedback budget b over the a - c top rows. Only defined in
// the tight regime; throws on the one known uncovered corner
// (z == 2 with b == 2(a-c) - 1).
std::vector<RowPlan> plan_layout(const NetworkParams& p);

struct MessageBlock {
    std::vector<std::vector<Symbol>> x_rows;  // one vector per top row
    SymbolMatrix y;                           // c x (n + m - 2z)
};

inline constexpr std::uint64_t kDefaultKeySeed = 0x7a6e6563u;

struct KeyOptions {
    // claims are enabled when requested AND the field fits the extended code
    // AND the downstream bundle is wide enough (regimes 1 and 2)
    bool with_claims = true;
    bool verify = true;  // run the construction-time rank sweeps (with reseed retries)
    std::uint64_t seed = kDefaultKeySeed;
};

struct CodecKeys {
    NetworkParams p;
    std::vector<RowPlan> plans;
    bool claims_enabled = false;
    bool verified = false;
    std::uint64_t seed = 0;

    // per top row: systematic code of length n (or n + m with claims);
    // wire symbols are the first n coordinates, claim cells the last m
    std::vector<MdsCode> row_codes;
    // (n + z, n) check code for rows that carry no wire parity
    std::optional<MdsCode> relay_code;
    // shared masking coefficients for feedback payloads: k1 x max(k2p)
    SymbolMatrix masked_coef;
    // per-row coefficients for the raw feedback-difference form: k1 x k2p
    std::vector<SymbolMatrix> raw_fb_coef;
    // Bottom rows carry the y symbols verbatim on the first n + m - 2z
    // columns. Each of the last 2z columns adds, on top of the row's own
    // (n + m, n + m - 2z) parity, a random functional of the top-row
    // symbols, so the bottom rows also cross-check the wires. The parity
    // keeps bottom recovery an MDS property at any field size; only the
    // top-row admixture is sampled and re-verified.
    MdsCode bottom_code;
    // top-row admixture: row t * 2z + j covers bottom row t, parity column j;
    // one coefficient per top-row symbol
    SymbolMatrix mix_coef;

    // derived layout info
    int x_total = 0;
    int y_total = 0;
    std::vector<int> x_offset;  // flat offset of each row's messages

    int message_count() const { return x_total + y_total; }
    int y_cols() const { return p.n + p.m - 2 * p.z; }
    int row_dim(std::size_t i) const { return plans[i].k1 + plans[i].k2p; }
};

CodecKeys make_keys(const NetworkParams& p, const KeyOptions& opt = {});

struct Codeword {
    SymbolMatrix mat;  // a x (n + m); top rows zero outside the first n columns
};

int message_symbol_count(const CodecKeys& keys);

MessageBlock random_message(const CodecKeys& keys, Rng& rng);
std::vector<Symbol> flatten_message(const CodecKeys& keys, const MessageBlock& msg);
MessageBlock unflatten_message(const CodecKeys& keys, const std::vector<Symbol>& flat);

Codeword encode(const CodecKeys& keys, const MessageBlock& msg);

// Wire syndrome of one top row from its n received symbols: zero on a clean
// row, one entry per wire parity symbol.
std::vector<Symbol> compute_delta(const CodecKeys& keys, std::size_t row,
                                  const std::vector<Symbol>& received_row);

// Raw feedback-difference form: k2p symbols the helper relay can check
// against the true message.
std::vector<Symbol> feedback_symbols(const CodecKeys& keys, std::size_t row,
                                     const std::vector<Symbol>& received_row);

// Claim block W for the given received/true top-row wire block ((a-c) x n):
// re-encodes each row's systematic prefix into the m claim cells.
SymbolMatrix claim_matrix(const CodecKeys& keys, const SymbolMatrix& x_block);

// Every wire (and claim) symbol as a linear functional over the flattened
// message; rows are indexed by the slot helpers below.
SymbolMatrix system_matrix(const CodecKeys& keys);

inline std::size_t slot_up(const CodecKeys& k, int link, int row) {
    return std::size_t(link) * k.p.a + row;
}
inline std::size_t slot_down(const CodecKeys& k, int link, int t) {
    return std::size_t(k.p.n) * k.p.a + std::size_t(link - k.p.n) * k.p.c + t;
}
inline std::size_t slot_claim(const CodecKeys& k, int link, int row) {
    return std::size_t(k.p.n) * k.p.a + std::size_t(k.p.m) * k.p.c +
           std::size_t(link - k.p.n) * (k.p.a - k.p.c) + row;
}

// key blob, magic "ZNEC1", little-endian u32 payload
std::vector<std::uint8_t> serialize_keys(const CodecKeys& keys);
CodecKeys deserialize_keys(const std::vector<std::uint8_t>& blob);

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len);
std::uint64_t fnv1a64(const std::vector<Symbol>& symbols);

}  // namespace znec
