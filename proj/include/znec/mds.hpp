#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "znec/galois.hpp"

namespace znec {

// Systematic MDS code: generator is [I | P] with P a Cauchy block, so every
// dim-subset of coordinates determines the message. Requires q > length.
struct MdsCode {
    std::size_t length = 0;
    std::size_t dim = 0;
    Field field{2};
    SymbolMatrix generator;  // dim x length

    // parity columns only (dim x (length - dim))
    SymbolMatrix parity() const;
};

MdsCode make_mds(std::size_t dim, std::size_t length, std::uint32_t q, std::uint64_t seed);

std::vector<Symbol> mds_encode(const MdsCode& code, const std::vector<Symbol>& message);

struct ErasureResult {
    bool ok = false;  // false: the known coordinates are mutually inconsistent
    std::vector<Symbol> message;
};

// Recover the message from a subset of coordinates (position -> value).
// Throws if fewer than dim coordinates are supplied; extra coordinates are
// cross-checked and any disagreement is reported via ok = false.
ErasureResult mds_erasure_decode(const MdsCode& code, const std::map<std::size_t, Symbol>& known);

struct ErrorDecodeResult {
    bool ok = false;
    std::vector<Symbol> message;
    std::vector<std::size_t> error_positions;
};

// Bounded-distance decoding by support enumeration: smallest support wins.
// Requires 2t < length - dim + 1 so the answer is unique.
ErrorDecodeResult mds_error_decode(const MdsCode& code, const std::vector<Symbol>& received,
                                   std::size_t t);

// Exhaustive check that every dim-subset of generator columns is invertible.
// Intended for lengths <= 12 or so.
bool verify_mds(const MdsCode& code);

}  // namespace znec
