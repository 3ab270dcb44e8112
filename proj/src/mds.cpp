#include "znec/mds.hpp"

#include <algorithm>

#include "znec/subset_iter.hpp"

namespace znec {

SymbolMatrix MdsCode::parity() const {
    SymbolMatrix p(dim, length - dim, field);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < length - dim; ++j) p.at(i, j) = generator.at(i, dim + j);
    return p;
}

MdsCode make_mds(std::size_t dim, std::size_t length, std::uint32_t q, std::uint64_t seed) {
    if (dim == 0 || dim > length) throw std::invalid_argument("mds dimension out of range");
    Field f(q);
    if (q <= length) throw std::invalid_argument("field too small for requested length");

    // Draw `length` distinct field points; pairwise differences are then
    // invertible, which makes every minor of the Cauchy block nonsingular.
    Rng rng(seed);
    std::vector<Symbol> points;
    std::vector<bool> used(q, false);
    while (points.size() < length) {
        Symbol v = rng.symbol(f);
        if (used[v]) continue;
        used[v] = true;
        points.push_back(v);
    }

    MdsCode code;
    code.length = length;
    code.dim = dim;
    code.field = f;
    code.generator = SymbolMatrix(dim, length, f);
    for (std::size_t i = 0; i < dim; ++i) code.generator.at(i, i) = 1;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = dim; j < length; ++j)
            code.generator.at(i, j) = f.inv(f.sub(points[i], points[j]));
    return code;
}

std::vector<Symbol> mds_encode(const MdsCode& code, const std::vector<Symbol>& message) {
    if (message.size() != code.dim) throw std::invalid_argument("message length mismatch");
    return vec_mat(message, code.generator);
}

ErasureResult mds_erasure_decode(const MdsCode& code, const std::map<std::size_t, Symbol>& known) {
    if (known.size() < code.dim) throw std::invalid_argument("too few known coordinates");
    const Field& f = code.field;
    SymbolMatrix sys(known.size(), code.dim, f);
    std::vector<Symbol> rhs;
    rhs.reserve(known.size());
    std::size_t r = 0;
    for (const auto& [pos, value] : known) {
        if (pos >= code.length) throw std::invalid_argument("coordinate out of range");
        for (std::size_t i = 0; i < code.dim; ++i) sys.at(r, i) = code.generator.at(i, pos);
        rhs.push_back(f.reduce(value));
        ++r;
    }
    SolveResult sol = mat_solve(sys, rhs);
    ErasureResult out;
    if (sol.status == SolveStatus::Underdetermined)
        throw std::logic_error("mds erasure system lost rank");  // impossible for a valid code
    if (sol.status != SolveStatus::Unique) return out;
    out.ok = true;
    out.message = std::move(sol.solution);
    return out;
}

ErrorDecodeResult mds_error_decode(const MdsCode& code, const std::vector<Symbol>& received,
                                   std::size_t t) {
    if (received.size() != code.length) throw std::invalid_argument("received length mismatch");
    if (2 * t >= code.length - code.dim + 1)
        throw std::invalid_argument("error budget exceeds half the code distance");

    ErrorDecodeResult out;
    for (std::size_t s = 0; s <= t && !out.ok; ++s) {
        for_each_subset(code.length, s, [&](const std::vector<std::size_t>& support) {
            std::map<std::size_t, Symbol> known;
            std::size_t si = 0;
            for (std::size_t pos = 0; pos < code.length; ++pos) {
                if (si < support.size() && support[si] == pos) {
                    ++si;
                    continue;
                }
                known[pos] = received[pos];
            }
            ErasureResult er = mds_erasure_decode(code, known);
            if (!er.ok) return false;
            std::vector<Symbol> cw = mds_encode(code, er.message);
            out.ok = true;
            out.message = er.message;
            out.error_positions.clear();
            for (std::size_t pos = 0; pos < code.length; ++pos)
                if (cw[pos] != code.field.reduce(received[pos])) out.error_positions.push_back(pos);
            return true;
        });
    }
    return out;
}

bool verify_mds(const MdsCode& code) {
    bool bad = for_each_subset(code.length, code.dim, [&](const std::vector<std::size_t>& cols) {
        SymbolMatrix sub(code.dim, code.dim, code.field);
        for (std::size_t i = 0; i < code.dim; ++i)
            for (std::size_t j = 0; j < code.dim; ++j) sub.at(i, j) = code.generator.at(i, cols[j]);
        return mat_rank(sub) != code.dim;
    });
    return !bad;
}

}  // namespace znec
