#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace znec {

using Symbol = std::uint32_t;

bool is_prime(std::uint32_t v);

// Prime field GF(q). Cheap value type; all ops are total except inv(0).
class Field {
public:
    explicit Field(std::uint32_t q);

    std::uint32_t order() const { return q_; }

    Symbol reduce(std::uint64_t v) const { return static_cast<Symbol>(v % q_); }
    Symbol add(Symbol x, Symbol y) const { return reduce(std::uint64_t(x) + y); }
    Symbol sub(Symbol x, Symbol y) const { return reduce(std::uint64_t(x) + q_ - y % q_); }
    Symbol neg(Symbol x) const { return sub(0, x); }
    Symbol mul(Symbol x, Symbol y) const { return reduce(std::uint64_t(x) * y); }
    Symbol pow(Symbol x, std::uint64_t e) const;
    Symbol inv(Symbol x) const;  // throws std::domain_error on 0

    bool operator==(const Field& o) const { return q_ == o.q_; }
    bool operator!=(const Field& o) const { return q_ != o.q_; }

private:
    std::uint32_t q_;
};

// A single element carrying its modulus; mixing moduli throws.
struct FieldElement {
    Symbol value = 0;
    std::uint32_t q = 2;

    FieldElement() = default;
    FieldElement(Symbol v, std::uint32_t modulus);

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement inverse() const;
    bool operator==(const FieldElement& o) const { return value == o.value && q == o.q; }
};

// Dense row-major matrix over one prime field.
class SymbolMatrix {
public:
    SymbolMatrix() : rows_(0), cols_(0), field_(2) {}
    SymbolMatrix(std::size_t rows, std::size_t cols, Field f)
        : rows_(rows), cols_(cols), field_(f), data_(rows * cols, 0) {}

    static SymbolMatrix identity(std::size_t n, Field f);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    Symbol& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Symbol at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Symbol> row(std::size_t r) const;
    void set_row(std::size_t r, const std::vector<Symbol>& values);

    SymbolMatrix mul(const SymbolMatrix& o) const;
    SymbolMatrix add(const SymbolMatrix& o) const;
    SymbolMatrix transpose() const;

    const std::vector<Symbol>& data() const { return data_; }
    std::vector<Symbol>& data() { return data_; }

    bool operator==(const SymbolMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && data_ == o.data_;
    }

private:
    std::size_t rows_, cols_;
    Field field_;
    std::vector<Symbol> data_;
};

std::vector<Symbol> mat_vec(const SymbolMatrix& m, const std::vector<Symbol>& v);
std::vector<Symbol> vec_mat(const std::vector<Symbol>& v, const SymbolMatrix& m);

std::size_t mat_rank(SymbolMatrix m);

enum class SolveStatus { Unique, Inconsistent, Underdetermined };

struct SolveResult {
    SolveStatus status = SolveStatus::Inconsistent;
    std::vector<Symbol> solution;  // valid iff status == Unique
};

// Solves A x = b over the field, with consistency checking of the full
// (possibly overdetermined) system. Elimination picks the topmost nonzero
// entry of the leftmost unresolved column, so reruns are bit-identical.
SolveResult mat_solve(const SymbolMatrix& a, const std::vector<Symbol>& b);

// Deterministic RNG. The engine is the fully-specified std::mt19937_64;
// sampling is done by hand because the standard distributions are not
// reproducible across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound);

    Symbol symbol(const Field& f) { return static_cast<Symbol>(below(f.order())); }
    Symbol nonzero(const Field& f) { return static_cast<Symbol>(1 + below(f.order() - 1)); }

private:
    std::mt19937_64 eng_;
};

}  // namespace znec
