#include "znec/galois.hpp"

namespace znec {

bool is_prime(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

Field::Field(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) throw std::invalid_argument("field order must be prime");
}

Symbol Field::pow(Symbol x, std::uint64_t e) const {
    Symbol base = reduce(x);
    Symbol acc = 1;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

Symbol Field::inv(Symbol x) const {
    x = reduce(x);
    if (x == 0) throw std::domain_error("inverse of zero");
    return pow(x, q_ - 2);
}

FieldElement::FieldElement(Symbol v, std::uint32_t modulus) : q(modulus) {
    Field f(modulus);
    value = f.reduce(v);
}

static void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.q != b.q) throw std::invalid_argument("field modulus mismatch");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_field(*this, o);
    return FieldElement(Field(q).add(value, o.value), q);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_field(*this, o);
    return FieldElement(Field(q).sub(value, o.value), q);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_field(*this, o);
    return FieldElement(Field(q).mul(value, o.value), q);
}

FieldElement FieldElement::inverse() const { return FieldElement(Field(q).inv(value), q); }

SymbolMatrix SymbolMatrix::identity(std::size_t n, Field f) {
    SymbolMatrix m(n, n, f);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Symbol> SymbolMatrix::row(std::size_t r) const {
    return std::vector<Symbol>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void SymbolMatrix::set_row(std::size_t r, const std::vector<Symbol>& values) {
    if (values.size() != cols_) throw std::invalid_argument("row length mismatch");
    std::copy(values.begin(), values.end(), data_.begin() + r * cols_);
}

SymbolMatrix SymbolMatrix::mul(const SymbolMatrix& o) const {
    if (field_ != o.field_ || cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    SymbolMatrix out(rows_, o.cols_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            Symbol v = at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                out.at(i, j) = field_.add(out.at(i, j), field_.mul(v, o.at(k, j)));
        }
    return out;
}

SymbolMatrix SymbolMatrix::add(const SymbolMatrix& o) const {
    if (field_ != o.field_ || rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix sum shape mismatch");
    SymbolMatrix out(rows_, cols_, field_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = field_.add(data_[i], o.data_[i]);
    return out;
}

SymbolMatrix SymbolMatrix::transpose() const {
    SymbolMatrix out(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

std::vector<Symbol> mat_vec(const SymbolMatrix& m, const std::vector<Symbol>& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("mat_vec shape mismatch");
    const Field& f = m.field();
    std::vector<Symbol> out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Symbol acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc = f.add(acc, f.mul(m.at(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

std::vector<Symbol> vec_mat(const std::vector<Symbol>& v, const SymbolMatrix& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("vec_mat shape mismatch");
    const Field& f = m.field();
    std::vector<Symbol> out(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Symbol s = v[i];
        if (!s) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] = f.add(out[j], f.mul(s, m.at(i, j)));
    }
    return out;
}

// Forward elimination shared by rank and solve. Returns pivot columns.
static std::vector<std::size_t> eliminate(SymbolMatrix& m) {
    const Field f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m.at(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = c; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
        Symbol piv_inv = f.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = f.mul(m.at(r, j), piv_inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            Symbol v = m.at(i, c);
            if (!v) continue;
            for (std::size_t j = c; j < m.cols(); ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(v, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t mat_rank(SymbolMatrix m) { return eliminate(m).size(); }

SolveResult mat_solve(const SymbolMatrix& a, const std::vector<Symbol>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("mat_solve shape mismatch");
    const Field f = a.field();
    SymbolMatrix aug(a.rows(), a.cols() + 1, f);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = f.reduce(a.at(i, j));
        aug.at(i, a.cols()) = f.reduce(b[i]);
    }
    std::vector<std::size_t> pivots = eliminate(aug);
    SolveResult res;
    if (!pivots.empty() && pivots.back() == a.cols()) {
        res.status = SolveStatus::Inconsistent;  // a pivot landed in the constant column
        return res;
    }
    if (pivots.size() < a.cols()) {
        res.status = SolveStatus::Underdetermined;
        return res;
    }
    res.status = SolveStatus::Unique;
    res.solution.assign(a.cols(), 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) res.solution[pivots[i]] = aug.at(i, a.cols());
    return res;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    // rejection sampling keeps the draw unbiased and reproducible
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t v;
    do {
        v = eng_();
    } while (v >= limit);
    return v % bound;
}

}  // namespace znec
