#pragma once

#include <optional>
#include <vector>

#include "qflab/ring.hpp"

namespace qflab {

// Dense matrix over an exact field, row-major. Everything in scope is small
// (dimensions at most a few hundred), so no sparsity games.
class ExactMatrix {
public:
    ExactMatrix(FieldPtr field, size_t rows, size_t cols);
    static ExactMatrix identity(FieldPtr field, size_t n);
    static ExactMatrix from_rows(FieldPtr field, const std::vector<Vec>& rows);

    const FieldPtr& field() const { return field_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    const Value& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
    void set(size_t i, size_t j, Value v) { a_[i * cols_ + j] = std::move(v); }

    Vec row(size_t i) const;
    Vec col(size_t j) const;

    ExactMatrix operator*(const ExactMatrix& o) const;
    ExactMatrix operator+(const ExactMatrix& o) const;
    ExactMatrix operator-(const ExactMatrix& o) const;
    bool operator==(const ExactMatrix& o) const;
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    Vec apply(const Vec& v) const; // matrix times column vector
    ExactMatrix transpose() const;

    std::string str() const;

private:
    FieldPtr field_;
    size_t rows_, cols_;
    std::vector<Value> a_;
};

struct RrefResult {
    ExactMatrix reduced;
    size_t rank;
    std::vector<size_t> pivots; // pivot column per nonzero row
};

// Canonical reduced row-echelon form (Gauss-Jordan, exact).
RrefResult rref(const ExactMatrix& m);

// Basis of {x : m·x = 0}, one basis vector per row, in the canonical
// free-column order.
ExactMatrix kernel_basis(const ExactMatrix& m);

// One solution of m·x = b, if any.
std::optional<Vec> solve(const ExactMatrix& m, const Vec& b);

ExactMatrix inverse(const ExactMatrix& m); // throws on singular input

} // namespace qflab
