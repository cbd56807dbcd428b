#include "qflab/matrix.hpp"

#include <sstream>

namespace qflab {

ExactMatrix::ExactMatrix(FieldPtr field, size_t rows, size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, field_->zero()) {}

ExactMatrix ExactMatrix::identity(FieldPtr field, size_t n) {
    ExactMatrix m(field, n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, field->one());
    return m;
}

ExactMatrix ExactMatrix::from_rows(FieldPtr field, const std::vector<Vec>& rows) {
    size_t cols = rows.empty() ? 0 : rows.front().size();
    ExactMatrix m(std::move(field), rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error("from_rows: ragged rows");
        for (size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

Vec ExactMatrix::row(size_t i) const {
    Vec v(cols_);
    for (size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
}

Vec ExactMatrix::col(size_t j) const {
    Vec v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
    ExactMatrix r(field_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            if (field_->is_zero(at(i, k))) continue;
            for (size_t j = 0; j < o.cols_; ++j)
                r.set(i, j, field_->add(r.at(i, j), field_->mul(at(i, k), o.at(k, j))));
        }
    return r;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum shape mismatch");
    ExactMatrix r(field_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->add(a_[i], o.a_[i]);
    return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix difference shape mismatch");
    ExactMatrix r(field_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_->sub(a_[i], o.a_[i]);
    return r;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Vec ExactMatrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw Error("matrix apply shape mismatch");
    Vec r(rows_, field_->zero());
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) {
            if (field_->is_zero(at(i, j))) continue;
            r[i] = field_->add(r[i], field_->mul(at(i, j), v[j]));
        }
    return r;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix r(field_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
    return r;
}

std::string ExactMatrix::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < rows_; ++i) {
        os << "[";
        for (size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << field_->str(at(i, j));
        os << "]\n";
    }
    return os.str();
}

RrefResult rref(const ExactMatrix& m) {
    ExactMatrix r = m;
    const Field& k = *m.field();
    std::vector<size_t> pivots;
    size_t lead = 0;
    for (size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
        size_t piv = lead;
        while (piv < r.rows() && k.is_zero(r.at(piv, col))) ++piv;
        if (piv == r.rows()) continue;
        if (piv != lead)
            for (size_t j = 0; j < r.cols(); ++j) {
                Value tmp = r.at(lead, j);
                r.set(lead, j, r.at(piv, j));
                r.set(piv, j, tmp);
            }
        Value inv = k.inv(r.at(lead, col));
        for (size_t j = 0; j < r.cols(); ++j) r.set(lead, j, k.mul(inv, r.at(lead, j)));
        for (size_t i = 0; i < r.rows(); ++i) {
            if (i == lead || k.is_zero(r.at(i, col))) continue;
            Value f = r.at(i, col);
            for (size_t j = 0; j < r.cols(); ++j)
                r.set(i, j, k.sub(r.at(i, j), k.mul(f, r.at(lead, j))));
        }
        pivots.push_back(col);
        ++lead;
    }
    return {std::move(r), pivots.size(), std::move(pivots)};
}

ExactMatrix kernel_basis(const ExactMatrix& m) {
    const Field& k = *m.field();
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : rr.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        Vec v(m.cols(), k.zero());
        v[j] = k.one();
        for (size_t r = 0; r < rr.rank; ++r) v[rr.pivots[r]] = k.neg(rr.reduced.at(r, j));
        basis.push_back(std::move(v));
    }
    return ExactMatrix::from_rows(m.field(), basis);
}

std::optional<Vec> solve(const ExactMatrix& m, const Vec& b) {
    if (b.size() != m.rows()) throw Error("solve shape mismatch");
    const Field& k = *m.field();
    ExactMatrix aug(m.field(), m.rows(), m.cols() + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, m.cols(), b[i]);
    }
    RrefResult rr = rref(aug);
    for (size_t r = 0; r < rr.rank; ++r)
        if (rr.pivots[r] == m.cols()) return std::nullopt; // pivot in the rhs column
    Vec x(m.cols(), k.zero());
    for (size_t r = 0; r < rr.rank; ++r) x[rr.pivots[r]] = rr.reduced.at(r, m.cols());
    return x;
}

ExactMatrix inverse(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw Error("inverse of a non-square matrix");
    const Field& k = *m.field();
    size_t n = m.rows();
    ExactMatrix aug(m.field(), n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, n + i, k.one());
    }
    RrefResult rr = rref(aug);
    for (size_t i = 0; i < n; ++i)
        if (i >= rr.pivots.size() || rr.pivots[i] != i) throw Error("matrix is singular");
    ExactMatrix inv(m.field(), n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv.set(i, j, rr.reduced.at(i, n + j));
    return inv;
}

} // namespace qflab
