#include "qflab/subspace.hpp"

namespace qflab {

Subspace::Subspace(FieldPtr field, size_t ambient, ExactMatrix basis, std::vector<size_t> pivots)
    : field_(std::move(field)), ambient_(ambient), basis_(std::move(basis)),
      pivots_(std::move(pivots)) {}

Subspace Subspace::from_vectors(FieldPtr field, size_t ambient, const std::vector<Vec>& span) {
    for (const Vec& v : span)
        if (v.size() != ambient) throw Error("spanning vector has wrong length");
    ExactMatrix m = span.empty() ? ExactMatrix(field, 0, ambient)
                                 : ExactMatrix::from_rows(field, span);
    RrefResult rr = rref(m);
    ExactMatrix basis(field, rr.rank, ambient);
    for (size_t i = 0; i < rr.rank; ++i)
        for (size_t j = 0; j < ambient; ++j) basis.set(i, j, rr.reduced.at(i, j));
    return Subspace(std::move(field), ambient, std::move(basis), std::move(rr.pivots));
}

Subspace Subspace::zero_space(FieldPtr field, size_t ambient) {
    return from_vectors(std::move(field), ambient, {});
}

Subspace Subspace::full_space(FieldPtr field, size_t ambient) {
    std::vector<Vec> rows;
    for (size_t i = 0; i < ambient; ++i) {
        Vec v(ambient, field->zero());
        v[i] = field->one();
        rows.push_back(std::move(v));
    }
    return from_vectors(std::move(field), ambient, rows);
}

namespace {
void require_compatible(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient() || a.field()->description() != b.field()->description())
        throw Error("subspaces live in different ambient spaces");
}
} // namespace

Subspace Subspace::sum(const Subspace& o) const {
    require_compatible(*this, o);
    std::vector<Vec> rows;
    for (size_t i = 0; i < dim(); ++i) rows.push_back(basis_vector(i));
    for (size_t i = 0; i < o.dim(); ++i) rows.push_back(o.basis_vector(i));
    return from_vectors(field_, ambient_, rows);
}

Subspace Subspace::intersect(const Subspace& o) const {
    require_compatible(*this, o);
    if (dim() == 0 || o.dim() == 0) return zero_space(field_, ambient_);
    // Left-kernel of the stacked basis: rows (u, w) with u·A + w·B = 0 give
    // intersection vectors u·A.
    std::vector<Vec> stacked;
    for (size_t i = 0; i < dim(); ++i) stacked.push_back(basis_vector(i));
    for (size_t i = 0; i < o.dim(); ++i) stacked.push_back(o.basis_vector(i));
    ExactMatrix c = ExactMatrix::from_rows(field_, stacked);
    ExactMatrix ker = kernel_basis(c.transpose());
    std::vector<Vec> vectors;
    for (size_t r = 0; r < ker.rows(); ++r) {
        Vec x(ambient_, field_->zero());
        for (size_t i = 0; i < dim(); ++i) {
            const Value& coef = ker.at(r, i);
            if (field_->is_zero(coef)) continue;
            for (size_t j = 0; j < ambient_; ++j)
                x[j] = field_->add(x[j], field_->mul(coef, basis_.at(i, j)));
        }
        vectors.push_back(std::move(x));
    }
    return from_vectors(field_, ambient_, vectors);
}

std::optional<Vec> Subspace::coordinates(const Vec& v) const {
    if (v.size() != ambient_) throw Error("vector has wrong length");
    // In an echelon basis the coefficient of row i is just v[pivot_i].
    Vec coeffs(dim(), field_->zero());
    for (size_t i = 0; i < dim(); ++i) coeffs[i] = v[pivots_[i]];
    Vec residue = v;
    for (size_t i = 0; i < dim(); ++i) {
        if (field_->is_zero(coeffs[i])) continue;
        for (size_t j = 0; j < ambient_; ++j)
            residue[j] = field_->sub(residue[j], field_->mul(coeffs[i], basis_.at(i, j)));
    }
    for (const Value& x : residue)
        if (!field_->is_zero(x)) return std::nullopt;
    return coeffs;
}

bool Subspace::contains_vector(const Vec& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& o) const {
    require_compatible(*this, o);
    for (size_t i = 0; i < o.dim(); ++i)
        if (!contains_vector(o.basis_vector(i))) return false;
    return true;
}

bool Subspace::operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && field_->description() == o.field_->description() &&
           basis_ == o.basis_;
}

size_t Subspace::quotient_dim_mod(const Subspace& o) const {
    return dim() - intersect(o).dim();
}

QuotientSpace quotient_space(const FieldPtr& field, size_t ambient, const Subspace& u) {
    if (u.ambient() != ambient) throw Error("subspace does not live in the given ambient space");
    const Field& k = *field;
    std::vector<bool> is_pivot(ambient, false);
    for (size_t p : u.pivots()) is_pivot[p] = true;
    std::vector<size_t> free_cols;
    for (size_t j = 0; j < ambient; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);

    size_t qdim = free_cols.size();
    ExactMatrix project(field, qdim, ambient);
    // Reducing e_j by the echelon basis leaves: e_j itself for free j, and
    // -row_i restricted to free columns when j is the i-th pivot.
    for (size_t r = 0; r < qdim; ++r) project.set(r, free_cols[r], k.one());
    for (size_t i = 0; i < u.dim(); ++i)
        for (size_t r = 0; r < qdim; ++r)
            project.set(r, u.pivots()[i], k.neg(u.basis().at(i, free_cols[r])));

    ExactMatrix lift(field, ambient, qdim);
    for (size_t r = 0; r < qdim; ++r) lift.set(free_cols[r], r, k.one());
    return {qdim, std::move(project), std::move(lift)};
}

} // namespace qflab
