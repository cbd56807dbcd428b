#pragma once

#include "qflab/matrix.hpp"

namespace qflab {

// Subspace of a coordinate space, held as the unique reduced row-echelon
// basis; equality of subspaces is structural equality of those bases.
class Subspace {
public:
    static Subspace from_vectors(FieldPtr field, size_t ambient, const std::vector<Vec>& span);
    static Subspace zero_space(FieldPtr field, size_t ambient);
    static Subspace full_space(FieldPtr field, size_t ambient);

    const FieldPtr& field() const { return field_; }
    size_t ambient() const { return ambient_; }
    size_t dim() const { return basis_.rows(); }
    const ExactMatrix& basis() const { return basis_; }
    Vec basis_vector(size_t i) const { return basis_.row(i); }
    const std::vector<size_t>& pivots() const { return pivots_; }

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    bool contains_vector(const Vec& v) const;
    bool contains(const Subspace& o) const;
    bool operator==(const Subspace& o) const;
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    // Coefficients of v in the echelon basis, if v belongs to the subspace.
    std::optional<Vec> coordinates(const Vec& v) const;

    // dim(this) - dim(this ∩ o).
    size_t quotient_dim_mod(const Subspace& o) const;

private:
    Subspace(FieldPtr field, size_t ambient, ExactMatrix basis, std::vector<size_t> pivots);

    FieldPtr field_;
    size_t ambient_;
    ExactMatrix basis_;
    std::vector<size_t> pivots_;
};

// Quotient of the ambient coordinate space by u, realized by an explicit
// projection matrix (dim × ambient) and a lifting section (ambient × dim)
// with project∘lift = identity and kernel(project) = u.
struct QuotientSpace {
    size_t dim;
    ExactMatrix project;
    ExactMatrix lift;
};

QuotientSpace quotient_space(const FieldPtr& field, size_t ambient, const Subspace& u);

} // namespace qflab
