#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qflab/extfield.hpp"
#include "qflab/poly.hpp"
#include "qflab/subspace.hpp"

namespace qflab {

// Commutative unital algebra of finite dimension over an exact base field,
// given by structure constants. Elements are coordinate vectors (Vec) in the
// fixed basis. Commutativity, associativity on basis triples, and the unit law
// are verified at construction — a failed check is a hard error, since every
// downstream object trusts the table.
class FiniteDimAlgebra {
public:
    FiniteDimAlgebra(FieldPtr base, std::vector<std::string> labels,
                     std::vector<Vec> basis_products, Vec unit);

    const FieldPtr& base() const { return base_; }
    size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Vec& unit() const { return unit_; }

    const Vec& basis_product(size_t i, size_t j) const { return table_[i * dim() + j]; }
    Vec basis_vector(size_t i) const;
    Vec zero() const { return Vec(dim(), base_->zero()); }

    Vec add(const Vec& a, const Vec& b) const;
    Vec sub(const Vec& a, const Vec& b) const;
    Vec neg(const Vec& a) const;
    Vec scale(const Value& c, const Vec& a) const;
    Vec mul(const Vec& a, const Vec& b) const;
    Vec pow(const Vec& a, unsigned n) const;
    bool is_zero(const Vec& a) const;

    // Evaluate a polynomial with base-field coefficients at algebra elements.
    Vec eval_poly(const MultiPoly& p, const std::vector<Vec>& point) const;

    // Matrix of multiplication by a (the regular representation).
    ExactMatrix mult_matrix(const Vec& a) const;

    std::string str(const Vec& a) const;

private:
    FieldPtr base_;
    std::vector<std::string> labels_;
    std::vector<Vec> table_; // row-major (i, j) -> coordinates of e_i * e_j
    Vec unit_;
};

using AlgPtr = std::shared_ptr<const FiniteDimAlgebra>;

AlgPtr make_algebra(FieldPtr base, std::vector<std::string> labels,
                    std::vector<Vec> basis_products, Vec unit);

// Base-field algebra morphisms; unit preservation and multiplicativity on all
// basis pairs are verified at construction.
class AlgebraMorphism {
public:
    AlgebraMorphism(AlgPtr source, AlgPtr target, ExactMatrix matrix);

    const AlgPtr& source() const { return source_; }
    const AlgPtr& target() const { return target_; }
    const ExactMatrix& matrix() const { return matrix_; }
    Vec apply(const Vec& v) const { return matrix_.apply(v); }

private:
    AlgPtr source_;
    AlgPtr target_;
    ExactMatrix matrix_;
};

// Smallest subspace containing the generators and closed under the algebra's
// multiplication. Each round multiplies generators by the current basis and
// re-spans; a fixed point is closed under all products (any product of
// generator words reduces to generator-times-previous-word). Closure of the
// result is re-verified on all basis pairs before returning.
Subspace mult_closure(const FiniteDimAlgebra& alg, const std::vector<Vec>& generators);

// S as an algebra over its base field, basis = powers of the generator.
AlgPtr algebra_from_extension(const ExtFieldPtr& ext);

// The base field as a one-dimensional algebra over itself.
AlgPtr trivial_algebra(FieldPtr base);

// K[T]/(T^d), basis 1, T, ..., T^(d-1).
AlgPtr truncated_poly_algebra(FieldPtr base, const std::string& var, unsigned d);

} // namespace qflab
