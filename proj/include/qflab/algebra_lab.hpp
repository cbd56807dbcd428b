#pragma once

#include "qflab/algebra.hpp"
#include "qflab/check.hpp"

namespace qflab {

// S ⊗_R S for S finite-dimensional over its base field R, with the
// multiplication map down to S and its kernel. Basis is pair-indexed,
// row-major: (i, j) ↦ i·n + j.
struct TensorSquare {
    AlgPtr s;
    AlgPtr t2;
    ExactMatrix mu;       // n × n², the multiplication map e_i⊗e_j ↦ e_i·e_j
    Subspace mult_kernel; // I = ker(mu)

    size_t pair_index(size_t i, size_t j) const { return i * s->dim() + j; }
};

TensorSquare tensor_square(const AlgPtr& s);

// The R-subalgebra of S⊗S spanned by the diagonal {x ⊗ x}: the span of
// e_i⊗e_i and (e_i+e_j)⊗(e_i+e_j) already contains every x⊗x; the closure
// run verifies it is multiplicatively closed.
Subspace delta_subalgebra(const TensorSquare& ts);

// Fixed subspace of the flip e_i⊗e_j ↦ e_j⊗e_i.
Subspace c2_fixed(const TensorSquare& ts);

struct FlatnessReport {
    size_t delta_dim = 0;
    size_t fixed_dim = 0;
    bool equal = false; // exact subspace equality, not just dimensions
};

FlatnessReport flatness_comparison(const TensorSquare& ts);

enum class PresentationTag { direct, i_squared, frobenius };

// The algebra Q = (S⊗S)⊗_Δ S presented as a quotient of the n³-dimensional
// triple tensor space, together with the augmentation to S, its kernel W, the
// canonical section s ↦ class(1⊗1⊗s), and the S-action on the last slot.
struct QPhiResult {
    AlgPtr s;
    AlgPtr q;
    ExactMatrix augmentation;   // dim S × dim Q; verified to be a ring map
    ExactMatrix section;        // dim Q × dim S; augmentation ∘ section = id
    ExactMatrix triple_project; // dim Q × n³ (class map)
    ExactMatrix triple_lift;    // n³ × dim Q (one representative per class)
    Subspace w;                 // ker(augmentation), in Q coordinates
    std::vector<ExactMatrix> s_action; // multiplication by class(1⊗1⊗e_t)
    PresentationTag tag = PresentationTag::direct;
    size_t delta_dim = 0;

    Vec triple_class(size_t i, size_t j, size_t k) const;
    // class of x⊗y⊗z for arbitrary elements of S
    Vec tensor_class(const Vec& x, const Vec& y, const Vec& z) const;
    Vec s_mult(const Vec& s_elt, const Vec& q_elt) const;
    // coordinates of the W-component under Q ≅ S ⊕ W (section splitting)
    Vec w_coords(const Vec& q_elt) const;
};

QPhiResult q_phi(const AlgPtr& s);

// class(s⊗s′⊗1 + s′⊗s⊗1) = class(1⊗1⊗2ss′) over all basis pairs.
NamedCheck equation_star_check(const QPhiResult& q);

// An alternative presentation of Q with explicit comparison maps and the list
// of verified isomorphism properties (mutually inverse, ring maps both ways,
// compatibility with the maps from and to S).
struct ModelResult {
    AlgPtr model;
    ExactMatrix to_model;   // dim model × dim Q
    ExactMatrix from_model; // dim Q × dim model
    ExactMatrix model_augmentation; // dim S × dim model
    std::vector<NamedCheck> checks;
    size_t w_dim = 0; // dim model − dim S
    PresentationTag tag = PresentationTag::direct;

    bool pass() const { return all_pass(checks); }
};

// (S⊗S)/I² with maps s⊗s′⊗t ↦ (st⊗s′ + s⊗s′t)/2 and s⊗s′ ↦ class(s⊗s′⊗1).
// Requires 2 invertible; rejects characteristic 2.
ModelResult i_squared_model(const QPhiResult& q);

// (S⊗S)/J with J generated by st²⊗s′ − s⊗t²s′, maps s⊗s′⊗t ↦ t⊗ss′ and
// s⊗s′ ↦ class(s′⊗1⊗s). Requires characteristic 2.
ModelResult frobenius_model(const QPhiResult& q);

struct EpimorphismReport {
    size_t subring_dim = 0;
    size_t tensor_dim = 0; // dim of S ⊗_R S over the base field
    size_t s_dim = 0;
    bool epi = false; // μ: S⊗_R S → S bijective
};

// φ: R → S for the subalgebra R generated inside S by the given elements
// (the unit is always included). φ is an epimorphism iff μ is bijective.
EpimorphismReport epimorphism_check(const AlgPtr& s, const std::vector<Vec>& subring_gens);

struct ModelIdentityReport {
    std::vector<NamedCheck> checks;
    bool pass() const { return all_pass(checks); }
};

// Identities of the square-zero models: (T+S)(T−S) = T², F(T+S) = F + F′S for
// a fixed sample list (checked against direct evaluation in the model),
// (T−S)^p − (T+S)^p = −2S^p = 0 for characteristic p ∈ {2,3}, and, in
// characteristic 2, (1⊗Tᵢ + Tᵢ⊗1)² = 0 in the square-balanced tensor with n
// variables. `characteristic` selects the coefficient field (0 means ℚ).
ModelIdentityReport exterior_model_check(unsigned n, long characteristic);

} // namespace qflab
