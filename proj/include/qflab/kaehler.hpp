#pragma once

#include "qflab/algebra_lab.hpp"

namespace qflab {

// A finite-dimensional algebra together with a polynomial presentation
// base[x_1..x_n]/(f_1..f_m): the named generators, their images in the
// realization, and a polynomial representative for every basis vector.
// Construction verifies that each relation evaluates to zero and that each
// representative evaluates to its basis vector.
struct PresentedAlgebra {
    FieldPtr base;
    std::vector<std::string> generators;
    std::vector<MultiPoly> relations;
    AlgPtr realization;
    std::vector<Vec> generator_images; // one per generator
    std::vector<MultiPoly> basis_reps; // one per realization basis vector
};

PresentedAlgebra make_presented_algebra(FieldPtr base, std::vector<std::string> generators,
                                        std::vector<MultiPoly> relations, AlgPtr realization,
                                        std::vector<Vec> generator_images,
                                        std::vector<MultiPoly> basis_reps);

// K[x]/(modulus) with the power basis presentation.
PresentedAlgebra presented_from_extension(const ExtFieldPtr& ext);

// K[T]/(T^d), d >= 2, with the power basis presentation.
PresentedAlgebra presented_truncated(FieldPtr base, const std::string& var, unsigned d);

// An S-module structure on a base-field coordinate space: one action matrix
// per basis element of S.
struct ModuleAction {
    size_t dim = 0;
    std::vector<ExactMatrix> action;
};

// S acting on itself by multiplication.
ModuleAction regular_module(const AlgPtr& s);

// Ω_{S/base} = S^n / (rows s·Jacobian), as a base-field quotient space with
// the universal derivation d(e_c) = Σ_j ∂rep_c/∂x_j · dx_j and the induced
// S-action. Ambient coordinates are slot-major: (j, c) ↦ j·dim(S) + c means
// the e_c component of the dx_j slot.
struct KaehlerModule {
    PresentedAlgebra a;
    size_t dim = 0; // over the base field
    bool zero = true;
    QuotientSpace quotient;            // of S^n by the Jacobian row span
    ExactMatrix d_matrix;              // dim Ω × dim S
    std::vector<ExactMatrix> s_action; // on Ω coordinates, per S basis element

    ModuleAction module() const { return {dim, s_action}; }
};

KaehlerModule kaehler_module(const PresentedAlgebra& a);

// Validity of a candidate derivation given by generator images in an
// S-module: valid iff Σ_j (∂f_i/∂x_j)·image_j = 0 for every relation f_i.
// An invalid candidate is reported with the violated relation as witness,
// not as an exception.
struct DerivationReport {
    bool valid = false;
    std::string witness; // empty when valid
};

DerivationReport derivation_check(const PresentedAlgebra& a, const ModuleAction& target,
                                  const std::vector<Vec>& images);

// The full derivation S → target as a matrix (column c = d(e_c)); throws on
// an invalid candidate and verifies the Leibniz rule on all basis pairs.
ExactMatrix derivation_matrix(const PresentedAlgebra& a, const ModuleAction& target,
                              const std::vector<Vec>& images);

// The map on Q classes s⊗s′⊗t ↦ t(d(s)·s′ − s·d(s′)) into Ω, restricted to
// W. Surjectivity is expected in every scenario; the kernel dimension is
// reported, never assumed (the map has kernel in characteristic 2 in
// general).
struct WToOmegaReport {
    ExactMatrix on_q; // dim Ω × dim Q
    ExactMatrix on_w; // dim Ω × dim W
    bool surjective = false;
    size_t kernel_dim = 0;
};

WToOmegaReport w_to_omega(const QPhiResult& q, const KaehlerModule& omega);

} // namespace qflab
