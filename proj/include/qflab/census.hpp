#pragma once

#include <cstdint>
#include <optional>

#include "qflab/algebra_lab.hpp"
#include "qflab/poly.hpp"
#include "qflab/quad.hpp"

namespace qflab {

// Census of the quadratic maps S^rank → S (rank 1 or 2) for a finite algebra
// S whose base field is its prime field, with a designated scaling subring
// R ⊆ S: the smallest subring containing 1 and the listed generators,
// materialized by closing under addition and multiplication.
//
// The "relative" family collects the maps q with q(λx) = λ²q(x) for every
// λ ∈ S whose polarization pol(x, y) = q(x+y) − q(x) − q(y) is biadditive and
// R-bilinear; the "absolute" family additionally demands S-bilinearity.
//
// Counting works on the lossless finite encoding of such a map: its values
// u_i = q(b_i) on a prime-field basis b_1 … b_μ of S^rank together with the
// polarizations p_ij = pol(b_i, b_j) for i < j. Biadditivity forces
// q(Σ c_i b_i) = Σ c_i² u_i + Σ_{i<j} c_i c_j p_ij once pol(b_i, b_i) = 2u_i,
// which the λ = 2 scaling instance forces; every remaining axiom is a linear
// condition on (u, p) over the prime field, so each family is the kernel of a
// stacked condition matrix and its size is a power of p.
struct CensusResult {
    std::string carrier;              // rendering of S, R, and M = S^rank
    long prime = 0;                   // prime-field characteristic
    std::uint64_t count_relative = 0; // |Quad_{S/R}(M, S)|
    std::uint64_t count_absolute = 0; // |Quad_S(M, S)|
    size_t dim_relative = 0;          // log_p of count_relative
    size_t dim_absolute = 0;          // log_p of count_absolute

    // Kernel-basis maps of the relative family that fail S-bilinearity, in
    // deterministic basis order; empty exactly when the two families agree.
    std::vector<QuadraticMap> witnesses;

    size_t replayed = 0;       // materialized maps re-verified through axiom_check
    bool replay_clean = false; // every replay passed its exhaustive checks
};

// Runs both censuses on S^rank and re-verifies a deterministic prefix of the
// counted maps through the public axiom checker in exhaustive mode: the first
// min(count, replay_cap) maps of the selected family, enumerated by base-p
// counters over the kernel basis. Relative maps replay square-scaling and
// R-bilinearity; absolute maps (relative = false) replay S-bilinearity too.
// Biadditivity holds for every encoded map by construction.
//
// Errors: rank outside {1, 2}, a base field that is not the prime field, or a
// constraint matrix / materialized family larger than the built-in guards.
CensusResult enumerate_quads(const AlgPtr& s, const std::vector<Vec>& r_gens, size_t rank,
                             bool relative, size_t replay_cap = 1024);

// Raw oracle for the constraint-based counts on the smallest carriers: sweeps
// every pointed value table q: S^rank → S (|S|^(|S^rank|−1) candidates, guard
// exceeded above `guard`) and filters by the public axiom checker, running
// square-scaling, biadditivity, and R- or S-bilinearity exhaustively per
// table. Candidate indices partition round-robin across workers; the counts
// are summed and the reported survivor is the globally smallest index, so the
// result does not depend on the worker count.
struct RawCensus {
    std::uint64_t candidates = 0;              // value tables swept
    std::uint64_t count = 0;                   // tables passing all checks
    std::optional<std::uint64_t> first_index;  // smallest surviving table index
};

RawCensus raw_census(const AlgPtr& s, const std::vector<Vec>& r_gens, size_t rank,
                     bool relative, std::uint64_t guard = std::uint64_t{1} << 20,
                     unsigned workers = 1);

// Cross-module audit of the splitting
//   Quad_{S/R}(S², S) ≅ Quad_S(S², S) ⊕ Hom_S(W, S)
// on prime-field dimensions: the two census dimensions on the left and
// middle, and the dimension of the S-linear functionals on W = ker(Q → S) on
// the right, with Q built for the inclusion of the prime field into S. The
// generators must therefore generate the prime field (an empty list does).
struct DimensionAudit {
    std::string carrier;
    size_t dim_relative = 0;
    size_t dim_absolute = 0;
    size_t dim_hom_w = 0;
    bool consistent = false; // dim_relative == dim_absolute + dim_hom_w
};

DimensionAudit dimension_audit(const AlgPtr& s, const std::vector<Vec>& r_gens);

// Monomial ideal membership by divisibility: m lies in the ideal generated by
// the given monomials iff some generator divides it exponent-wise. Exponent
// vectors of different lengths are compared with trailing zeros.
bool monomial_ideal_membership(const Monomial& m, const std::vector<Monomial>& generators);

// Mechanical verification of the square-zero counterexample over
// R = ℤ[X, Y, Z] with I its augmentation ideal and S = R ⊕ I: the element
// XY ⊗ Z of I ⊗_R I is fixed by the flip but is not a combination of diagonal
// elements f ⊗ f. Three independent checks:
//   (a) the multiplication image f·f of every diagonal element lies in
//       (X², Y², Z²) mod 2, swept over all pointed f of degree ≤ 2 in
//       𝔽₂[X, Y, Z] — so the image of the diagonal span lies in that ideal;
//   (b) XYZ, the multiplication image of XY ⊗ Z, is not in (X², Y², Z²);
//   (c) XY ⊗ Z = X ⊗ YZ and XY ⊗ Z = Z ⊗ XY in I ⊗_R I, each equality
//       replayed as a chain of single-factor moves a·v ⊗ b = a ⊗ v·b whose
//       sides are re-multiplied and re-checked to stay inside I.
struct SquareZeroReport {
    size_t diagonal_sample_size = 0;        // pointed polynomials swept in (a)
    bool diagonal_squares_in_ideal = false; // (a)
    bool xyz_in_ideal = true;               // (b): must come out false
    std::vector<std::string> flip_chain;    // rendered moves of (c)
    bool flip_chain_valid = false;          // (c)

    bool pass() const { return diagonal_squares_in_ideal && !xyz_in_ideal && flip_chain_valid; }
};

SquareZeroReport squarezero_counterexample_check();

} // namespace qflab
