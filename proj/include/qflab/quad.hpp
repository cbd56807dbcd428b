#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qflab/check.hpp"
#include "qflab/kaehler.hpp"
#include "qflab/ratfunc.hpp"

namespace qflab {

// An abelian group carrying an action of a scalar ring S, with a distinguished
// base subring R inside S. Elements and scalars are Values in whatever
// canonical representation the concrete module chooses, so structural equality
// of Values is equality of elements.
//
// Finite modules (and finite scalar rings) expose a fixed enumeration with
// element(0) == zero(); exhaustive verification sweeps these enumerations.
// Coordinate modules over a base field additionally expose bases, which the
// basis verification mode uses. Base-ring scalars are handed out already
// embedded into S, so `scale` is the only action needed.
class QuadModule {
public:
    virtual ~QuadModule() = default;

    virtual std::string description() const = 0;
    // Characteristic of the scalar ring.
    virtual long characteristic() const = 0;

    virtual Value zero() const = 0;
    virtual Value add(const Value& a, const Value& b) const = 0;
    virtual Value neg(const Value& a) const = 0;
    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }
    virtual std::string str(const Value& a) const = 0;

    virtual std::optional<std::uint64_t> size() const { return std::nullopt; }
    virtual Value element(std::uint64_t index) const;

    virtual std::string scalar_description() const = 0;
    virtual Value scale(const Value& s, const Value& x) const = 0;
    virtual Value scalar_mul(const Value& a, const Value& b) const = 0;
    virtual std::string scalar_str(const Value& s) const = 0;
    virtual std::optional<std::uint64_t> scalar_count() const { return std::nullopt; }
    virtual Value scalar_element(std::uint64_t index) const;
    virtual std::optional<std::uint64_t> base_count() const { return std::nullopt; }
    // The index-th base-ring scalar, embedded into S.
    virtual Value base_element(std::uint64_t index) const;

    // Base-field basis of the module / of S over R / of R over itself; empty
    // when no finite basis is available.
    virtual std::vector<Value> basis() const { return {}; }
    virtual std::vector<Value> scalar_basis() const { return {}; }
    virtual std::vector<Value> base_scalar_basis() const { return {}; }

    // Whether scaling an enumerated element by an enumerated scalar stays in
    // the enumerated set. Bounded-degree polynomial carriers say no, and the
    // exhaustive engine then evaluates scaled inputs directly instead of
    // through index tables.
    virtual bool scale_closed() const { return true; }

    // Direct-sum access; only pair modules implement these.
    virtual bool is_pair() const { return false; }
    virtual std::shared_ptr<const QuadModule> pair_component(size_t which) const;
    virtual Value pair_of(const Value& a, const Value& b) const;
    virtual Value pair_proj(const Value& x, size_t which) const;
};

using ModulePtr = std::shared_ptr<const QuadModule>;

// S as a module over itself (elements are coordinate vectors of S wrapped as
// Values; scalars are the same vectors).
ModulePtr algebra_module(const AlgPtr& s);

// A coordinate space over the base field of S with an explicit S-action, one
// matrix per basis element of S.
ModulePtr action_module(const AlgPtr& s, const ModuleAction& act, const std::string& what);

// Q as a module over S via multiplication by class(1⊗1⊗s).
ModulePtr q_phi_module(const QPhiResult& q);

// K(vars) as a module over itself; the base subring is the constant field.
ModulePtr function_field_module(const FieldPtr& function_field);

// The additive group of polynomials whose degree in every variable is at most
// `degree_cap`, over a finite coefficient field: a finite subgroup of the
// polynomial ring, closed under addition but not under scaling (products may
// leave the enumerated set; arithmetic stays exact in the ambient ring).
// Scalars are enumerated from the same bounded set.
ModulePtr bounded_poly_module(const FieldPtr& coeff, const std::vector<std::string>& vars,
                              unsigned degree_cap);

// Explicit direct sum A ⊕ B of two modules over the same scalar ring.
ModulePtr pair_module(const ModulePtr& a, const ModulePtr& b);

// R^rank for a plain (finite) ring R acting on itself; rank 0 is the zero
// module.
ModulePtr free_ring_module(const RingPtr& ring, size_t rank);

// A quadratic map q: M → N between modules over the same scalar ring. The
// constructor verifies q(0) = 0. `bilinear_polarization` certifies that the
// construction makes pol_q(x, y) = q(x+y) − q(x) − q(y) bilinear over the base
// field by design (true for all the matrix/derivative-built forms below);
// the basis verification mode is only sound with that certificate.
class QuadraticMap {
public:
    QuadraticMap(ModulePtr domain, ModulePtr target, std::string what,
                 std::function<Value(const Value&)> eval, bool bilinear_polarization = false);

    const ModulePtr& domain() const { return domain_; }
    const ModulePtr& target() const { return target_; }
    const std::string& description() const { return what_; }
    bool bilinear_polarization() const { return bilinear_pol_; }

    Value eval(const Value& x) const { return eval_(x); }
    Value operator()(const Value& x) const { return eval_(x); }

    // pol_q(x, y) = q(x+y) − q(x) − q(y); symmetric in x and y.
    Value polarize(const Value& x, const Value& y) const;

private:
    ModulePtr domain_;
    ModulePtr target_;
    std::string what_;
    std::function<Value(const Value&)> eval_;
    bool bilinear_pol_;
};

enum class Axiom { square_scaling, biadditivity, r_bilinearity, s_bilinearity };
enum class AxiomMode { exhaustive, basis, sampled };
enum class Verdict { pass, fail, no_counterexample_found };

std::string to_string(Axiom a);
std::string to_string(AxiomMode m);
std::string to_string(Verdict v);

// Outcome of one axiom verification. A fail always carries a witness with
// both evaluated sides. An exhaustive or basis pass is a proof; a clean
// sampled sweep is only reported as no-counterexample-found.
struct AxiomReport {
    Axiom axiom = Axiom::square_scaling;
    AxiomMode mode = AxiomMode::exhaustive;
    Verdict verdict = Verdict::fail;
    std::string witness;       // empty unless verdict == fail
    std::uint64_t cases = 0;   // tuples inspected

    bool ok() const { return verdict != Verdict::fail; }
};

// Declared inputs for the sampled mode: domain elements, S-scalars, and
// base-ring scalars (embedded into S). Iteration order is the declaration
// order, and the first violating tuple wins.
struct SamplePlan {
    std::vector<Value> vectors;
    std::vector<Value> scalars;
    std::vector<Value> base_scalars;
};

// Verifies one axiom of a quadratic map:
//   square-scaling   q(λx) = λ²q(x)           (λ over S)
//   biadditivity     pol(x+y, z) = pol(x, z) + pol(y, z)
//   R-bilinearity    pol(rx, y) = r·pol(x, y) (r over the base subring)
//   S-bilinearity    pol(sx, y) = s·pol(x, y) (s over S)
// Exhaustive mode sweeps the full enumerations (finite domain and finite
// scalar set required; resource guards throw GuardExceeded). Basis mode
// requires the bilinear-polarization certificate and finite bases, and checks
// the linear axioms on basis tuples. Sampled mode sweeps the declared plan.
// Witnesses are deterministic: sweeps run in enumeration/declaration order
// (scalar outermost, then each vector slot) and the first violation is kept.
AxiomReport axiom_check(const QuadraticMap& q, Axiom axiom, AxiomMode mode,
                        const SamplePlan& plan = {});

// q(x) = Σ_{i≤j} c_{ij} x_i x_j on S^rank (rank 1 or 2), with the coefficients
// given in row-major upper-triangular order (rank 2: c00, c01, c11). The
// domain is algebra_module(s) for rank 1 and the pair module S ⊕ S for rank 2.
QuadraticMap gram_form(const AlgPtr& s, size_t rank, const std::vector<Vec>& coeffs);

// q_d(F, G) = d(F)·G − F·d(G) on S ⊕ S, for a validated derivation d of the
// presented algebra with values in the given S-module. Throws on an invalid
// derivation.
QuadraticMap derivation_form(const PresentedAlgebra& a, const ModuleAction& target,
                             const std::vector<Vec>& images, const std::string& target_what);

// The same cross form for d = d/d(var) on a rational function field:
// q(F, G) = F′G − FG′.
QuadraticMap derivative_pair_form(const FieldPtr& function_field, const std::string& var);

// The documented sample list for derivative cross forms on K(var)²: vectors
// (1,0), (0,1), (var,0), (0,var), (var,1), (1,var), (var²,var+1);
// S-scalars var, var+1, var²; base scalars 1, 2.
SamplePlan derivative_pair_samples(const FieldPtr& function_field, const std::string& var);

// q(F, G) = ∂ᵏ(F·G)/∂v_{i₁}…∂v_{i_k} for distinct index variables, in
// characteristic 2 (square-scaling relies on ∂(s²h) = s²∂h there). The domain
// must be a pair module whose slots are polynomial or rational-function
// values; k = 0 gives the plain product (F, G) ↦ FG.
QuadraticMap higher_derivative_form(const ModulePtr& pair_domain, const ModulePtr& target,
                                    const std::vector<std::string>& index_vars);

// q(x, y) = f(W-component of class(x⊗y⊗1)) on S ⊕ S, for an S-linear
// functional f: W → S given as a dim S × dim W matrix on W coordinates.
// Throws on a dimension mismatch or if f fails S-linearity.
QuadraticMap exotic_form(const QPhiResult& q, const ExactMatrix& functional);

// (x, y) ↦ class(x⊗y⊗1) from S ⊕ S into Q.
QuadraticMap universal_cross_map(const QPhiResult& q);

// Base-field basis of the S-linear maps W → S, each as a dim S × dim W matrix
// acting on W coordinates.
std::vector<ExactMatrix> w_functional_basis(const QPhiResult& q);

// An explicit value table q(element(i)) = values[i] on a finite domain.
// Requires values[0] = 0 (the enumeration starts at the zero element).
QuadraticMap table_form(const ModulePtr& domain, const ModulePtr& target,
                        std::vector<Value> values);

// Restrictions and cross term of a quadratic map on a direct sum:
// q(m ⊕ m′) = first(m) + cross(m, m′) + second(m′), with
// cross(m, m′) = pol_q((m, 0), (0, m′)). The reconstruction identity is
// verified exhaustively on finite domains, else on the supplied sample pairs.
struct SplitForm {
    QuadraticMap first;
    QuadraticMap second;
    std::function<Value(const Value&, const Value&)> cross;
    NamedCheck reconstruction;
};

SplitForm split_form(const QuadraticMap& q,
                     const std::vector<std::pair<Value, Value>>& samples = {});

// Evaluation matrix of the 2ⁿ higher-derivative forms q_I, I ⊆ {1..n}, on the
// fixed input pairs (Π_{i∈J} T_i, 1), J ⊆ {1..n}, over F₂(T₁..T_n); rows and
// columns run through subsets in binary-counter order. The forms are linearly
// independent over the function field iff the matrix is invertible.
struct IndependenceReport {
    unsigned n;
    ExactMatrix matrix;
    bool invertible;
};

IndependenceReport higher_derivative_independence(unsigned n);

// The group of quadratic maps M → N for M = coker(d₁: R^rank1 → R^rank0) over
// a finite ring R, computed two ways: as the kernel of
//   Quad(F₀, N) → Quad(F₁⊕F₀, N),  q ↦ (f₁, f₀) ↦ q(f₀ + d₁f₁) − q(f₀),
// with Quad(F₀, N) enumerated exhaustively by value tables, and directly as
// the quadratic maps on the coset module F₀/im(d₁). `d1_columns[j]` is the
// image of the j-th basis vector of F₁ (a length-rank0 vector over R).
// Candidate-table counts above `guard` throw GuardExceeded.
struct ResolutionReport {
    ModulePtr f0;
    ModulePtr presented;                             // F₀ / im(d₁)
    std::vector<std::vector<Value>> kernel_tables;   // tables on f0's enumeration
    std::vector<std::vector<Value>> direct_tables;   // tables on presented's enumeration
    bool agree = false; // the kernel tables, pushed down to M, equal the direct tables

    std::uint64_t via_kernel() const { return kernel_tables.size(); }
    std::uint64_t via_direct() const { return direct_tables.size(); }
};

ResolutionReport resolution_quad(const RingPtr& ring, size_t rank0, size_t rank1,
                                 const std::vector<Vec>& d1_columns, const ModulePtr& target,
                                 std::uint64_t guard = std::uint64_t{1} << 20);

} // namespace qflab
