#include "qflab/scenario.hpp"

#include "qflab/algebra_lab.hpp"
#include "qflab/census.hpp"
#include "qflab/error.hpp"
#include "qflab/extfield.hpp"
#include "qflab/kaehler.hpp"
#include "qflab/quad.hpp"
#include "qflab/ratfunc.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qflab {

namespace {

using ojson = nlohmann::ordered_json;

long param_or(const ScenarioParams& params, const std::string& key, long fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

// Collects assertions; every helper renders expected and computed values the
// same way, so equality of the strings is equality of the facts.
class AssertionSink {
public:
    std::vector<Assertion> take() && { return std::move(list_); }

    void num(const std::string& name, const std::string& op, std::uint64_t expected,
             std::uint64_t computed) {
        push({name, op, std::to_string(expected), std::to_string(computed), expected == computed,
              ""});
    }

    void text(const std::string& name, const std::string& op, const std::string& expected,
              const std::string& computed) {
        push({name, op, expected, computed, expected == computed, ""});
    }

    void flag(const std::string& name, const std::string& op, bool expected, bool computed,
              const std::string& witness_on_fail = "") {
        Assertion a{name,     op, expected ? "true" : "false", computed ? "true" : "false",
                    expected == computed, ""};
        if (!a.pass) a.witness = witness_on_fail;
        push(std::move(a));
    }

    void check(const std::string& op, const NamedCheck& c, const std::string& prefix = "") {
        Assertion a{prefix + c.name, op, "pass", c.pass ? "pass" : "fail", c.pass, ""};
        if (!c.pass) a.witness = c.details;
        push(std::move(a));
    }

    void checks(const std::string& op, const std::vector<NamedCheck>& cs,
                const std::string& prefix = "") {
        for (const NamedCheck& c : cs) check(op, c, prefix);
    }

    // Values rendered through the module they live in; passing means the
    // values are equal, not merely their renderings.
    void value(const std::string& name, const std::string& op, const ModulePtr& space,
               const Value& expected, const Value& computed) {
        Assertion a{name, op, space->str(expected), space->str(computed), expected == computed,
                    ""};
        push(std::move(a));
    }

    // Runs one axiom verification. `expected_witness` freezes the whole
    // counterexample of an expected failure into the comparison; when it is
    // empty only the verdicts are compared. `expected_cases` freezes the
    // sweep size (useful for the documented sample plans).
    void axiom(const std::string& name, const QuadraticMap& q, Axiom ax, AxiomMode mode,
               Verdict expected, const SamplePlan& plan = {},
               const std::string& expected_witness = "",
               std::optional<std::uint64_t> expected_cases = std::nullopt) {
        AxiomReport r = axiom_check(q, ax, mode, plan);
        const bool frozen = expected == Verdict::fail && !expected_witness.empty();
        auto render = [&](Verdict v, const std::string& witness,
                          std::optional<std::uint64_t> cases) {
            std::string s = to_string(v);
            if (v == Verdict::fail && frozen) s += ": " + witness;
            if (cases) s += " (" + std::to_string(*cases) + " cases)";
            return s;
        };
        std::string exp = render(expected, expected_witness, expected_cases);
        std::string got = render(r.verdict, r.witness,
                                 expected_cases ? std::optional<std::uint64_t>(r.cases)
                                                : std::nullopt);
        Assertion a{name, "axiom_check", exp, got, exp == got, ""};
        if (!a.pass) a.witness = r.witness;
        push(std::move(a));
    }

private:
    void push(Assertion a) { list_.push_back(std::move(a)); }
    std::vector<Assertion> list_;
};

// ---------------------------------------------------------------- carriers

ExtFieldPtr f4_extension() {
    FieldPtr k = make_prime_field(2);
    return make_extension_field(k, "g", {k->one(), k->one(), k->one()});
}

ExtFieldPtr f8_extension() {
    FieldPtr k = make_prime_field(2);
    return make_extension_field(k, "g", {k->one(), k->one(), k->zero(), k->one()});
}

ExtFieldPtr f9_extension() {
    FieldPtr k = make_prime_field(3);
    return make_extension_field(k, "g", {k->one(), k->zero(), k->one()});
}

ExtFieldPtr gaussian_extension() {
    FieldPtr q = make_rationals();
    return make_extension_field(q, "i", {q->one(), q->zero(), q->one()});
}

// ------------------------------------------------------- shared sub-blocks

void qphi_block(AssertionSink& sink, const QPhiResult& q, size_t q_dim, size_t w_dim) {
    sink.num("q-dimension", "q_phi", q_dim, q.q->dim());
    sink.num("w-dimension", "q_phi", w_dim, q.w.dim());
    sink.check("equation_star_check", equation_star_check(q));
}

void flat_block(AssertionSink& sink, const AlgPtr& s, size_t dim) {
    FlatnessReport rep = flatness_comparison(tensor_square(s));
    sink.num("delta-dimension", "flatness_comparison", dim, rep.delta_dim);
    sink.num("flip-fixed-dimension", "flatness_comparison", dim, rep.fixed_dim);
    sink.flag("delta-equals-flip-fixed", "flatness_comparison", true, rep.equal);
}

void omega_block(AssertionSink& sink, const PresentedAlgebra& a, const QPhiResult& q,
                 size_t omega_dim, size_t kernel_dim) {
    KaehlerModule omega = kaehler_module(a);
    sink.num("omega-dimension", "kaehler_module", omega_dim, omega.dim);
    WToOmegaReport rep = w_to_omega(q, omega);
    sink.flag("w-to-omega-surjective", "w_to_omega", true, rep.surjective);
    sink.num("w-to-omega-kernel", "w_to_omega", kernel_dim, rep.kernel_dim);
}

CensusResult census_block(AssertionSink& sink, const AlgPtr& s, std::uint64_t relative,
                          std::uint64_t absolute, std::uint64_t exotic_witnesses,
                          const std::string& carrier, size_t replay_cap) {
    CensusResult c = enumerate_quads(s, {}, 2, true, replay_cap);
    sink.text("census-carrier", "enumerate_quads", carrier, c.carrier);
    sink.num("census-count-relative", "enumerate_quads", relative, c.count_relative);
    sink.num("census-count-absolute", "enumerate_quads", absolute, c.count_absolute);
    sink.num("census-exotic-witnesses", "enumerate_quads", exotic_witnesses,
             c.witnesses.size());
    sink.flag("census-replay-clean", "enumerate_quads", true, c.replay_clean);
    return c;
}

DimensionAudit audit_block(AssertionSink& sink, const AlgPtr& s, const std::string& split) {
    DimensionAudit audit = dimension_audit(s, {});
    std::string got = std::to_string(audit.dim_relative) + " = " +
                      std::to_string(audit.dim_absolute) + " + " +
                      std::to_string(audit.dim_hom_w);
    sink.text("dimension-split", "dimension_audit", split, got);
    sink.flag("dimension-split-consistent", "dimension_audit", true, audit.consistent);
    return audit;
}

void epi_block(AssertionSink& sink, const AlgPtr& s, size_t tensor_dim) {
    EpimorphismReport rep = epimorphism_check(s, {});
    sink.num("tensor-dimension", "epimorphism_check", tensor_dim, rep.tensor_dim);
    sink.flag("prime-subring-epimorphism", "epimorphism_check", false, rep.epi);
}

// ----------------------------------------------------------- the scenarios

std::vector<Assertion> build_gaussian(const ScenarioParams&) {
    AssertionSink sink;
    ExtFieldPtr ext = gaussian_extension();
    AlgPtr s = algebra_from_extension(ext);
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 2, 0);
    flat_block(sink, s, 3);
    ModelResult model = i_squared_model(q);
    sink.checks("i_squared_model", model.checks, "i-squared-");
    sink.num("i-squared-w-dimension", "i_squared_model", 0, model.w_dim);
    omega_block(sink, presented_from_extension(ext), q, 0, 0);
    epi_block(sink, s, 4);
    return std::move(sink).take();
}

std::vector<Assertion> build_f4(const ScenarioParams& params) {
    AssertionSink sink;
    size_t cap = static_cast<size_t>(param_or(params, "replay-cap", 8));
    ExtFieldPtr ext = f4_extension();
    AlgPtr s = algebra_from_extension(ext);
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 2, 0);
    flat_block(sink, s, 3);
    ModelResult model = frobenius_model(q);
    sink.checks("frobenius_model", model.checks, "frobenius-");
    sink.num("frobenius-w-dimension", "frobenius_model", 0, model.w_dim);
    census_block(sink, s, 64, 64, 0, "S = F2-algebra[1,g]; R = {0, 1}; M = S^2; N = S", cap);
    audit_block(sink, s, "6 = 6 + 0");
    omega_block(sink, presented_from_extension(ext), q, 0, 0);
    epi_block(sink, s, 4);
    return std::move(sink).take();
}

std::vector<Assertion> build_f9(const ScenarioParams& params) {
    AssertionSink sink;
    size_t cap = static_cast<size_t>(param_or(params, "replay-cap", 8));
    ExtFieldPtr ext = f9_extension();
    AlgPtr s = algebra_from_extension(ext);
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 2, 0);
    flat_block(sink, s, 3);
    ModelResult model = i_squared_model(q);
    sink.checks("i_squared_model", model.checks, "i-squared-");
    sink.num("i-squared-w-dimension", "i_squared_model", 0, model.w_dim);
    census_block(sink, s, 729, 729, 0, "S = F3-algebra[1,g]; R = {0, 1, 2*1}; M = S^2; N = S",
                 cap);
    audit_block(sink, s, "6 = 6 + 0");
    omega_block(sink, presented_from_extension(ext), q, 0, 0);
    epi_block(sink, s, 4);
    return std::move(sink).take();
}

std::vector<Assertion> build_f8(const ScenarioParams& params) {
    AssertionSink sink;
    size_t cap = static_cast<size_t>(param_or(params, "replay-cap", 8));
    ExtFieldPtr ext = f8_extension();
    AlgPtr s = algebra_from_extension(ext);
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 3, 0);
    flat_block(sink, s, 6);
    ModelResult model = frobenius_model(q);
    sink.checks("frobenius_model", model.checks, "frobenius-");
    sink.num("frobenius-w-dimension", "frobenius_model", 0, model.w_dim);
    census_block(sink, s, 512, 512, 0, "S = F2-algebra[1,g,g^2]; R = {0, 1}; M = S^2; N = S",
                 cap);
    audit_block(sink, s, "9 = 9 + 0");
    omega_block(sink, presented_from_extension(ext), q, 0, 0);
    epi_block(sink, s, 9);
    return std::move(sink).take();
}

std::vector<Assertion> build_dual_numbers(const ScenarioParams&) {
    AssertionSink sink;
    PresentedAlgebra a = presented_truncated(make_rationals(), "T", 3);
    const AlgPtr& s = a.realization;
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 5, 2);
    flat_block(sink, s, 6);
    ModelResult model = i_squared_model(q);
    sink.checks("i_squared_model", model.checks, "i-squared-");
    sink.num("i-squared-w-dimension", "i_squared_model", 2, model.w_dim);
    omega_block(sink, a, q, 2, 0);
    epi_block(sink, s, 9);
    return std::move(sink).take();
}

std::vector<Assertion> build_truncated(const ScenarioParams& params) {
    AssertionSink sink;
    size_t cap = static_cast<size_t>(param_or(params, "replay-cap", 8));
    PresentedAlgebra a = presented_truncated(make_prime_field(2), "T", 4);
    const AlgPtr& s = a.realization;
    QPhiResult q = q_phi(s);
    qphi_block(sink, q, 8, 4);
    flat_block(sink, s, 10);
    ModelResult model = frobenius_model(q);
    sink.checks("frobenius_model", model.checks, "frobenius-");
    sink.num("frobenius-w-dimension", "frobenius_model", 4, model.w_dim);
    omega_block(sink, a, q, 4, 0);

    // The inclusion of the squares subalgebra span{1, T²} is not an
    // epimorphism: S ⊗_R S is 8-dimensional, S only 4.
    Vec t = s->basis_vector(1);
    EpimorphismReport epi = epimorphism_check(s, {s->mul(t, t)});
    sink.num("squares-subring-dimension", "epimorphism_check", 2, epi.subring_dim);
    sink.num("squares-tensor-dimension", "epimorphism_check", 8, epi.tensor_dim);
    sink.flag("squares-epimorphism", "epimorphism_check", false, epi.epi);

    CensusResult census = census_block(
        sink, s, 65536, 4096, 7, "S = F2-algebra[1,T,T^2,T^3]; R = {0, 1}; M = S^2; N = S",
        cap);
    DimensionAudit audit = audit_block(sink, s, "16 = 12 + 4");
    sink.flag("count-ratio-exact", "enumerate_quads", true,
              census.count_absolute != 0 &&
                  census.count_relative % census.count_absolute == 0);
    std::uint64_t ratio = census.count_absolute == 0
                              ? 0
                              : census.count_relative / census.count_absolute;
    sink.num("count-ratio", "enumerate_quads", 16, ratio);
    sink.num("hom-dimension", "dimension_audit", 4, audit.dim_hom_w);
    sink.flag("ratio-equals-two-to-hom", "dimension_audit", true,
              audit.dim_hom_w < 64 && ratio == (std::uint64_t{1} << audit.dim_hom_w));

    sink.flag("exotic-witness-present", "enumerate_quads", true, !census.witnesses.empty());
    if (!census.witnesses.empty()) {
        const QuadraticMap& w0 = census.witnesses.front();
        sink.text("exotic-witness-description", "enumerate_quads",
                  "relative kernel basis map #8", w0.description());
        sink.axiom("exotic-witness-square-scaling", w0, Axiom::square_scaling,
                   AxiomMode::exhaustive, Verdict::pass);
        sink.axiom("exotic-witness-r-bilinearity", w0, Axiom::r_bilinearity,
                   AxiomMode::exhaustive, Verdict::pass);
        sink.axiom("exotic-witness-s-bilinearity", w0, Axiom::s_bilinearity,
                   AxiomMode::exhaustive, Verdict::fail, {},
                   "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (0, 1), y = (1, 0): "
                   "pol(s·x, y) = 0, s·pol(x, y) = T^3");
    }
    return std::move(sink).take();
}

void derivative_witness_block(AssertionSink& sink, const std::string& prefix,
                              const FieldPtr& base) {
    FieldPtr kt = make_function_field(base, {"T"});
    QuadraticMap q = derivative_pair_form(kt, "T");
    SamplePlan plan = derivative_pair_samples(kt, "T");
    const ModulePtr& dom = q.domain();

    Value t = Value(RatFunc::from_poly(MultiPoly::variable(base, {"T"}, "T")));
    Value pol_t = q.polarize(dom->pair_of(t, kt->zero()), dom->pair_of(kt->zero(), kt->one()));
    sink.value(prefix + "cross-polarization", "derivative_pair_form", q.target(), kt->one(),
               pol_t);
    Value pol_1 =
        q.polarize(dom->pair_of(kt->one(), kt->zero()), dom->pair_of(kt->zero(), kt->one()));
    sink.value(prefix + "scaled-polarization", "derivative_pair_form", q.target(),
               q.target()->zero(), q.target()->scale(t, pol_1));

    sink.axiom(prefix + "square-scaling", q, Axiom::square_scaling, AxiomMode::sampled,
               Verdict::no_counterexample_found, plan, "", 21);
    sink.axiom(prefix + "biadditivity", q, Axiom::biadditivity, AxiomMode::sampled,
               Verdict::no_counterexample_found, plan, "", 343);
    sink.axiom(prefix + "r-bilinearity", q, Axiom::r_bilinearity, AxiomMode::sampled,
               Verdict::no_counterexample_found, plan, "", 98);
    sink.axiom(prefix + "s-bilinearity", q, Axiom::s_bilinearity, AxiomMode::sampled,
               Verdict::fail, plan,
               "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (1, 0), y = (0, 1): "
               "pol(s·x, y) = 1, s·pol(x, y) = 0");
}

std::vector<Assertion> build_function_field(const ScenarioParams&) {
    AssertionSink sink;
    derivative_witness_block(sink, "qt-", make_rationals());
    derivative_witness_block(sink, "f3t-", make_prime_field(3));
    return std::move(sink).take();
}

std::vector<Assertion> build_two_variable(const ScenarioParams& params) {
    AssertionSink sink;
    long n = param_or(params, "n", 3);
    unsigned degree = static_cast<unsigned>(param_or(params, "degree", 1));

    FieldPtr f2 = make_prime_field(2);
    std::vector<std::string> vars{"X", "Y"};
    ModulePtr bp = bounded_poly_module(f2, vars, degree);
    ModulePtr dom = pair_module(bp, bp);
    QuadraticMap q12 = higher_derivative_form(dom, bp, vars);

    Value x = Value(MultiPoly::variable(f2, vars, "X"));
    Value y = Value(MultiPoly::variable(f2, vars, "Y"));
    Value one = Value(MultiPoly::constant(f2, vars, f2->one()));
    sink.value("mixed-derivative-of-xy", "higher_derivative_form", bp, one,
               q12.eval(dom->pair_of(x, y)));

    sink.axiom("square-scaling", q12, Axiom::square_scaling, AxiomMode::exhaustive,
               Verdict::pass);
    sink.axiom("biadditivity", q12, Axiom::biadditivity, AxiomMode::exhaustive, Verdict::pass);
    sink.axiom("r-bilinearity", q12, Axiom::r_bilinearity, AxiomMode::exhaustive,
               Verdict::pass);
    if (degree == 1)
        sink.axiom("s-bilinearity", q12, Axiom::s_bilinearity, AxiomMode::exhaustive,
                   Verdict::fail, {},
                   "pol(s·x, y) ≠ s·pol(x, y) for s = X, x = (0, 1), y = (Y, 0): "
                   "pol(s·x, y) = 1, s·pol(x, y) = 0");
    else
        sink.axiom("s-bilinearity", q12, Axiom::s_bilinearity, AxiomMode::exhaustive,
                   Verdict::fail);

    for (long m = 2; m <= n; ++m) {
        IndependenceReport rep = higher_derivative_independence(static_cast<unsigned>(m));
        std::string tag = std::to_string(m) + "-variables";
        sink.num("independence-" + tag + "-matrix-rows", "higher_derivative_independence",
                 std::uint64_t{1} << m, rep.matrix.rows());
        sink.flag("independence-" + tag + "-invertible", "higher_derivative_independence",
                  true, rep.invertible);
    }
    return std::move(sink).take();
}

std::vector<Assertion> build_inseparable(const ScenarioParams& params) {
    AssertionSink sink;
    unsigned n = static_cast<unsigned>(param_or(params, "n", 2));
    for (long characteristic : {0L, 2L, 3L}) {
        ModelIdentityReport rep =
            exterior_model_check(characteristic == 2 ? n : 1, characteristic);
        sink.checks("exterior_model_check", rep.checks,
                    "char" + std::to_string(characteristic) + "-");
    }
    return std::move(sink).take();
}

std::vector<Assertion> build_flatfixed(const ScenarioParams&) {
    AssertionSink sink;
    SquareZeroReport rep = squarezero_counterexample_check();
    sink.num("diagonal-sample-size", "squarezero_counterexample_check", 512,
             rep.diagonal_sample_size);
    sink.flag("diagonal-squares-in-ideal", "squarezero_counterexample_check", true,
              rep.diagonal_squares_in_ideal);
    sink.flag("xyz-in-squares-ideal", "monomial_ideal_membership", false, rep.xyz_in_ideal);
    sink.flag("flip-chain-valid", "squarezero_counterexample_check", true,
              rep.flip_chain_valid);
    std::string chain;
    for (size_t i = 0; i < rep.flip_chain.size(); ++i) {
        if (i) chain += "\n";
        chain += rep.flip_chain[i];
    }
    sink.text("flip-chain", "squarezero_counterexample_check",
              "X*Y ⊗ Z = X ⊗ Y*Z (factor Y moved right)\n"
              "X*Y ⊗ Z = Y ⊗ X*Z (factor X moved right)\n"
              "Y ⊗ X*Z = Y*Z ⊗ X (factor Z moved left)\n"
              "Y*Z ⊗ X = Z ⊗ X*Y (factor Y moved right)",
              chain);
    return std::move(sink).take();
}

// ------------------------------------------------------------ the catalog

std::vector<Scenario> build_catalog() {
    const ParamSpec replay{"replay-cap", 0, 100000, 8,
                           "how many counted maps to replay through the public axiom checks"};
    std::vector<Scenario> list;
    list.push_back({"gaussian-rationals",
                    "ℚ(i) over ℚ: W vanishes, the diagonal subalgebra equals the flip-fixed "
                    "subspace, and the halved-bimodule presentation is isomorphic to Q.",
                    {},
                    build_gaussian});
    list.push_back({"f4-over-f2",
                    "𝔽₄ over 𝔽₂: W vanishes, the census finds exactly the 64 Gram forms in "
                    "both families, and the squaring presentation is isomorphic to Q.",
                    {replay},
                    build_f4});
    list.push_back({"f9-over-f3",
                    "𝔽₉ over 𝔽₃: W vanishes, the census finds exactly the 729 Gram forms in "
                    "both families, and the halved-bimodule presentation is isomorphic to Q.",
                    {replay},
                    build_f9});
    list.push_back({"f8-over-f2",
                    "𝔽₈ over 𝔽₂: W vanishes for a cubic extension and the census finds "
                    "exactly the 512 Gram forms in both families.",
                    {replay},
                    build_f8});
    list.push_back({"dual-numbers-char0",
                    "ℚ[T]/T³ over ℚ: dim W = 2 = dim Ω with a bijective comparison map, and "
                    "the halved-bimodule presentation is isomorphic to Q.",
                    {},
                    build_dual_numbers});
    list.push_back({"truncated-poly-char2",
                    "𝔽₂[T]/T⁴ over 𝔽₂: dim W = 4 two ways, the relative census exceeds the "
                    "absolute one by 2^dim Hom(W, S), and an exotic form is exhibited.",
                    {replay},
                    build_truncated});
    list.push_back({"function-field-witness",
                    "F′G − FG′ over ℚ(T) and 𝔽₃(T): additive and base-bilinear on the "
                    "documented samples, S-bilinearity fails with the frozen witness.",
                    {},
                    build_function_field});
    list.push_back({"two-variable-char2",
                    "∂²(FG)/∂X∂Y over 𝔽₂[X, Y]: exhaustively quadratic on the bounded "
                    "carrier, not S-bilinear, and the 2ⁿ derivative forms are independent.",
                    {ParamSpec{"n", 2, 4, 3, "largest variable count for the independence "
                                             "matrices"},
                     ParamSpec{"degree", 1, 2, 1,
                               "per-variable degree bound of the carrier (2 exceeds the "
                               "exhaustive sweep guard)"}},
                    build_two_variable});
    list.push_back({"inseparable-model",
                    "Square-zero models over K(T) for K of characteristic 0, 2, 3: conjugate "
                    "identities, first-order unit expansions, and (T−S)ᵖ = (T+S)ᵖ.",
                    {ParamSpec{"n", 1, 4, 2,
                               "variable count for the characteristic-2 balanced tensors"}},
                    build_inseparable});
    list.push_back({"flatfixed-counterexample",
                    "Pointed square-zero 𝔽₂[X, Y, Z]-quotient: every diagonal square lies in "
                    "(X², Y², Z²), XYZ does not, yet X·Y ⊗ Z is flip-fixed via a verified "
                    "move chain.",
                    {},
                    build_flatfixed});
    std::sort(list.begin(), list.end(),
              [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
    return list;
}

void validate_for(const Scenario& sc, const ScenarioParams& params) {
    const std::vector<std::string> known = known_param_keys();
    for (const auto& [key, value] : params) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw Error("unknown parameter key: " + key);
        for (const ParamSpec& spec : sc.params)
            if (spec.key == key && (value < spec.min_value || value > spec.max_value))
                throw Error("parameter " + key + " = " + std::to_string(value) +
                            " is outside [" + std::to_string(spec.min_value) + ", " +
                            std::to_string(spec.max_value) + "] for scenario " + sc.name);
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ojson assertion_json(const Assertion& a) {
    ojson j;
    j["name"] = a.name;
    j["operation"] = a.operation;
    j["expected"] = a.expected;
    j["computed"] = a.computed;
    j["verdict"] = a.pass ? "pass" : "fail";
    if (!a.pass) j["witness"] = a.witness.empty() ? a.computed : a.witness;
    return j;
}

ojson report_json(const Report& r, bool with_elapsed) {
    ojson j;
    j["scenario"] = r.scenario;
    j["version"] = r.version;
    ojson assertions = ojson::array();
    for (const Assertion& a : r.assertions) assertions.push_back(assertion_json(a));
    j["assertions"] = std::move(assertions);
    if (with_elapsed) j["elapsed-ms"] = r.elapsed_ms;
    return j;
}

std::string render_csv(const std::vector<Report>& reports) {
    std::string out = "scenario,name,operation,expected,computed,verdict,witness,elapsed-ms\n";
    for (const Report& r : reports)
        for (const Assertion& a : r.assertions) {
            std::string witness = a.pass ? "" : (a.witness.empty() ? a.computed : a.witness);
            out += csv_escape(r.scenario) + "," + csv_escape(a.name) + "," +
                   csv_escape(a.operation) + "," + csv_escape(a.expected) + "," +
                   csv_escape(a.computed) + "," + (a.pass ? "pass" : "fail") + "," +
                   csv_escape(witness) + "," + std::to_string(r.elapsed_ms) + "\n";
        }
    return out;
}

std::string collapse(const std::string& text) {
    std::string out;
    for (char c : text)
        if (c == '\n')
            out += " ⏎ ";
        else
            out += c;
    return out;
}

std::string render_text(const std::vector<Report>& reports) {
    std::ostringstream os;
    size_t total = 0;
    size_t passed = 0;
    bool first = true;
    for (const Report& r : reports) {
        if (!first) os << "\n";
        first = false;
        os << "scenario: " << r.scenario << " (version " << r.version << ")\n";
        if (const Scenario* sc = find_scenario(r.scenario))
            os << "  " << sc->description << "\n";
        size_t width = 0;
        for (const Assertion& a : r.assertions) width = std::max(width, a.name.size());
        size_t ok = 0;
        for (const Assertion& a : r.assertions) {
            os << "  " << (a.pass ? "pass  " : "FAIL  ") << a.name
               << std::string(width - a.name.size(), ' ') << "  [" << a.operation
               << "]  expected " << collapse(a.expected) << "  computed "
               << collapse(a.computed) << "\n";
            if (!a.pass) {
                std::istringstream lines(a.witness.empty() ? a.computed : a.witness);
                std::string line;
                while (std::getline(lines, line)) os << "        witness: " << line << "\n";
            }
            if (a.pass) ++ok;
        }
        os << "  result: " << (ok == r.assertions.size() ? "PASS" : "FAIL") << " — " << ok
           << "/" << r.assertions.size() << " assertions, " << r.elapsed_ms << " ms\n";
        total += r.assertions.size();
        passed += ok;
    }
    if (reports.size() > 1)
        os << "\noverall: " << (passed == total ? "PASS" : "FAIL") << " — " << reports.size()
           << " scenarios, " << passed << "/" << total << " assertions\n";
    return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

bool Report::pass() const {
    for (const Assertion& a : assertions)
        if (!a.pass) return false;
    return true;
}

const std::vector<Scenario>& scenario_catalog() {
    static const std::vector<Scenario> catalog = build_catalog();
    return catalog;
}

const Scenario* find_scenario(const std::string& name) {
    for (const Scenario& sc : scenario_catalog())
        if (sc.name == name) return &sc;
    return nullptr;
}

std::vector<std::string> known_param_keys() {
    std::vector<std::string> keys;
    for (const Scenario& sc : scenario_catalog())
        for (const ParamSpec& spec : sc.params) keys.push_back(spec.key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

Report run_scenario(const std::string& name, const ScenarioParams& params) {
    const Scenario* sc = find_scenario(name);
    if (!sc) throw Error("unknown scenario: " + name);
    validate_for(*sc, params);
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.scenario = name;
    rep.assertions = sc->builder(params);
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return rep;
}

std::vector<Report> run_scenarios(std::vector<std::string> names, const ScenarioParams& params,
                                  unsigned workers) {
    if (names.empty())
        for (const Scenario& sc : scenario_catalog()) names.push_back(sc.name);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const std::string& name : names) {
        const Scenario* sc = find_scenario(name);
        if (!sc) throw Error("unknown scenario: " + name);
        validate_for(*sc, params); // reject bad configs before any work
    }

    const size_t count = names.size();
    std::vector<Report> reports(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                reports[i] = run_scenario(names[i], params);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned pool = std::max<unsigned>(
        1, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (pool == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned i = 0; i < pool; ++i) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
    }
    for (size_t i = 0; i < count; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return reports; // names were sorted, so reports are ordered by name
}

std::optional<ReportFormat> parse_format(const std::string& name) {
    if (name == "text") return ReportFormat::text;
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    return std::nullopt;
}

std::string render_reports(const std::vector<Report>& reports, ReportFormat format) {
    switch (format) {
    case ReportFormat::json: {
        if (reports.size() == 1) return report_json(reports.front(), true).dump(2) + "\n";
        ojson arr = ojson::array();
        for (const Report& r : reports) arr.push_back(report_json(r, true));
        return arr.dump(2) + "\n";
    }
    case ReportFormat::csv:
        return render_csv(reports);
    case ReportFormat::text:
        return render_text(reports);
    }
    return {};
}

std::string canonical_render(const Report& report) {
    return report_json(report, false).dump(2) + "\n";
}

std::vector<std::string> regenerate_goldens(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create golden directory " + dir + ": " + ec.message());
    std::vector<std::string> written;
    for (const Scenario& sc : scenario_catalog()) {
        Report rep = run_scenario(sc.name, {});
        fs::path path = fs::path(dir) / (sc.name + ".json");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open golden file " + path.string() + " for writing");
        out << canonical_render(rep);
        out.close();
        if (!out) throw Error("failed to write golden file " + path.string());
        written.push_back(path.string());
    }
    return written;
}

Report verify_goldens(const std::string& dir) {
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.scenario = "goldens";
    for (const Scenario& sc : scenario_catalog()) {
        fs::path path = fs::path(dir) / (sc.name + ".json");
        Assertion a{sc.name, "verify_goldens", "byte-identical golden", "", false, ""};
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            a.computed = "missing golden file";
            a.witness = path.string() + " cannot be read";
        } else {
            std::ostringstream buffer;
            buffer << in.rdbuf();
            const std::string golden = buffer.str();
            const std::string live = canonical_render(run_scenario(sc.name, {}));
            if (golden == live) {
                a.computed = "byte-identical golden";
                a.pass = true;
            } else {
                a.computed = "mismatch";
                const std::vector<std::string> golden_lines = split_lines(golden);
                const std::vector<std::string> live_lines = split_lines(live);
                const size_t n = std::max(golden_lines.size(), live_lines.size());
                std::string diff;
                size_t reported = 0;
                for (size_t i = 0; i < n; ++i) {
                    const std::string* g =
                        i < golden_lines.size() ? &golden_lines[i] : nullptr;
                    const std::string* l = i < live_lines.size() ? &live_lines[i] : nullptr;
                    if (g && l && *g == *l) continue;
                    if (reported == 20) {
                        diff += "…\n";
                        break;
                    }
                    diff += "line " + std::to_string(i + 1) + ": golden «" +
                            (g ? *g : "<absent>") + "» live «" + (l ? *l : "<absent>") +
                            "»\n";
                    ++reported;
                }
                if (!diff.empty() && diff.back() == '\n') diff.pop_back();
                a.witness = diff;
            }
        }
        rep.assertions.push_back(std::move(a));
    }
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return rep;
}

} // namespace qflab
