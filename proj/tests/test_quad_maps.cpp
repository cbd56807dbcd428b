#include <doctest.h>

#include "qflab/algebra_lab.hpp"
#include "qflab/extfield.hpp"
#include "qflab/kaehler.hpp"
#include "qflab/quad.hpp"

using namespace qflab;

namespace {

AlgPtr rational_line() { return trivial_algebra(make_rationals()); }

Value alg_int(const AlgPtr& s, long n) {
    return Value(s->scale(s->base()->from_int(n), s->unit()));
}

Value pair_of(const ModulePtr& dom, const Value& a, const Value& b) {
    return dom->pair_of(a, b);
}

AlgPtr f4_algebra() {
    FieldPtr f2 = make_prime_field(2);
    return algebra_from_extension(
        make_extension_field(f2, "x", {f2->one(), f2->one(), f2->one()}));
}

AlgPtr f9_algebra() {
    FieldPtr f3 = make_prime_field(3);
    return algebra_from_extension(
        make_extension_field(f3, "x", {f3->one(), f3->zero(), f3->one()}));
}

} // namespace

TEST_CASE("polarization: defining identity, zero slot, and symmetry") {
    // q(x) = x² on ℚ: pol(x, y) = (x+y)² − x² − y² = 2xy.
    AlgPtr s = rational_line();
    QuadraticMap q = gram_form(s, 1, {s->unit()});
    CHECK(q.polarize(alg_int(s, 2), alg_int(s, 3)) == alg_int(s, 12));
    CHECK(q.polarize(alg_int(s, -5), alg_int(s, 7)) == alg_int(s, -70));
    // pol(x, 0) = q(x) − q(x) − q(0) = 0.
    CHECK(q.polarize(alg_int(s, 9), q.domain()->zero()) == q.target()->zero());

    // Symmetry pol(x, y) = pol(y, x) over an exhaustive domain.
    AlgPtr f4 = f4_algebra();
    QuadraticMap g = gram_form(f4, 2, {f4->unit(), f4->unit(), f4->basis_vector(1)});
    ModulePtr dom = g.domain();
    const std::uint64_t n = *dom->size();
    REQUIRE(n == 16);
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j)
            CHECK(g.polarize(dom->element(i), dom->element(j)) ==
                  g.polarize(dom->element(j), dom->element(i)));
}

TEST_CASE("a quadratic map must send 0 to 0") {
    AlgPtr s = rational_line();
    ModulePtr m = algebra_module(s);
    CHECK_THROWS_AS(
        QuadraticMap(m, m, "shifted", [s](const Value&) { return alg_int(s, 1); }), Error);
}

TEST_CASE("square-scaling fails for the identity map on ℚ, with the declared scalar") {
    FieldPtr q_field = make_rationals();
    ModulePtr m = free_ring_module(q_field, 1);
    QuadraticMap ident(m, m, "identity", [](const Value& x) { return x; });
    SamplePlan plan;
    plan.vectors = {Value(Vec{q_field->one()})};
    plan.scalars = {q_field->from_int(2)};
    AxiomReport rep = axiom_check(ident, Axiom::square_scaling, AxiomMode::sampled, plan);
    CHECK(rep.verdict == Verdict::fail);
    CHECK(rep.witness == "q(λ·x) ≠ λ²·q(x) for λ = 2, x = (1): q(λ·x) = (2), λ²·q(x) = (4)");
    // Basis mode is refused: no bilinear-polarization certificate, and
    // square-scaling is never a basis-checkable axiom.
    CHECK_THROWS_AS(axiom_check(ident, Axiom::biadditivity, AxiomMode::basis), Error);
    CHECK_THROWS_AS(axiom_check(ident, Axiom::square_scaling, AxiomMode::basis), Error);
    // Exhaustive mode is refused outright: the domain is infinite.
    CHECK_THROWS_AS(axiom_check(ident, Axiom::biadditivity, AxiomMode::exhaustive), Error);
    // Sampled mode needs a declared plan.
    CHECK_THROWS_AS(
        axiom_check(ident, Axiom::square_scaling, AxiomMode::sampled, SamplePlan{}), Error);
}

TEST_CASE("table form on 𝔽₂³: square-scaling passes, biadditivity fails at the first triple") {
    FieldPtr f2 = make_prime_field(2);
    ModulePtr dom = free_ring_module(f2, 3);
    ModulePtr tgt = free_ring_module(f2, 1);
    // q(x) = 1 for every x ≠ 0.
    std::vector<Value> values;
    for (std::uint64_t i = 0; i < 8; ++i)
        values.push_back(i == 0 ? tgt->zero() : Value(Vec{f2->one()}));
    QuadraticMap q = table_form(dom, tgt, values);

    AxiomReport sq = axiom_check(q, Axiom::square_scaling, AxiomMode::exhaustive);
    CHECK(sq.verdict == Verdict::pass);
    CHECK(sq.cases == 16); // scalars {0, 1} × 8 elements

    AxiomReport ba = axiom_check(q, Axiom::biadditivity, AxiomMode::exhaustive);
    CHECK(ba.verdict == Verdict::fail);
    // First violating triple in scan order (x outermost, then y, then z).
    CHECK(ba.witness ==
          "pol(x+y, z) ≠ pol(x, z) + pol(y, z) for x = (1, 0, 0), y = (0, 1, 0), "
          "z = (0, 0, 1): pol(x+y, z) = (1), pol(x, z) + pol(y, z) = (0)");
    CHECK(ba.cases == 85);

    // Over 𝔽₂ the only scalars are 0 and 1, so bilinearity holds vacuously.
    CHECK(axiom_check(q, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict == Verdict::pass);
    // Basis mode stays refused for table forms (no certificate).
    CHECK_THROWS_AS(axiom_check(q, Axiom::biadditivity, AxiomMode::basis), Error);
}

TEST_CASE("char-2 consequence: pol(x, x) = 0 for every table with q(0) = 0") {
    FieldPtr f2 = make_prime_field(2);
    ModulePtr dom = free_ring_module(f2, 2);
    ModulePtr tgt = free_ring_module(f2, 1);
    // All 8 value tables on the three nonzero elements, quadratic or not:
    // pol(x, x) = q(2x) − 2q(x) = q(0) = 0 needs only the characteristic.
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        std::vector<Value> values{tgt->zero()};
        for (int b = 0; b < 3; ++b)
            values.push_back((mask >> b) & 1 ? Value(Vec{f2->one()}) : tgt->zero());
        QuadraticMap q = table_form(dom, tgt, values);
        for (std::uint64_t i = 0; i < 4; ++i)
            CHECK(q.polarize(dom->element(i), dom->element(i)) == tgt->zero());
    }
}

TEST_CASE("gram forms are S-quadratic: exhaustive at rank 1 over 𝔽₉, basis at rank 2") {
    AlgPtr f9 = f9_algebra();
    QuadraticMap q1 = gram_form(f9, 1, {f9->basis_vector(1)});
    CHECK(axiom_check(q1, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q1, Axiom::biadditivity, AxiomMode::exhaustive).verdict == Verdict::pass);
    CHECK(axiom_check(q1, Axiom::r_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q1, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);

    // Rank 2 over 𝔽₉ (81 pairs): full sweeps still fit, and basis mode gives
    // the same verdicts from just the 4 basis vectors (the polarization of a
    // gram form is bilinear by construction).
    QuadraticMap q2 = gram_form(f9, 2, {f9->unit(), f9->basis_vector(1), f9->unit()});
    for (Axiom a : {Axiom::square_scaling, Axiom::biadditivity, Axiom::r_bilinearity,
                    Axiom::s_bilinearity})
        CHECK(axiom_check(q2, a, AxiomMode::exhaustive).verdict == Verdict::pass);
    CHECK(axiom_check(q2, Axiom::biadditivity, AxiomMode::basis).verdict == Verdict::pass);
    CHECK(axiom_check(q2, Axiom::r_bilinearity, AxiomMode::basis).verdict == Verdict::pass);
    CHECK(axiom_check(q2, Axiom::s_bilinearity, AxiomMode::basis).verdict == Verdict::pass);

    // Oversized domains are refused with a guard, not silently truncated:
    // 𝔽₂^13 has 8192 elements.
    ModulePtr big = free_ring_module(make_prime_field(2), 13);
    QuadraticMap zero_big(big, big, "zero", [big](const Value&) { return big->zero(); });
    CHECK_THROWS_AS(axiom_check(zero_big, Axiom::biadditivity, AxiomMode::exhaustive),
                    GuardExceeded);

    // A full rank-2 sweep fits over 𝔽₄ (256 pairs): everything exhaustive.
    AlgPtr f4 = f4_algebra();
    QuadraticMap q4 = gram_form(f4, 2, {f4->unit(), f4->basis_vector(1), f4->zero()});
    for (Axiom a : {Axiom::square_scaling, Axiom::biadditivity, Axiom::r_bilinearity,
                    Axiom::s_bilinearity})
        CHECK(axiom_check(q4, a, AxiomMode::exhaustive).verdict == Verdict::pass);

    CHECK_THROWS_AS(gram_form(f4, 3, {}), Error);
    CHECK_THROWS_AS(gram_form(f4, 2, {f4->unit()}), Error);
}

TEST_CASE("derivative cross form over 𝔽₃(T): sampled sweeps and the frozen witness") {
    FieldPtr kt = make_function_field(make_prime_field(3), {"T"});
    QuadraticMap q = derivative_pair_form(kt, "T");
    SamplePlan plan = derivative_pair_samples(kt, "T");

    // pol((T,0), (0,1)) = q((T,1)) − q((T,0)) − q((0,1)) = T′·1 − T·1′ = 1.
    ModulePtr dom = q.domain();
    Value t = Value(RatFunc::from_poly(MultiPoly::variable(make_prime_field(3), {"T"}, "T")));
    CHECK(q.polarize(pair_of(dom, t, kt->zero()), pair_of(dom, kt->zero(), kt->one())) ==
          kt->one());

    AxiomReport sq = axiom_check(q, Axiom::square_scaling, AxiomMode::sampled, plan);
    CHECK(sq.verdict == Verdict::no_counterexample_found);
    CHECK(sq.cases == 21); // 3 scalars × 7 vectors

    AxiomReport ba = axiom_check(q, Axiom::biadditivity, AxiomMode::sampled, plan);
    CHECK(ba.verdict == Verdict::no_counterexample_found);
    CHECK(ba.cases == 343); // 7³ triples

    AxiomReport rb = axiom_check(q, Axiom::r_bilinearity, AxiomMode::sampled, plan);
    CHECK(rb.verdict == Verdict::no_counterexample_found);
    CHECK(rb.cases == 98); // 2 base scalars × 7² pairs

    AxiomReport sb = axiom_check(q, Axiom::s_bilinearity, AxiomMode::sampled, plan);
    CHECK(sb.verdict == Verdict::fail);
    CHECK(sb.witness ==
          "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (1, 0), y = (0, 1): "
          "pol(s·x, y) = 1, s·pol(x, y) = 0");

    // Same story over ℚ(T) — characteristic 0 does not rescue S-bilinearity.
    FieldPtr qt = make_function_field(make_rationals(), {"T"});
    QuadraticMap q0 = derivative_pair_form(qt, "T");
    SamplePlan plan0 = derivative_pair_samples(qt, "T");
    CHECK(axiom_check(q0, Axiom::r_bilinearity, AxiomMode::sampled, plan0).verdict ==
          Verdict::no_counterexample_found);
    AxiomReport sb0 = axiom_check(q0, Axiom::s_bilinearity, AxiomMode::sampled, plan0);
    CHECK(sb0.verdict == Verdict::fail);
    CHECK(sb0.witness ==
          "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (1, 0), y = (0, 1): "
          "pol(s·x, y) = 1, s·pol(x, y) = 0");

    CHECK_THROWS_AS(derivative_pair_form(kt, "U"), Error);
}

TEST_CASE("derivation forms: T³/ℚ in basis mode, T⁴/𝔽₂ exhaustively") {
    // On ℚ[T]/(T³) the derivation must kill the relation: d(T³) = 3T²·d(T) = 0
    // forces d(T) ∈ (T); take d(T) = T. Then q(F, G) = d(F)·G − F·d(G).
    PresentedAlgebra a3 = presented_truncated(make_rationals(), "T", 3);
    const AlgPtr& s3 = a3.realization;
    CHECK_THROWS_AS(derivation_form(a3, regular_module(s3), {s3->unit()}, "S"), Error);
    QuadraticMap q3 =
        derivation_form(a3, regular_module(s3), {s3->basis_vector(1)}, "S as d/dT target");
    CHECK(axiom_check(q3, Axiom::biadditivity, AxiomMode::basis).verdict == Verdict::pass);
    CHECK(axiom_check(q3, Axiom::r_bilinearity, AxiomMode::basis).verdict == Verdict::pass);
    AxiomReport sb3 = axiom_check(q3, Axiom::s_bilinearity, AxiomMode::basis);
    CHECK(sb3.verdict == Verdict::fail);
    CHECK(sb3.witness ==
          "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (1, 0), y = (0, 1): "
          "pol(s·x, y) = (0, 1, 0), s·pol(x, y) = (0, 0, 0)");
    SamplePlan plan;
    ModulePtr dom3 = q3.domain();
    Value one3 = Value(s3->unit());
    Value zero3 = Value(s3->zero());
    Value t3 = Value(s3->basis_vector(1));
    Value t3sq = Value(s3->basis_vector(2));
    plan.vectors = {pair_of(dom3, one3, zero3), pair_of(dom3, zero3, one3),
                    pair_of(dom3, t3, one3), pair_of(dom3, t3sq, t3)};
    plan.scalars = {t3, Value(s3->add(s3->unit(), s3->basis_vector(1))), t3sq};
    CHECK(axiom_check(q3, Axiom::square_scaling, AxiomMode::sampled, plan).verdict ==
          Verdict::no_counterexample_found);

    // d/dT on 𝔽₂[T]/(T⁴): small enough for full sweeps of every axiom.
    PresentedAlgebra a4 = presented_truncated(make_prime_field(2), "T", 4);
    const AlgPtr& s4 = a4.realization;
    QuadraticMap q4 = derivation_form(a4, regular_module(s4), {s4->unit()}, "S as d/dT target");
    CHECK(axiom_check(q4, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q4, Axiom::biadditivity, AxiomMode::exhaustive).verdict == Verdict::pass);
    CHECK(axiom_check(q4, Axiom::r_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q4, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::fail);

    // In characteristic 2 the cross form collapses to the Leibniz value:
    // q(F, G) = d(F)·G + F·d(G) = d(F·G).
    ExactMatrix d4 = derivation_matrix(a4, regular_module(s4), {s4->unit()});
    ModulePtr dom4 = q4.domain();
    const std::uint64_t n4 = *dom4->size();
    for (std::uint64_t i = 0; i < n4; ++i) {
        Value v = dom4->element(i);
        const Vec& f = v.as_vec()[0].as_vec();
        const Vec& g = v.as_vec()[1].as_vec();
        CHECK(q4.eval(v) == Value(d4.apply(s4->mul(f, g))));
    }

    // The zero derivation yields the zero form, which is honestly S-bilinear.
    QuadraticMap qz =
        derivation_form(a4, regular_module(s4), {s4->zero()}, "S under the zero derivation");
    CHECK(axiom_check(qz, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
}

TEST_CASE("higher-derivative forms on the bounded carrier over 𝔽₂") {
    FieldPtr f2 = make_prime_field(2);
    ModulePtr bp = bounded_poly_module(f2, {"X", "Y"}, 1);
    CHECK(*bp->size() == 16);
    CHECK_FALSE(bp->scale_closed());
    ModulePtr dom = pair_module(bp, bp);
    CHECK(*dom->size() == 256);

    QuadraticMap q12 = higher_derivative_form(dom, bp, {"X", "Y"});
    Value xv = Value(MultiPoly::variable(f2, {"X", "Y"}, "X"));
    Value yv = Value(MultiPoly::variable(f2, {"X", "Y"}, "Y"));
    Value one = Value(MultiPoly::constant(f2, {"X", "Y"}, f2->one()));
    CHECK(q12.eval(pair_of(dom, xv, yv)) == one);         // ∂²(XY)/∂X∂Y = 1
    CHECK(q12.eval(pair_of(dom, xv, one)) == bp->zero()); // ∂²(X)/∂X∂Y = 0
    Value xy = Value(MultiPoly::variable(f2, {"X", "Y"}, "X") *
                     MultiPoly::variable(f2, {"X", "Y"}, "Y"));
    CHECK(q12.eval(pair_of(dom, xy, one)) == one);

    CHECK(axiom_check(q12, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q12, Axiom::biadditivity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(q12, Axiom::r_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    AxiomReport sb = axiom_check(q12, Axiom::s_bilinearity, AxiomMode::exhaustive);
    CHECK(sb.verdict == Verdict::fail);
    CHECK(sb.witness ==
          "pol(s·x, y) ≠ s·pol(x, y) for s = X, x = (0, 1), y = (Y, 0): "
          "pol(s·x, y) = 1, s·pol(x, y) = 0");

    // Square-scaling by a non-monomial scalar, spot-checked on inputs that
    // leave the bounded carrier: q((X+1)·X, (X+1)·Y) = (X+1)²·q(X, Y) = X²+1.
    MultiPoly X = MultiPoly::variable(f2, {"X", "Y"}, "X");
    MultiPoly Y = MultiPoly::variable(f2, {"X", "Y"}, "Y");
    MultiPoly c1 = MultiPoly::constant(f2, {"X", "Y"}, f2->one());
    MultiPoly xp1 = X + c1;
    CHECK(q12.eval(pair_of(dom, Value(xp1 * X), Value(xp1 * Y))) == Value(X * X + c1));

    // k = 0 gives the product form (F, G) ↦ FG, whose polarization
    // FG′ + F′G is honestly S-bilinear; fully swept on one variable.
    ModulePtr bx = bounded_poly_module(f2, {"X"}, 1);
    ModulePtr domx = pair_module(bx, bx);
    QuadraticMap prod = higher_derivative_form(domx, bx, {});
    for (Axiom a : {Axiom::square_scaling, Axiom::biadditivity, Axiom::r_bilinearity,
                    Axiom::s_bilinearity})
        CHECK(axiom_check(prod, a, AxiomMode::exhaustive).verdict == Verdict::pass);

    // Construction guards.
    CHECK_THROWS_AS(higher_derivative_form(dom, bp, {"X", "X"}), Error);
    CHECK_THROWS_AS(higher_derivative_form(dom, bp, {"Z"}), Error);
    CHECK_THROWS_AS(higher_derivative_form(bp, bp, {"X"}), Error);
    ModulePtr bp3 = bounded_poly_module(make_prime_field(3), {"X"}, 1);
    CHECK_THROWS_AS(higher_derivative_form(pair_module(bp3, bp3), bp3, {"X"}), Error);
}

TEST_CASE("higher-derivative forms are linearly independent: invertible evaluation matrix") {
    IndependenceReport r2 = higher_derivative_independence(2);
    CHECK(r2.n == 2);
    CHECK(r2.invertible);
    REQUIRE(r2.matrix.rows() == 4);
    FieldPtr kt = r2.matrix.field();
    // Entry (I, J) evaluates ∂_I at the pair (Π_{i∈J} T_i, 1): zero unless
    // I ⊆ J, the complementary monomial otherwise; the diagonal is 1.
    CHECK(r2.matrix.at(0, 0) == kt->one());
    CHECK(r2.matrix.at(3, 3) == kt->one());
    CHECK(r2.matrix.at(1, 0) == kt->zero());
    CHECK(r2.matrix.at(3, 0) == kt->zero());
    CHECK(r2.matrix.at(3, 1) == kt->zero());
    // ∂_{T1}(T1·T2) = T2 equals the plain evaluation of the J = {T2} monomial.
    CHECK(r2.matrix.at(1, 3) == r2.matrix.at(0, 2));
    // ∂_{T2}(T1·T2) = T1 equals the plain evaluation of the J = {T1} monomial.
    CHECK(r2.matrix.at(2, 3) == r2.matrix.at(0, 1));

    IndependenceReport r3 = higher_derivative_independence(3);
    CHECK(r3.invertible);
    CHECK(r3.matrix.rows() == 8);

    CHECK_THROWS_AS(higher_derivative_independence(4), GuardExceeded);
    CHECK_THROWS_AS(higher_derivative_independence(0), GuardExceeded);
}

TEST_CASE("the universal cross map on 𝔽₂[T]/(T⁴): S/R-quadratic but not S-bilinear") {
    FieldPtr f2 = make_prime_field(2);
    AlgPtr s = truncated_poly_algebra(f2, "T", 4);
    QPhiResult qp = q_phi(s);
    QuadraticMap cross = universal_cross_map(qp);

    CHECK(axiom_check(cross, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(cross, Axiom::biadditivity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    CHECK(axiom_check(cross, Axiom::r_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);
    AxiomReport sb = axiom_check(cross, Axiom::s_bilinearity, AxiomMode::exhaustive);
    CHECK(sb.verdict == Verdict::fail);
    CHECK(sb.witness ==
          "pol(s·x, y) ≠ s·pol(x, y) for s = T, x = (0, 1), y = (1, 0): "
          "pol(s·x, y) = (0, 0, 1, 0, 0, 0, 0, 0), s·pol(x, y) = (0, 1, 0, 0, 0, 0, 0, 0)");

    // The map vanishes on both axes and polarizes back to itself:
    // pol((x,0), (0,y)) = class(x⊗y⊗1) = q((x,y)).
    ModulePtr dom = cross.domain();
    ModulePtr salg = algebra_module(s);
    const std::uint64_t ns = *salg->size();
    REQUIRE(ns == 16);
    for (std::uint64_t i = 0; i < ns; ++i) {
        Value x = salg->element(i);
        CHECK(cross.eval(pair_of(dom, x, Value(s->zero()))) == cross.target()->zero());
        CHECK(cross.eval(pair_of(dom, Value(s->zero()), x)) == cross.target()->zero());
    }
    for (std::uint64_t i = 0; i < ns; ++i)
        for (std::uint64_t j = 0; j < ns; ++j) {
            Value x = salg->element(i);
            Value y = salg->element(j);
            CHECK(cross.polarize(pair_of(dom, x, Value(s->zero())),
                                 pair_of(dom, Value(s->zero()), y)) ==
                  cross.eval(pair_of(dom, x, y)));
        }
}

TEST_CASE("W-functionals: empty for the separable field, a 4-dimensional space for T⁴") {
    // 𝔽₄/𝔽₂ is separable: W = 0, so Hom_S(W, S) = 0 and the only functional
    // form is the zero map, which is S-bilinear.
    QPhiResult q4 = q_phi(f4_algebra());
    CHECK(q4.w.dim() == 0);
    CHECK(w_functional_basis(q4).empty());
    QuadraticMap z4 = exotic_form(q4, ExactMatrix(make_prime_field(2), q4.s->dim(), 0));
    CHECK(axiom_check(z4, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);

    FieldPtr f2 = make_prime_field(2);
    AlgPtr s = truncated_poly_algebra(f2, "T", 4);
    QPhiResult qp = q_phi(s);
    std::vector<ExactMatrix> basis = w_functional_basis(qp);
    REQUIRE(basis.size() == 4);

    // Every nonzero 𝔽₂-combination f gives a form that passes all S/R-quadratic
    // axioms exhaustively yet fails S-bilinearity; f = 0 gives the zero form.
    for (std::uint64_t mask = 1; mask < 16; ++mask) {
        ExactMatrix f(f2, qp.s->dim(), qp.w.dim());
        for (int b = 0; b < 4; ++b)
            if ((mask >> b) & 1) f = f + basis[b];
        QuadraticMap ex = exotic_form(qp, f);
        CHECK(axiom_check(ex, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
              Verdict::pass);
        CHECK(axiom_check(ex, Axiom::biadditivity, AxiomMode::exhaustive).verdict ==
              Verdict::pass);
        CHECK(axiom_check(ex, Axiom::r_bilinearity, AxiomMode::exhaustive).verdict ==
              Verdict::pass);
        CHECK(axiom_check(ex, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
              Verdict::fail);
    }
    QuadraticMap zf(exotic_form(qp, ExactMatrix(f2, qp.s->dim(), qp.w.dim())));
    CHECK(axiom_check(zf, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict ==
          Verdict::pass);

    // Wrong shape is rejected.
    CHECK_THROWS_AS(exotic_form(qp, ExactMatrix(f2, 3, 4)), Error);
    // Most single-entry matrices are not S-linear on W: the S-linear ones form
    // a 4-dimensional space inside a 16-dimensional one.
    int rejected = 0;
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            ExactMatrix e(f2, 4, 4);
            e.set(i, j, f2->one());
            try {
                exotic_form(qp, e);
            } catch (const Error&) {
                ++rejected;
            }
        }
    CHECK(rejected >= 12);
}

TEST_CASE("split_form: axes, cross term, and the reconstruction identity") {
    // Gram form x² + xy·t? on 𝔽₄ ⊕ 𝔽₄ with c00 = 1, c01 = x, c11 = 1.
    AlgPtr f4 = f4_algebra();
    QuadraticMap g = gram_form(f4, 2, {f4->unit(), f4->basis_vector(1), f4->unit()});
    SplitForm sp = split_form(g);
    CHECK(sp.reconstruction.pass);
    CHECK(sp.reconstruction.details == "verified on 16 pairs");
    // q₁(x) = x², q₂(y) = y², b(x, y) = c01·xy.
    Value u = Value(f4->unit());
    Value x1 = Value(f4->basis_vector(1));
    CHECK(sp.first.eval(u) == u);
    CHECK(sp.first.eval(x1) == Value(f4->mul(f4->basis_vector(1), f4->basis_vector(1))));
    CHECK(sp.second.eval(u) == u);
    CHECK(sp.cross(u, u) == x1); // c01·1·1 = x
    CHECK(sp.cross(x1, u) == Value(f4->mul(f4->basis_vector(1), f4->basis_vector(1))));

    // For the pure cross form the axis restrictions vanish identically and the
    // cross term recovers the whole map.
    PresentedAlgebra a4 = presented_truncated(make_prime_field(2), "T", 4);
    const AlgPtr& s4 = a4.realization;
    QuadraticMap q4 = derivation_form(a4, regular_module(s4), {s4->unit()}, "S as d/dT target");
    SplitForm sd = split_form(q4);
    CHECK(sd.reconstruction.pass);
    ModulePtr m4 = algebra_module(s4);
    ModulePtr dom4 = q4.domain();
    for (std::uint64_t i = 0; i < *m4->size(); ++i) {
        CHECK(sd.first.eval(m4->element(i)) == q4.target()->zero());
        CHECK(sd.second.eval(m4->element(i)) == q4.target()->zero());
    }
    for (std::uint64_t i = 0; i < *m4->size(); ++i)
        for (std::uint64_t j = 0; j < *m4->size(); ++j)
            CHECK(sd.cross(m4->element(i), m4->element(j)) ==
                  q4.eval(pair_of(dom4, m4->element(i), m4->element(j))));

    // Infinite domains need declared sample pairs.
    AlgPtr line = rational_line();
    QuadraticMap xy = gram_form(line, 2, {line->zero(), line->unit(), line->zero()});
    CHECK_THROWS_AS(split_form(xy), Error);
    SplitForm sxy = split_form(xy, {{alg_int(line, 2), alg_int(line, 3)},
                                    {alg_int(line, -1), alg_int(line, 5)}});
    CHECK(sxy.reconstruction.pass);
    CHECK(sxy.first.eval(alg_int(line, 2)) == Value(line->zero()));
    CHECK(sxy.cross(alg_int(line, 2), alg_int(line, 3)) == alg_int(line, 6));

    // Splitting needs a direct-sum domain.
    QuadraticMap q1 = gram_form(line, 1, {line->unit()});
    CHECK_THROWS_AS(split_form(q1), Error);
}

TEST_CASE("module mechanics: pairing guards, enumeration contracts, scalar rings") {
    FieldPtr f2 = make_prime_field(2);
    AlgPtr s = truncated_poly_algebra(f2, "T", 4);
    AlgPtr f4 = f4_algebra();

    // Direct sums require the same scalar ring on both sides.
    CHECK_THROWS_AS(pair_module(algebra_module(s), algebra_module(f4)), Error);

    // Q as a module: 2^8 elements, 2^4 scalars, element(0) = 0.
    QPhiResult qp = q_phi(s);
    ModulePtr qmod = q_phi_module(qp);
    CHECK(*qmod->size() == 256);
    CHECK(*qmod->scalar_count() == 16);
    CHECK(qmod->element(0) == qmod->zero());
    CHECK(qmod->characteristic() == 2);

    // Function-field module: infinite, with the declared base ring.
    FieldPtr kt = make_function_field(make_prime_field(3), {"T"});
    ModulePtr ff = function_field_module(kt);
    CHECK_FALSE(ff->size().has_value());
    CHECK(*ff->base_count() == 3);
    CHECK(ff->characteristic() == 3);
    CHECK_THROWS_AS(ff->element(0), Error); // not enumerable
}
