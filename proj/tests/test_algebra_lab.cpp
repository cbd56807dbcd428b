#include <doctest.h>

#include "qflab/algebra_lab.hpp"

using namespace qflab;

namespace {

AlgPtr f4_algebra() {
    // F4 = F2[x]/(x² + x + 1)
    auto f2 = make_prime_field(2);
    return algebra_from_extension(make_extension_field(f2, "x", {f2->one(), f2->one(), f2->one()}));
}

AlgPtr f8_algebra() {
    // F8 = F2[x]/(x³ + x + 1)
    auto f2 = make_prime_field(2);
    return algebra_from_extension(
        make_extension_field(f2, "x", {f2->one(), f2->one(), f2->zero(), f2->one()}));
}

AlgPtr f9_algebra() {
    // F9 = F3[x]/(x² + 1)
    auto f3 = make_prime_field(3);
    return algebra_from_extension(
        make_extension_field(f3, "x", {f3->one(), f3->zero(), f3->one()}));
}

AlgPtr gaussian_algebra() {
    // Q(i) = Q[x]/(x² + 1)
    auto q = make_rationals();
    return algebra_from_extension(
        make_extension_field(q, "x", {q->one(), q->zero(), q->one()}));
}

bool has_passing_check(const std::vector<NamedCheck>& checks, const std::string& name) {
    for (const NamedCheck& c : checks)
        if (c.name == name) return c.pass;
    return false;
}

} // namespace

TEST_CASE("tensor square: dimensions, multiplication map, and one structure constant") {
    // dim 1 base case: S = R, so the multiplication map is injective
    auto triv = trivial_algebra(make_rationals());
    TensorSquare t_triv = tensor_square(triv);
    CHECK(t_triv.t2->dim() == 1);
    CHECK(t_triv.mult_kernel.dim() == 0);

    AlgPtr f4 = f4_algebra();
    TensorSquare t4 = tensor_square(f4);
    CHECK(t4.t2->dim() == 4);
    CHECK(t4.mult_kernel.dim() == 2);

    AlgPtr qi = gaussian_algebra();
    TensorSquare tqi = tensor_square(qi);
    CHECK(tqi.t2->dim() == 4);
    CHECK(tqi.mult_kernel.dim() == 2);

    // In F4 with x² = x + 1: (x⊗1)(x⊗x) = x²⊗x = 1⊗x + x⊗x.
    auto f2 = make_prime_field(2);
    const Vec& prod = t4.t2->basis_product(t4.pair_index(1, 0), t4.pair_index(1, 1));
    Vec expected(4, f2->zero());
    expected[t4.pair_index(0, 1)] = f2->one();
    expected[t4.pair_index(1, 1)] = f2->one();
    CHECK(prod == expected);

    // mu really is the multiplication: mu(x⊗x) = x² = 1 + x.
    Vec xx(4, f2->zero());
    xx[t4.pair_index(1, 1)] = f2->one();
    Vec mu_xx = t4.mu.apply(xx);
    CHECK(mu_xx == Vec{f2->one(), f2->one()});
}

TEST_CASE("diagonal subalgebra equals the flip-fixed subspace in the flat catalog") {
    struct Row {
        AlgPtr s;
        size_t delta_dim;
    };
    std::vector<Row> rows;
    rows.push_back({trivial_algebra(make_rationals()), 1});
    rows.push_back({f4_algebra(), 3});
    rows.push_back({gaussian_algebra(), 3});
    rows.push_back({truncated_poly_algebra(make_rationals(), "T", 3), 6});
    rows.push_back({truncated_poly_algebra(make_prime_field(2), "T", 4), 10});

    for (const Row& row : rows) {
        CAPTURE(row.s->dim());
        TensorSquare ts = tensor_square(row.s);
        FlatnessReport rep = flatness_comparison(ts);
        CHECK(rep.delta_dim == row.delta_dim);
        CHECK(rep.fixed_dim == row.delta_dim);
        CHECK(rep.equal);
    }
}

TEST_CASE("q_phi: W vanishes for the separable quartet and matches the truncated examples") {
    struct Row {
        AlgPtr s;
        size_t q_dim;
        size_t w_dim;
    };
    std::vector<Row> rows;
    rows.push_back({f4_algebra(), 2, 0});
    rows.push_back({gaussian_algebra(), 2, 0});
    rows.push_back({f9_algebra(), 2, 0});
    rows.push_back({f8_algebra(), 3, 0});
    rows.push_back({truncated_poly_algebra(make_rationals(), "T", 3), 5, 2});
    rows.push_back({truncated_poly_algebra(make_prime_field(2), "T", 4), 8, 4});

    for (const Row& row : rows) {
        CAPTURE(row.s->dim());
        QPhiResult q = q_phi(row.s);
        CHECK(q.q->dim() == row.q_dim);
        CHECK(q.w.dim() == row.w_dim);
        CHECK(q.q->dim() == row.s->dim() + q.w.dim());
        NamedCheck star = equation_star_check(q);
        CHECK(star.pass);
        // augmentation ∘ section = identity on S is asserted at construction;
        // spot-check it anyway through the public matrices.
        CHECK(q.augmentation * q.section == ExactMatrix::identity(row.s->base(), row.s->dim()));
    }
}

TEST_CASE("q_phi: splitting, last-slot action, and the characteristic-2 symmetry") {
    auto q_field = make_rationals();
    AlgPtr s = truncated_poly_algebra(q_field, "T", 3);
    QPhiResult q = q_phi(s);

    // w := class(1⊗T⊗1 − 1⊗1⊗T) is killed by the augmentation.
    Vec one = s->unit();
    Vec t = s->basis_vector(1);
    Vec w_elt = q.q->sub(q.tensor_class(one, t, one), q.tensor_class(one, one, t));
    CHECK(!q.q->is_zero(w_elt));
    Vec img = q.augmentation.apply(w_elt);
    CHECK(s->is_zero(img));
    CHECK(q.w.contains_vector(w_elt));

    // Splitting roundtrip: q_elt = section(aug(q_elt)) + (W-part from coords).
    Vec q_elt = q.tensor_class(t, t, one);
    Vec coords = q.w_coords(q_elt);
    Vec rebuilt = q.section.apply(q.augmentation.apply(q_elt));
    for (size_t i = 0; i < coords.size(); ++i)
        rebuilt = q.q->add(rebuilt, q.q->scale(coords[i], q.w.basis_vector(i)));
    CHECK(rebuilt == q_elt);

    // Multiplying by class(1⊗1⊗T) fills the last slot.
    Vec lhs = q.s_mult(t, q.tensor_class(one, t, one));
    CHECK(lhs == q.tensor_class(one, t, t));

    // Characteristic 2 specialization: class(s⊗s′⊗1) = class(s′⊗s⊗1).
    AlgPtr s2 = truncated_poly_algebra(make_prime_field(2), "T", 4);
    QPhiResult q2 = q_phi(s2);
    Vec u2 = s2->unit();
    for (size_t i = 0; i < s2->dim(); ++i)
        for (size_t j = i + 1; j < s2->dim(); ++j)
            CHECK(q2.tensor_class(s2->basis_vector(i), s2->basis_vector(j), u2) ==
                  q2.tensor_class(s2->basis_vector(j), s2->basis_vector(i), u2));
}

TEST_CASE("(S⊗S)/I² presentation agrees with the direct construction away from 2") {
    struct Row {
        AlgPtr s;
        size_t model_dim;
    };
    std::vector<Row> rows;
    rows.push_back({trivial_algebra(make_rationals()), 1});
    rows.push_back({gaussian_algebra(), 2});
    rows.push_back({f9_algebra(), 2});
    rows.push_back({truncated_poly_algebra(make_rationals(), "T", 3), 5});

    for (const Row& row : rows) {
        CAPTURE(row.s->dim());
        QPhiResult q = q_phi(row.s);
        ModelResult m = i_squared_model(q);
        CHECK(m.model->dim() == row.model_dim);
        CHECK(m.w_dim == q.w.dim());
        CHECK(m.pass());
        CHECK(has_passing_check(m.checks, "mutually-inverse"));
        CHECK(has_passing_check(m.checks, "to-model-ring-map"));
        CHECK(has_passing_check(m.checks, "from-model-ring-map"));
        CHECK(has_passing_check(m.checks, "over-s"));
        CHECK(has_passing_check(m.checks, "under-s"));
    }

    QPhiResult q2 = q_phi(f4_algebra());
    CHECK_THROWS_AS(i_squared_model(q2), Error);
}

TEST_CASE("(S⊗S)/J presentation agrees with the direct construction at 2") {
    struct Row {
        AlgPtr s;
        size_t model_dim;
    };
    std::vector<Row> rows;
    rows.push_back({f4_algebra(), 2});
    rows.push_back({f8_algebra(), 3});
    rows.push_back({truncated_poly_algebra(make_prime_field(2), "T", 4), 8});

    for (const Row& row : rows) {
        CAPTURE(row.s->dim());
        QPhiResult q = q_phi(row.s);
        ModelResult m = frobenius_model(q);
        CHECK(m.model->dim() == row.model_dim);
        CHECK(m.w_dim == q.w.dim());
        CHECK(m.pass());
    }

    QPhiResult q0 = q_phi(gaussian_algebra());
    CHECK_THROWS_AS(frobenius_model(q0), Error);
}

TEST_CASE("independent oracle: S ⊗ over its square-subalgebra for F2[T]/T^4") {
    // S = F2[T]/T⁴ is free of rank 2 over B = span{1, T²}, so the balanced
    // tensor square S⊗_B S has dimension 2·2·dim B = 8. Build that balanced
    // quotient from scratch — no shared code with frobenius_model's ideal J —
    // and compare dimensions.
    auto f2 = make_prime_field(2);
    AlgPtr s = truncated_poly_algebra(f2, "T", 4);
    size_t n = s->dim();

    std::vector<Vec> b_basis;
    b_basis.push_back(s->unit());
    b_basis.push_back(s->basis_vector(2)); // T²
    Subspace b_span = mult_closure(*s, b_basis);
    CHECK(b_span.dim() == 2);

    std::vector<Vec> balanced;
    for (size_t g = 0; g < b_span.dim(); ++g) {
        Vec b = b_span.basis_vector(g);
        for (size_t i = 0; i < n; ++i) {
            Vec bei = s->mul(b, s->basis_vector(i));
            for (size_t j = 0; j < n; ++j) {
                Vec bej = s->mul(b, s->basis_vector(j));
                Vec v(n * n, f2->zero());
                for (size_t p = 0; p < n; ++p) v[p * n + j] = f2->add(v[p * n + j], bei[p]);
                for (size_t q = 0; q < n; ++q) v[i * n + q] = f2->sub(v[i * n + q], bej[q]);
                balanced.push_back(std::move(v));
            }
        }
    }
    Subspace span = Subspace::from_vectors(f2, n * n, balanced);
    CHECK(n * n - span.dim() == 8);

    QPhiResult q = q_phi(s);
    ModelResult m = frobenius_model(q);
    CHECK(m.model->dim() == n * n - span.dim());
}

TEST_CASE("epimorphism test: identity, field inclusions, squares") {
    AlgPtr f4 = f4_algebra();
    auto f2 = make_prime_field(2);

    // Identity map: the subring generated by all of S is S itself.
    {
        std::vector<Vec> gens;
        for (size_t i = 0; i < f4->dim(); ++i) gens.push_back(f4->basis_vector(i));
        EpimorphismReport rep = epimorphism_check(f4, gens);
        CHECK(rep.subring_dim == 2);
        CHECK(rep.tensor_dim == 2);
        CHECK(rep.epi);
    }

    // F2 → F4: dim F4⊗F4 over F2 is 4 ≠ 2.
    {
        EpimorphismReport rep = epimorphism_check(f4, {});
        CHECK(rep.subring_dim == 1);
        CHECK(rep.tensor_dim == 4);
        CHECK(!rep.epi);
    }

    // Q → Q(i): same failure in characteristic 0.
    {
        EpimorphismReport rep = epimorphism_check(gaussian_algebra(), {});
        CHECK(rep.tensor_dim == 4);
        CHECK(!rep.epi);
    }

    // F4 is generated by its squares: x² already generates the whole field.
    {
        Vec x = f4->basis_vector(1);
        EpimorphismReport rep = epimorphism_check(f4, {f4->mul(x, x)});
        CHECK(rep.subring_dim == 2);
        CHECK(rep.epi);
    }

    // F2[T]/T⁴ over its squares subalgebra span{1, T²}: not an epimorphism.
    {
        AlgPtr s = truncated_poly_algebra(f2, "T", 4);
        Vec t = s->basis_vector(1);
        EpimorphismReport rep = epimorphism_check(s, {s->mul(t, t)});
        CHECK(rep.subring_dim == 2);
        CHECK(rep.tensor_dim == 8);
        CHECK(rep.s_dim == 4);
        CHECK(!rep.epi);
    }
}

TEST_CASE("square-zero model identities across characteristics") {
    // characteristic 0: conjugate sum/product and the unit expansion
    {
        ModelIdentityReport rep = exterior_model_check(1, 0);
        CHECK(rep.pass());
        CHECK(has_passing_check(rep.checks, "sum-of-conjugates"));
        CHECK(has_passing_check(rep.checks, "product-of-conjugates"));
        bool found_insep = false;
        for (const NamedCheck& c : rep.checks)
            if (c.name.rfind("inseparable", 0) == 0) found_insep = true;
        CHECK(!found_insep); // only meaningful in characteristic p
    }
    // characteristic p ∈ {2, 3}: (T−S)^p − (T+S)^p = −2S^p = 0
    {
        ModelIdentityReport rep2 = exterior_model_check(1, 2);
        CHECK(rep2.pass());
        CHECK(has_passing_check(rep2.checks, "inseparable-relation-p2"));
        ModelIdentityReport rep3 = exterior_model_check(1, 3);
        CHECK(rep3.pass());
        CHECK(has_passing_check(rep3.checks, "inseparable-relation-p3"));
    }
    // characteristic 2, several variables: (1⊗Tᵢ + Tᵢ⊗1)² = 0 without the
    // elements themselves collapsing
    {
        for (unsigned n : {1u, 2u, 3u}) {
            ModelIdentityReport rep = exterior_model_check(n, 2);
            CAPTURE(n);
            CHECK(rep.pass());
            CHECK(has_passing_check(rep.checks,
                                    "square-balanced-relation-T1"));
            if (n >= 2) CHECK(has_passing_check(rep.checks, "square-balanced-cross-term-nonzero"));
        }
    }
}
