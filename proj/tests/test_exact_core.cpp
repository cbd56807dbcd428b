#include <doctest.h>

#include <random>

#include "qflab/extfield.hpp"
#include "qflab/exterior.hpp"
#include "qflab/poly.hpp"
#include "qflab/ratfunc.hpp"
#include "qflab/ring.hpp"

using namespace qflab;

namespace {

MultiPoly var(const RingPtr& k, const std::vector<std::string>& vars, const std::string& n) {
    return MultiPoly::variable(k, vars, n);
}

MultiPoly cpoly(const RingPtr& k, const std::vector<std::string>& vars, std::int64_t c) {
    return MultiPoly::constant(k, vars, k->from_int(c));
}

// Deterministic random polynomial: total degree <= maxdeg per variable bound.
MultiPoly random_poly(const RingPtr& k, const std::vector<std::string>& vars, unsigned maxdeg,
                      std::mt19937_64& rng) {
    MultiPoly p(k, vars);
    std::uniform_int_distribution<unsigned> nterms(1, 4);
    std::uniform_int_distribution<unsigned> expd(0, maxdeg);
    std::uniform_int_distribution<std::int64_t> coeff(-4, 4);
    unsigned t = nterms(rng);
    for (unsigned i = 0; i < t; ++i) {
        Monomial m{std::vector<unsigned>(vars.size(), 0)};
        for (auto& e : m.exps) e = expd(rng);
        p = p + MultiPoly::from_terms(k, vars, {{m, k->from_int(coeff(rng))}});
    }
    return p;
}

} // namespace

TEST_CASE("prime field arithmetic and axioms on full samples") {
    for (std::int64_t p : {2, 3, 5}) {
        auto k = make_prime_field(p);
        CHECK(k->characteristic() == p);
        CHECK(*k->size() == static_cast<std::uint64_t>(p));
        // inverses of every nonzero element
        for (std::int64_t a = 1; a < p; ++a)
            CHECK(k->mul(k->element(a), k->inv(k->element(a))) == k->one());
        // associativity + distributivity across the whole cube
        for (std::int64_t a = 0; a < p; ++a)
            for (std::int64_t b = 0; b < p; ++b)
                for (std::int64_t c = 0; c < p; ++c) {
                    Value x = k->element(a), y = k->element(b), z = k->element(c);
                    CHECK(k->mul(k->mul(x, y), z) == k->mul(x, k->mul(y, z)));
                    CHECK(k->mul(x, k->add(y, z)) == k->add(k->mul(x, y), k->mul(x, z)));
                }
    }
    CHECK(make_prime_field(7)->from_int(-1) == Value(std::int64_t{6}));
    CHECK_THROWS_AS(make_prime_field(6), Error);
    CHECK_THROWS_AS(make_prime_field(2)->inv(Value(std::int64_t{0})), DivisionByZero);
}

TEST_CASE("rational canonicalization") {
    auto q = make_rationals();
    CHECK(rat(2, 6) == rat(1, 3));
    CHECK(q->add(Value(rat(1, 3)), Value(rat(1, 6))) == Value(rat(1, 2)));
    CHECK(q->mul(Value(rat(2, 3)), Value(rat(3, 2))) == q->one());
    CHECK(q->inv(Value(rat(-2, 5))) == Value(rat(-5, 2)));
    CHECK(q->str(Value(rat(-5, 2))) == "-5/2");
    CHECK_THROWS_AS(rat(1, 0), DivisionByZero);
    CHECK_THROWS_AS(q->inv(q->zero()), DivisionByZero);
}

TEST_CASE("polynomial derivative: power rule and characteristic quirks") {
    auto q = make_rationals();
    auto f2 = make_prime_field(2);

    // d(T^3)/dT = 3T^2 over Q
    std::vector<std::string> tv{"T"};
    MultiPoly t3 = var(q, tv, "T") * var(q, tv, "T") * var(q, tv, "T");
    CHECK(t3.derivative("T") == cpoly(q, tv, 3) * var(q, tv, "T") * var(q, tv, "T"));
    CHECK(t3.derivative("T").str() == "3*T^2");

    // d(X^2 Y)/dX = 2XY = 0 over F2
    std::vector<std::string> xy{"X", "Y"};
    MultiPoly x = var(f2, xy, "X"), y = var(f2, xy, "Y");
    CHECK((x * x * y).derivative("X").is_zero());

    // mixed partial of XY over F2 is 1
    CHECK((x * y).derivative("X").derivative("Y") == cpoly(f2, xy, 1));

    CHECK_THROWS_AS(t3.derivative("Z"), Error);
}

TEST_CASE("Leibniz rule on random polynomials, characteristics 0, 2, 3") {
    std::mt19937_64 rng(20260815);
    std::vector<RingPtr> rings{make_rationals(), make_prime_field(2), make_prime_field(3)};
    std::vector<std::string> vars{"X", "Y", "Z"};
    for (const auto& k : rings) {
        for (int rep = 0; rep < 20; ++rep) {
            MultiPoly f = random_poly(k, vars, 3, rng);
            MultiPoly g = random_poly(k, vars, 3, rng);
            for (const auto& v : vars) {
                MultiPoly lhs = (f * g).derivative(v);
                MultiPoly rhs = f.derivative(v) * g + f * g.derivative(v);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("polynomial canonical form: zero terms dropped, rendering stable") {
    auto q = make_rationals();
    std::vector<std::string> tv{"T"};
    MultiPoly a = cpoly(q, tv, 3) * var(q, tv, "T") * var(q, tv, "T") + cpoly(q, tv, 2);
    CHECK(a.str() == "3*T^2 + 2");
    MultiPoly diff = a - a;
    CHECK(diff.is_zero());
    CHECK(diff.terms().empty()); // no zero coefficients stored
    // adding zero is the identity, twice-normalized equals once
    CHECK(a + diff == a);
    MultiPoly b = MultiPoly::from_terms(q, tv, {{Monomial{{1}}, q->zero()}});
    CHECK(b.is_zero());
}

TEST_CASE("univariate divmod and gcd") {
    auto q = make_rationals();
    std::vector<std::string> tv{"T"};
    MultiPoly t = var(q, tv, "T");
    MultiPoly a = t * t * t - t; // T^3 - T
    MultiPoly b = t * t - cpoly(q, tv, 1);
    auto [quo, rem] = poly_divmod(a, b);
    CHECK(quo == t);
    CHECK(rem.is_zero());
    CHECK(poly_gcd(a, b) == b); // T^2 - 1 is monic
    // multivariate gcd
    std::vector<std::string> xy{"X", "Y"};
    MultiPoly x = var(q, xy, "X"), y = var(q, xy, "Y");
    MultiPoly g = x + y;
    MultiPoly f1 = g * (x - y);
    MultiPoly f2 = g * (x * x + y);
    CHECK(poly_gcd(f1, f2) == g);
    CHECK(poly_exact_div(f1, g) == x - y);
    CHECK_THROWS_AS(poly_exact_div(x * x + y, x + y), Error);
}

TEST_CASE("rational function arithmetic is canonical") {
    auto q = make_rationals();
    std::vector<std::string> tv{"T"};
    MultiPoly t = var(q, tv, "T");
    RatFunc invT(cpoly(q, tv, 1), t);

    SUBCASE("derivative of 1/T over Q is -1/T^2") {
        RatFunc d = invT.derivative("T");
        CHECK(d == RatFunc(cpoly(q, tv, -1), t * t));
        CHECK(d.str() == "-1/T^2");
    }
    SUBCASE("derivative of 1/T over F2 is 1/T^2") {
        auto f2 = make_prime_field(2);
        MultiPoly t2 = var(f2, tv, "T");
        RatFunc invT2(cpoly(f2, tv, 1), t2);
        CHECK(invT2.derivative("T") == RatFunc(cpoly(f2, tv, 1), t2 * t2));
    }
    SUBCASE("(F/G)*(G/F) = 1 for F = T^2+1, G = T") {
        MultiPoly f = t * t + cpoly(q, tv, 1);
        RatFunc fg(f, t), gf(t, f);
        CHECK(fg * gf == RatFunc::one(q, tv));
    }
    SUBCASE("reduction happens on construction") {
        // (T^2 - 1)/(T - 1) = T + 1
        RatFunc r(t * t - cpoly(q, tv, 1), t - cpoly(q, tv, 1));
        CHECK(r == RatFunc::from_poly(t + cpoly(q, tv, 1)));
        // denominator is made monic: 1/(2T) has den T, num 1/2
        RatFunc h(cpoly(q, tv, 1), cpoly(q, tv, 2) * t);
        CHECK(h.den() == t);
        CHECK(h.num() == MultiPoly::constant(q, tv, Value(rat(1, 2))));
    }
    CHECK_THROWS_AS(RatFunc(t, MultiPoly(q, tv)), DivisionByZero);
    CHECK_THROWS_AS(RatFunc::zero(q, tv).inverse(), DivisionByZero);
}

TEST_CASE("extension fields: forced products and the repeated-squaring oracle") {
    auto f2 = make_prime_field(2);
    auto f3 = make_prime_field(3);
    auto q = make_rationals();

    SUBCASE("F4 = F2[x]/(x^2+x+1): x*x = x+1") {
        auto f4 = make_extension_field(f2, "x", {f2->one(), f2->one(), f2->one()});
        Value x = f4->generator();
        CHECK(f4->mul(x, x) == f4->add(x, f4->one()));
        CHECK(*f4->size() == 4);
        CHECK(f4->irreducibility_verified());
        // every nonzero element inverts
        for (std::uint64_t i = 1; i < 4; ++i) {
            Value a = f4->element(i);
            CHECK(f4->mul(a, f4->inv(a)) == f4->one());
        }
    }
    SUBCASE("Q[x]/(x^2+1): x*x = -1") {
        auto qi = make_extension_field(q, "x", {q->one(), q->zero(), q->one()});
        Value i = qi->generator();
        CHECK(qi->mul(i, i) == qi->from_int(-1));
        CHECK(!qi->size().has_value());
    }
    SUBCASE("F9 = F3[x]/(x^2+1): x^4 = 1 by repeated squaring") {
        auto f9 = make_extension_field(f3, "x", {f3->one(), f3->zero(), f3->one()});
        Value x = f9->generator();
        // oracle: square twice
        Value x2 = f9->mul(x, x);
        CHECK(x2 == f9->from_int(-1));
        Value x4 = f9->mul(x2, x2);
        CHECK(x4 == f9->one());
        CHECK(f9->pow(x, 4) == x4);
        CHECK(*f9->size() == 9);
    }
    SUBCASE("reducible moduli are rejected") {
        // x^2 - 1 over Q has root 1
        CHECK_THROWS_AS(make_extension_field(q, "x", {q->from_int(-1), q->zero(), q->one()}),
                        Error);
        // x^2 + 1 over F2 has root 1
        CHECK_THROWS_AS(make_extension_field(f2, "x", {f2->one(), f2->zero(), f2->one()}), Error);
    }
    SUBCASE("degree 4 requires a caller assertion and records it") {
        std::vector<Value> quartic{f2->one(), f2->one(), f2->zero(), f2->zero(), f2->one()};
        CHECK_THROWS_AS(make_extension_field(f2, "x", quartic), Error);
        auto f16 = make_extension_field(f2, "x", quartic, /*assume_irreducible=*/true);
        CHECK(!f16->irreducibility_verified());
        CHECK(*f16->size() == 16);
    }
    SUBCASE("F8 enumeration is exhaustive and distinct") {
        auto f8 = make_extension_field(f2, "x", {f2->one(), f2->one(), f2->zero(), f2->one()});
        std::vector<Value> all;
        for (std::uint64_t i = 0; i < 8; ++i) all.push_back(f8->element(i));
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j) CHECK(all[i] != all[j]);
    }
}

TEST_CASE("dual_shift: Taylor pairs and the dual-number ring homomorphism") {
    auto q = make_rationals();
    auto f2 = make_prime_field(2);
    auto f3 = make_prime_field(3);
    std::vector<std::string> tv{"T"};

    auto dual_mul = [](const std::pair<RatFunc, RatFunc>& a,
                       const std::pair<RatFunc, RatFunc>& b) {
        return std::pair<RatFunc, RatFunc>{a.first * b.first,
                                           a.first * b.second + a.second * b.first};
    };

    SUBCASE("T^2 over Q gives (T^2, 2T); over F2 gives (T^2, 0)") {
        MultiPoly t = var(q, tv, "T");
        auto [v, s] = dual_shift(RatFunc::from_poly(t * t));
        CHECK(v == RatFunc::from_poly(t * t));
        CHECK(s == RatFunc::from_poly(cpoly(q, tv, 2) * t));
        MultiPoly t2 = var(f2, tv, "T");
        auto [v2, s2] = dual_shift(RatFunc::from_poly(t2 * t2));
        CHECK(s2.is_zero());
        CHECK(v2 == RatFunc::from_poly(t2 * t2));
    }
    SUBCASE("1/T: (1/T, -1/T^2), and (1/T - S/T^2)(T + S) = 1 in dual numbers") {
        MultiPoly t = var(q, tv, "T");
        RatFunc invT(cpoly(q, tv, 1), t);
        auto d = dual_shift(invT);
        CHECK(d.first == invT);
        CHECK(d.second == RatFunc(cpoly(q, tv, -1), t * t));
        auto tdual = dual_shift(RatFunc::from_poly(t)); // (T, 1)
        auto prod = dual_mul(d, tdual);
        CHECK(prod.first == RatFunc::one(q, tv));
        CHECK(prod.second.is_zero());
    }
    SUBCASE("homomorphism on random inputs over Q and F3") {
        std::mt19937_64 rng(77);
        for (const RingPtr& kk : std::vector<RingPtr>{q, f3}) {
            auto k = std::dynamic_pointer_cast<const Field>(kk);
            for (int rep = 0; rep < 12; ++rep) {
                MultiPoly a = random_poly(k, tv, 3, rng), b = random_poly(k, tv, 3, rng);
                if (b.is_zero()) b = cpoly(k, tv, 1);
                RatFunc f = RatFunc(a, b);
                RatFunc g = RatFunc::from_poly(random_poly(k, tv, 2, rng));
                auto df = dual_shift(f), dg = dual_shift(g);
                auto dsum = dual_shift(f + g);
                CHECK(dsum.first == df.first + dg.first);
                CHECK(dsum.second == df.second + dg.second);
                auto dprod = dual_shift(f * g);
                auto expect = dual_mul(df, dg);
                CHECK(dprod.first == expect.first);
                CHECK(dprod.second == expect.second);
            }
        }
    }
}

TEST_CASE("square-zero generators: (S1+S2)^2 is 2*S1*S2, or 0 in characteristic 2") {
    auto q = make_rationals();
    auto f2 = make_prime_field(2);
    std::vector<std::string> gens{"S1", "S2"};

    ExteriorElement s1 = ExteriorElement::generator(q, gens, 0);
    ExteriorElement s2 = ExteriorElement::generator(q, gens, 1);
    ExteriorElement sum = s1 + s2;
    CHECK(sum * sum == (s1 * s2).scale(q->from_int(2)));
    CHECK((s1 * s1).is_zero());

    ExteriorElement t1 = ExteriorElement::generator(f2, gens, 0);
    ExteriorElement t2 = ExteriorElement::generator(f2, gens, 1);
    ExteriorElement fsum = t1 + t2;
    CHECK((fsum * fsum).is_zero());

    SUBCASE("inverse via nilpotent geometric series") {
        ExteriorElement one = ExteriorElement::scalar(q, gens, q->one());
        ExteriorElement u = one + s1 + (s1 * s2).scale(q->from_int(3));
        CHECK(u * u.inverse() == one);
        CHECK_THROWS_AS(s1.inverse(), DivisionByZero);
    }
}
