#pragma once

#include <map>
#include <string>
#include <vector>

#include "qflab/ring.hpp"

namespace qflab {

// Exponent vector for a fixed variable list. Compared graded-lexicographically
// (total degree first, then lex on exponents) — this fixes term order in
// renderings and the "leading coefficient" used for canonical fractions.
struct Monomial {
    std::vector<unsigned> exps;

    unsigned degree() const;
    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Multivariate polynomial over a coefficient ring, stored sparsely with
// canonical (zero-free) term maps. Two polynomials over the same ring and
// variable list are equal iff their term maps are structurally equal.
class MultiPoly {
public:
    using Terms = std::map<Monomial, Value, GradedLexLess>;

    MultiPoly(RingPtr coeff, std::vector<std::string> vars);
    static MultiPoly constant(RingPtr coeff, std::vector<std::string> vars, const Value& c);
    static MultiPoly variable(RingPtr coeff, std::vector<std::string> vars, const std::string& name);
    static MultiPoly from_terms(RingPtr coeff, std::vector<std::string> vars, Terms terms);

    const RingPtr& coeff_ring() const { return coeff_; }
    const std::vector<std::string>& vars() const { return vars_; }
    const Terms& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Value constant_value() const; // the coefficient of the 1-monomial
    unsigned total_degree() const; // 0 for the zero polynomial
    unsigned degree_in(const std::string& name) const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly scale(const Value& c) const;
    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // Formal partial derivative; unknown variable names are an error.
    MultiPoly derivative(const std::string& name) const;

    // Substitute point[i] for variable i, computing in an arbitrary target
    // structure. Ops must provide: one(), add(a,b), mul(a,b), and
    // scale(coeff_value, a) mapping a coefficient into the target's scalars.
    template <class Elem, class Ops>
    Elem eval(const std::vector<Elem>& point, const Ops& ops) const;

    // Plain evaluation inside the coefficient ring itself.
    Value eval_values(const std::vector<Value>& point) const;

    std::string str() const;

    // Leading data in graded-lex order (error on zero polynomial).
    const Monomial& leading_monomial() const;
    const Value& leading_coeff() const;

    size_t var_index(const std::string& name) const;

private:
    void insert_term(const Monomial& m, const Value& c); // adds, drops zeros

    RingPtr coeff_;
    std::vector<std::string> vars_;
    Terms terms_;

    friend MultiPoly poly_mul_impl(const MultiPoly&, const MultiPoly&);
};

// GCD over field coefficients, monic in graded-lex leading coefficient.
// Univariate: Euclid. Multivariate: primitive PRS on the last variable.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

// Exact division (error if the division leaves a remainder).
MultiPoly poly_exact_div(const MultiPoly& a, const MultiPoly& b);

// Univariate division with remainder over field coefficients; both outputs
// share a's ring/vars. Errors unless both are univariate in the same variable.
std::pair<MultiPoly, MultiPoly> poly_divmod(const MultiPoly& a, const MultiPoly& b);

template <class Elem, class Ops>
Elem MultiPoly::eval(const std::vector<Elem>& point, const Ops& ops) const {
    if (point.size() != vars_.size())
        throw Error("eval: point arity does not match variable count");
    bool first = true;
    Elem acc{};
    for (const auto& [mono, coeff] : terms_) {
        Elem term = ops.one();
        for (size_t i = 0; i < mono.exps.size(); ++i)
            for (unsigned e = 0; e < mono.exps[i]; ++e)
                term = ops.mul(term, point[i]);
        term = ops.scale(coeff, term);
        acc = first ? term : ops.add(acc, term);
        first = false;
    }
    if (first) {
        Elem z = ops.one();
        z = ops.scale(coeff_->zero(), z);
        return z;
    }
    return acc;
}

} // namespace qflab
