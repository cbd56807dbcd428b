#pragma once

#include <utility>

#include "qflab/poly.hpp"

namespace qflab {

// Reduced fraction of polynomials over a coefficient field: gcd(num, den) = 1
// and den monic in its graded-lex leading coefficient. With that normal form,
// structural equality is equality of rational functions.
class RatFunc {
public:
    RatFunc(MultiPoly num, MultiPoly den);
    static RatFunc from_poly(MultiPoly p);
    static RatFunc zero(FieldPtr coeff, std::vector<std::string> vars);
    static RatFunc one(FieldPtr coeff, std::vector<std::string> vars);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    FieldPtr coeff_field() const;
    const std::vector<std::string>& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const; // throws DivisionByZero
    RatFunc operator-() const;
    RatFunc inverse() const;
    bool operator==(const RatFunc& o) const;
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    // Quotient-rule derivative, reduced.
    RatFunc derivative(const std::string& name) const;

    std::string str() const;

private:
    MultiPoly num_;
    MultiPoly den_;
};

// K(vars): field of rational functions with RatFunc values.
FieldPtr make_function_field(FieldPtr base, std::vector<std::string> vars);

// Unwrap a function-field Value; helper for code that mixes the two layers.
const RatFunc& frac_of(const Value& v);

// First-order Taylor data: F(T + S) = F(T) + F'(T)·S with S² = 0, for
// univariate F. Returns (F, F'). The pair is exactly the image of F in the
// dual-number model K(T)[S]/(S²), so (a,b)·(c,d) = (ac, ad + bc) must hold —
// callers rely on that multiplicativity.
std::pair<RatFunc, RatFunc> dual_shift(const RatFunc& f);

} // namespace qflab
