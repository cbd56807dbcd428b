#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "qflab/error.hpp"

namespace qflab {

class MultiPoly;
class RatFunc;
class Value;

using Vec = std::vector<Value>;

// One element of some ring, with the representation chosen by that ring:
//   Int   — residues in prime/table rings (and small machine integers);
//   Rat   — elements of Q (always canonicalized, see rat());
//   VecPtr  — coordinate tuples: extension-field elements, module elements;
//   PolyPtr — polynomial-ring elements;
//   FracPtr — function-field elements (reduced fractions).
// Every ring keeps its values in a canonical form, so structural equality
// (operator==) is semantic equality. The pointer alternatives are immutable
// and compared by content, not address.
class Value {
public:
    using VecPtr = std::shared_ptr<const Vec>;
    using PolyPtr = std::shared_ptr<const MultiPoly>;
    using FracPtr = std::shared_ptr<const RatFunc>;
    using Variant = std::variant<std::int64_t, mpq_class, VecPtr, PolyPtr, FracPtr>;

    Value() : v_(std::int64_t{0}) {}
    Value(std::int64_t n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
    Value(mpq_class q) : v_(std::move(q)) {}               // NOLINT(google-explicit-constructor)
    explicit Value(Vec coords) : v_(std::make_shared<const Vec>(std::move(coords))) {}
    explicit Value(MultiPoly p);
    explicit Value(RatFunc f);

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_rat() const { return std::holds_alternative<mpq_class>(v_); }
    bool is_vec() const { return std::holds_alternative<VecPtr>(v_); }
    bool is_poly() const { return std::holds_alternative<PolyPtr>(v_); }
    bool is_frac() const { return std::holds_alternative<FracPtr>(v_); }

    std::int64_t as_int() const;
    const mpq_class& as_rat() const;
    const Vec& as_vec() const;
    const MultiPoly& as_poly() const;
    const RatFunc& as_frac() const;

    bool operator==(const Value& o) const;
    bool operator!=(const Value& o) const { return !(*this == o); }

    // Total order (by alternative kind, then content); used only to make
    // iteration orders and canonical renderings deterministic.
    bool operator<(const Value& o) const;

private:
    Variant v_;
};

// The only sanctioned way to build a rational from numerator/denominator:
// mpq_class's (num, den) constructor does not canonicalize on its own and
// non-canonical fractions break structural equality.
mpq_class rat(long num, long den = 1);

} // namespace qflab
