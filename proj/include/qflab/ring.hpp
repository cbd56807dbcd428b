#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qflab/value.hpp"

namespace qflab {

class Ring;
class Field;
using RingPtr = std::shared_ptr<const Ring>;
using FieldPtr = std::shared_ptr<const Field>;

// A commutative unital ring with exact element arithmetic. Implementations
// keep all values canonical, so Ring::eq is plain structural equality.
class Ring {
public:
    virtual ~Ring() = default;

    virtual std::string description() const = 0;
    virtual long characteristic() const = 0;
    virtual bool is_field() const { return false; }

    virtual Value zero() const = 0;
    virtual Value one() const = 0;
    virtual Value from_int(std::int64_t n) const = 0;

    virtual Value add(const Value& a, const Value& b) const = 0;
    virtual Value neg(const Value& a) const = 0;
    virtual Value mul(const Value& a, const Value& b) const = 0;

    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    bool is_zero(const Value& a) const { return a == zero(); }
    bool is_one(const Value& a) const { return a == one(); }
    Value pow(const Value& a, std::uint64_t n) const;

    virtual std::string str(const Value& a) const = 0;

    // Finite rings can be enumerated: element(i) for i in [0, *size()).
    // The enumeration is fixed and element(0) == zero().
    virtual std::optional<std::uint64_t> size() const { return std::nullopt; }
    virtual Value element(std::uint64_t index) const;
};

class Field : public Ring {
public:
    bool is_field() const override { return true; }
    virtual Value inv(const Value& a) const = 0; // throws DivisionByZero on 0
    Value div(const Value& a, const Value& b) const { return mul(a, inv(b)); }
};

// F_p for prime p (p is checked; values are int64 residues in [0, p)).
FieldPtr make_prime_field(std::int64_t p);

// Q, backed by GMP rationals.
FieldPtr make_rationals();

// Z, as a ring (mpq values with denominator 1). Division is not provided;
// used where integer tensor calculations have to stay over Z.
RingPtr make_integers();

// Z/m for any m >= 2 (not necessarily prime), with values stored as int64
// residues in [0, m). Enumeration runs through 0, 1, ..., m-1.
RingPtr make_cyclic_ring(std::int64_t m);

} // namespace qflab
