#include "qflab/ring.hpp"

#include <sstream>

namespace qflab {

Value Ring::pow(const Value& a, std::uint64_t n) const {
    Value result = one();
    Value base = a;
    while (n > 0) {
        if (n & 1) result = mul(result, base);
        base = mul(base, base);
        n >>= 1;
    }
    return result;
}

Value Ring::element(std::uint64_t) const {
    throw Error(description() + " is not enumerable");
}

namespace {

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

class PrimeField final : public Field {
public:
    explicit PrimeField(std::int64_t p) : p_(p) {
        if (!is_prime(p)) throw Error("modulus " + std::to_string(p) + " is not prime");
    }

    std::string description() const override { return "F" + std::to_string(p_); }
    long characteristic() const override { return static_cast<long>(p_); }

    Value zero() const override { return Value(std::int64_t{0}); }
    Value one() const override { return Value(std::int64_t{1}); }
    Value from_int(std::int64_t n) const override {
        std::int64_t r = n % p_;
        if (r < 0) r += p_;
        return Value(r);
    }

    Value add(const Value& a, const Value& b) const override {
        return Value((a.as_int() + b.as_int()) % p_);
    }
    Value neg(const Value& a) const override {
        return a.as_int() == 0 ? zero() : Value(p_ - a.as_int());
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value((a.as_int() * b.as_int()) % p_);
    }
    Value inv(const Value& a) const override {
        std::int64_t x = a.as_int();
        if (x == 0) throw DivisionByZero("inverse of 0 in " + description());
        // Extended Euclid on (x, p).
        std::int64_t t = 0, new_t = 1, r = p_, new_r = x;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t -= q * new_t;
            std::swap(t, new_t);
            r -= q * new_r;
            std::swap(r, new_r);
        }
        if (t < 0) t += p_;
        return Value(t);
    }

    std::string str(const Value& a) const override { return std::to_string(a.as_int()); }

    std::optional<std::uint64_t> size() const override { return static_cast<std::uint64_t>(p_); }
    Value element(std::uint64_t i) const override {
        if (i >= static_cast<std::uint64_t>(p_)) throw Error("element index out of range");
        return Value(static_cast<std::int64_t>(i));
    }

private:
    std::int64_t p_;
};

class Rationals final : public Field {
public:
    std::string description() const override { return "Q"; }
    long characteristic() const override { return 0; }

    Value zero() const override { return Value(mpq_class(0)); }
    Value one() const override { return Value(mpq_class(1)); }
    Value from_int(std::int64_t n) const override { return Value(mpq_class(static_cast<long>(n))); }

    Value add(const Value& a, const Value& b) const override {
        return Value(mpq_class(a.as_rat() + b.as_rat()));
    }
    Value neg(const Value& a) const override { return Value(mpq_class(-a.as_rat())); }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpq_class(a.as_rat() * b.as_rat()));
    }
    Value inv(const Value& a) const override {
        if (a.as_rat() == 0) throw DivisionByZero("inverse of 0 in Q");
        return Value(mpq_class(1 / a.as_rat()));
    }

    std::string str(const Value& a) const override {
        std::ostringstream os;
        os << a.as_rat();
        return os.str();
    }
};

class CyclicRing final : public Ring {
public:
    explicit CyclicRing(std::int64_t m) : m_(m) {
        if (m < 2) throw Error("cyclic ring modulus must be at least 2");
    }

    std::string description() const override { return "Z/" + std::to_string(m_); }
    long characteristic() const override { return static_cast<long>(m_); }

    Value zero() const override { return Value(std::int64_t{0}); }
    Value one() const override { return Value(std::int64_t{1}); }
    Value from_int(std::int64_t n) const override {
        std::int64_t r = n % m_;
        if (r < 0) r += m_;
        return Value(r);
    }

    Value add(const Value& a, const Value& b) const override {
        return Value((a.as_int() + b.as_int()) % m_);
    }
    Value neg(const Value& a) const override {
        return a.as_int() == 0 ? zero() : Value(m_ - a.as_int());
    }
    Value mul(const Value& a, const Value& b) const override {
        return Value((a.as_int() * b.as_int()) % m_);
    }

    std::string str(const Value& a) const override { return std::to_string(a.as_int()); }

    std::optional<std::uint64_t> size() const override { return static_cast<std::uint64_t>(m_); }
    Value element(std::uint64_t i) const override {
        if (i >= static_cast<std::uint64_t>(m_)) throw Error("element index out of range");
        return Value(static_cast<std::int64_t>(i));
    }

private:
    std::int64_t m_;
};

class Integers final : public Ring {
public:
    std::string description() const override { return "Z"; }
    long characteristic() const override { return 0; }

    Value zero() const override { return Value(mpq_class(0)); }
    Value one() const override { return Value(mpq_class(1)); }
    Value from_int(std::int64_t n) const override { return Value(mpq_class(static_cast<long>(n))); }

    Value add(const Value& a, const Value& b) const override {
        return Value(mpq_class(a.as_rat() + b.as_rat()));
    }
    Value neg(const Value& a) const override { return Value(mpq_class(-a.as_rat())); }
    Value mul(const Value& a, const Value& b) const override {
        return Value(mpq_class(a.as_rat() * b.as_rat()));
    }

    std::string str(const Value& a) const override {
        std::ostringstream os;
        os << a.as_rat();
        return os.str();
    }
};

} // namespace

FieldPtr make_prime_field(std::int64_t p) { return std::make_shared<PrimeField>(p); }
FieldPtr make_rationals() { return std::make_shared<Rationals>(); }
RingPtr make_integers() { return std::make_shared<Integers>(); }
RingPtr make_cyclic_ring(std::int64_t m) { return std::make_shared<CyclicRing>(m); }

} // namespace qflab
