#include "qflab/value.hpp"

#include "qflab/poly.hpp"
#include "qflab/ratfunc.hpp"

namespace qflab {

Value::Value(MultiPoly p) : v_(std::make_shared<const MultiPoly>(std::move(p))) {}
Value::Value(RatFunc f) : v_(std::make_shared<const RatFunc>(std::move(f))) {}

std::int64_t Value::as_int() const {
    if (!is_int()) throw Error("value is not an integer residue");
    return std::get<std::int64_t>(v_);
}

const mpq_class& Value::as_rat() const {
    if (!is_rat()) throw Error("value is not a rational");
    return std::get<mpq_class>(v_);
}

const Vec& Value::as_vec() const {
    if (!is_vec()) throw Error("value is not a coordinate tuple");
    return *std::get<VecPtr>(v_);
}

const MultiPoly& Value::as_poly() const {
    if (!is_poly()) throw Error("value is not a polynomial");
    return *std::get<PolyPtr>(v_);
}

const RatFunc& Value::as_frac() const {
    if (!is_frac()) throw Error("value is not a rational function");
    return *std::get<FracPtr>(v_);
}

bool Value::operator==(const Value& o) const {
    if (v_.index() != o.v_.index()) return false;
    switch (v_.index()) {
        case 0: return std::get<std::int64_t>(v_) == std::get<std::int64_t>(o.v_);
        case 1: return std::get<mpq_class>(v_) == std::get<mpq_class>(o.v_);
        case 2: return *std::get<VecPtr>(v_) == *std::get<VecPtr>(o.v_);
        case 3: return *std::get<PolyPtr>(v_) == *std::get<PolyPtr>(o.v_);
        case 4: return *std::get<FracPtr>(v_) == *std::get<FracPtr>(o.v_);
    }
    return false;
}

namespace {

template <typename T>
int cmp3(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int value_cmp(const Value& a, const Value& b);

int vec_cmp(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return cmp3(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i)
        if (int c = value_cmp(a[i], b[i])) return c;
    return 0;
}

int poly_cmp(const MultiPoly& a, const MultiPoly& b) {
    // Deterministic, not mathematically meaningful: compare rendered form.
    return cmp3(a.str(), b.str());
}

int value_cmp(const Value& a, const Value& b) {
    auto kind = [](const Value& v) {
        return v.is_int() ? 0 : v.is_rat() ? 1 : v.is_vec() ? 2 : v.is_poly() ? 3 : 4;
    };
    if (kind(a) != kind(b)) return cmp3(kind(a), kind(b));
    if (a.is_int()) return cmp3(a.as_int(), b.as_int());
    if (a.is_rat()) return cmp(a.as_rat(), b.as_rat()) < 0 ? -1 : (cmp(a.as_rat(), b.as_rat()) > 0 ? 1 : 0);
    if (a.is_vec()) return vec_cmp(a.as_vec(), b.as_vec());
    if (a.is_poly()) return poly_cmp(a.as_poly(), b.as_poly());
    return cmp3(a.as_frac().str(), b.as_frac().str());
}

} // namespace

bool Value::operator<(const Value& o) const { return value_cmp(*this, o) < 0; }

mpq_class rat(long num, long den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

} // namespace qflab
