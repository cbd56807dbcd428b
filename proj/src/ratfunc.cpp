#include "qflab/ratfunc.hpp"

#include <sstream>

namespace qflab {

namespace {

const Field& field_of(const MultiPoly& p) {
    const auto* f = dynamic_cast<const Field*>(p.coeff_ring().get());
    if (!f) throw Error("rational functions need field coefficients");
    return *f;
}

} // namespace

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    const Field& k = field_of(num_);
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = MultiPoly::constant(num_.coeff_ring(), num_.vars(), k.one());
        return;
    }
    MultiPoly g = poly_gcd(num_, den_);
    num_ = poly_exact_div(num_, g);
    den_ = poly_exact_div(den_, g);
    Value lead = k.inv(den_.leading_coeff());
    num_ = num_.scale(lead);
    den_ = den_.scale(lead);
}

RatFunc RatFunc::from_poly(MultiPoly p) {
    MultiPoly one = MultiPoly::constant(p.coeff_ring(), p.vars(), p.coeff_ring()->one());
    return RatFunc(std::move(p), std::move(one));
}

RatFunc RatFunc::zero(FieldPtr coeff, std::vector<std::string> vars) {
    return from_poly(MultiPoly(std::move(coeff), std::move(vars)));
}

RatFunc RatFunc::one(FieldPtr coeff, std::vector<std::string> vars) {
    MultiPoly p = MultiPoly::constant(coeff, std::move(vars), coeff->one());
    return from_poly(std::move(p));
}

FieldPtr RatFunc::coeff_field() const {
    return std::dynamic_pointer_cast<const Field>(num_.coeff_ring());
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw DivisionByZero("inverse of the zero rational function");
    return RatFunc(den_, num_);
}

bool RatFunc::operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

RatFunc RatFunc::derivative(const std::string& name) const {
    MultiPoly dn = num_.derivative(name), dd = den_.derivative(name);
    return RatFunc(dn * den_ - num_ * dd, den_ * den_);
}

std::string RatFunc::str() const {
    if (den_.is_constant() && num_.coeff_ring()->is_one(den_.constant_value())) return num_.str();
    auto wrap = [](const MultiPoly& p) {
        std::string s = p.str();
        if (s.find('+') != std::string::npos || s.find(' ') != std::string::npos) return "(" + s + ")";
        return s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

namespace {

class FunctionField final : public Field {
public:
    FunctionField(FieldPtr base, std::vector<std::string> vars)
        : base_(std::move(base)), vars_(std::move(vars)) {
        if (vars_.empty()) throw Error("function field needs at least one variable");
    }

    std::string description() const override {
        std::string s = base_->description() + "(";
        for (size_t i = 0; i < vars_.size(); ++i) s += (i ? "," : "") + vars_[i];
        return s + ")";
    }
    long characteristic() const override { return base_->characteristic(); }

    Value zero() const override { return Value(RatFunc::zero(base_, vars_)); }
    Value one() const override { return Value(RatFunc::one(base_, vars_)); }
    Value from_int(std::int64_t n) const override {
        return Value(RatFunc::from_poly(
            MultiPoly::constant(base_, vars_, base_->from_int(n))));
    }

    Value add(const Value& a, const Value& b) const override {
        return Value(a.as_frac() + b.as_frac());
    }
    Value neg(const Value& a) const override { return Value(-a.as_frac()); }
    Value mul(const Value& a, const Value& b) const override {
        return Value(a.as_frac() * b.as_frac());
    }
    Value inv(const Value& a) const override { return Value(a.as_frac().inverse()); }

    std::string str(const Value& a) const override { return a.as_frac().str(); }

private:
    FieldPtr base_;
    std::vector<std::string> vars_;
};

} // namespace

FieldPtr make_function_field(FieldPtr base, std::vector<std::string> vars) {
    return std::make_shared<FunctionField>(std::move(base), std::move(vars));
}

const RatFunc& frac_of(const Value& v) { return v.as_frac(); }

std::pair<RatFunc, RatFunc> dual_shift(const RatFunc& f) {
    if (f.vars().size() != 1) throw Error("dual_shift expects a univariate function");
    return {f, f.derivative(f.vars()[0])};
}

} // namespace qflab
