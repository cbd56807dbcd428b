#include "qflab/extfield.hpp"

#include <algorithm>
#include <sstream>

namespace qflab {

namespace {

// Dense univariate arithmetic over a field, trailing zeros trimmed,
// coefficient of x^i at index i. The empty vector is the zero polynomial.
using Dense = std::vector<Value>;

Dense trim(const Field& k, Dense v) {
    while (!v.empty() && k.is_zero(v.back())) v.pop_back();
    return v;
}

Dense dense_add(const Field& k, const Dense& a, const Dense& b) {
    Dense r(std::max(a.size(), b.size()), k.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
    return trim(k, std::move(r));
}

Dense dense_scale(const Field& k, const Value& c, const Dense& a) {
    Dense r;
    r.reserve(a.size());
    for (const Value& x : a) r.push_back(k.mul(c, x));
    return trim(k, std::move(r));
}

Dense dense_mul(const Field& k, const Dense& a, const Dense& b) {
    if (a.empty() || b.empty()) return {};
    Dense r(a.size() + b.size() - 1, k.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
    return trim(k, std::move(r));
}

Dense dense_sub(const Field& k, const Dense& a, const Dense& b) {
    return dense_add(k, a, dense_scale(k, k.neg(k.one()), b));
}

// a mod b and a / b for b nonzero.
std::pair<Dense, Dense> dense_divmod(const Field& k, Dense a, const Dense& b) {
    if (b.empty()) throw DivisionByZero("dense division by zero polynomial");
    Dense q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, k.zero());
    Value lead_inv = k.inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
        Value c = k.mul(a.back(), lead_inv);
        size_t shift = a.size() - b.size();
        q[shift] = k.add(q[shift], c);
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] = k.sub(a[i + shift], k.mul(c, b[i]));
        a = trim(k, std::move(a));
    }
    return {trim(k, std::move(q)), std::move(a)};
}

// Extended Euclid: returns (g, s) with s*a == g (mod m), g the monic gcd.
std::pair<Dense, Dense> dense_half_ext_gcd(const Field& k, Dense a, Dense m) {
    Dense old_r = std::move(a), r = std::move(m);
    Dense old_s = {k.one()}, s = {};
    while (!r.empty()) {
        auto [q, rem] = dense_divmod(k, old_r, r);
        old_r = std::move(r);
        r = std::move(rem);
        Dense next_s = dense_sub(k, old_s, dense_mul(k, q, s));
        old_s = std::move(s);
        s = std::move(next_s);
    }
    if (old_r.empty()) throw DivisionByZero("gcd with zero");
    Value inv_lead = k.inv(old_r.back());
    return {dense_scale(k, inv_lead, old_r), dense_scale(k, inv_lead, old_s)};
}

bool has_root(const Field& k, const std::vector<Value>& coeffs, const Value& x) {
    Value acc = k.zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = k.add(k.mul(acc, x), *it);
    return k.is_zero(acc);
}

std::vector<long> positive_divisors(long n) {
    n = std::abs(n);
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i != n / i) d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

// No-roots irreducibility for degree 2 and 3. Exhaustive over finite bases;
// rational-root theorem over Q.
bool no_roots(const FieldPtr& base, const std::vector<Value>& coeffs) {
    if (auto n = base->size()) {
        for (std::uint64_t i = 0; i < *n; ++i)
            if (has_root(*base, coeffs, base->element(i))) return false;
        return true;
    }
    if (base->characteristic() != 0 || base->description() != "Q")
        throw Error("irreducibility check not available over " + base->description());
    // Clear denominators to integer coefficients.
    mpz_class lcm_den = 1;
    for (const Value& c : coeffs) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(),
                                          c.as_rat().get_den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const Value& c : coeffs) {
        mpq_class q = c.as_rat() * mpq_class(lcm_den);
        ic.push_back(q.get_num());
    }
    if (ic.front() == 0) return false; // 0 is a root
    if (!ic.front().fits_slong_p() || !ic.back().fits_slong_p())
        throw Error("irreducibility check overflow; pass assume_irreducible");
    for (long p : positive_divisors(ic.front().get_si()))
        for (long q : positive_divisors(ic.back().get_si()))
            for (int sign : {1, -1}) {
                Value cand{rat(sign * p, q)};
                if (has_root(*base, coeffs, cand)) return false;
            }
    return true;
}

class ExtensionFieldImpl final : public ExtensionField {
public:
    ExtensionFieldImpl(FieldPtr base, std::string var, std::vector<Value> modulus, bool assume)
        : base_(std::move(base)), var_(std::move(var)), modulus_(std::move(modulus)) {
        if (modulus_.size() < 2) throw Error("modulus must have degree at least 1");
        deg_ = modulus_.size() - 1;
        if (!base_->is_one(modulus_.back())) throw Error("modulus must be monic");
        if (deg_ <= 3) {
            if (deg_ >= 2 && !no_roots(base_, modulus_))
                throw Error("modulus has a root in the base field, not irreducible");
            verified_ = true;
        } else if (!assume) {
            throw Error("irreducibility check only runs up to degree 3; pass assume_irreducible");
        }
        mod_dense_ = Dense(modulus_.begin(), modulus_.end());
    }

    FieldPtr base() const override { return base_; }
    size_t degree() const override { return deg_; }
    const std::string& var() const override { return var_; }
    const std::vector<Value>& modulus() const override { return modulus_; }
    bool irreducibility_verified() const override { return verified_; }

    Value generator() const override {
        Vec c(deg_, base_->zero());
        if (deg_ >= 2)
            c[1] = base_->one();
        else {
            // degree-1 "extension": x maps to -constant term
            c[0] = base_->neg(modulus_[0]);
        }
        return Value(std::move(c));
    }

    std::string description() const override {
        std::ostringstream os;
        os << base_->description() << "[" << var_ << "]/(";
        bool first = true;
        for (size_t i = modulus_.size(); i-- > 0;) {
            if (base_->is_zero(modulus_[i])) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0 || !base_->is_one(modulus_[i])) os << base_->str(modulus_[i]);
            if (i > 0 && !base_->is_one(modulus_[i])) os << "*";
            if (i == 1) os << var_;
            if (i > 1) os << var_ << "^" << i;
        }
        os << ")";
        return os.str();
    }

    long characteristic() const override { return base_->characteristic(); }

    Value zero() const override { return Value(Vec(deg_, base_->zero())); }
    Value one() const override {
        Vec c(deg_, base_->zero());
        c[0] = base_->one();
        return Value(std::move(c));
    }
    Value from_int(std::int64_t n) const override {
        Vec c(deg_, base_->zero());
        c[0] = base_->from_int(n);
        return Value(std::move(c));
    }

    Value add(const Value& a, const Value& b) const override {
        const Vec& x = a.as_vec();
        const Vec& y = b.as_vec();
        Vec r(deg_);
        for (size_t i = 0; i < deg_; ++i) r[i] = base_->add(x[i], y[i]);
        return Value(std::move(r));
    }
    Value neg(const Value& a) const override {
        const Vec& x = a.as_vec();
        Vec r(deg_);
        for (size_t i = 0; i < deg_; ++i) r[i] = base_->neg(x[i]);
        return Value(std::move(r));
    }
    Value mul(const Value& a, const Value& b) const override {
        Dense p = dense_mul(*base_, to_dense(a), to_dense(b));
        auto [q, rem] = dense_divmod(*base_, std::move(p), mod_dense_);
        return from_dense(rem);
    }
    Value inv(const Value& a) const override {
        Dense x = to_dense(a);
        if (x.empty()) throw DivisionByZero("inverse of 0 in " + description());
        auto [g, s] = dense_half_ext_gcd(*base_, x, mod_dense_);
        if (g.size() != 1) throw Error("modulus is not irreducible: gcd has positive degree");
        auto [q, rem] = dense_divmod(*base_, std::move(s), mod_dense_);
        return from_dense(rem);
    }

    std::string str(const Value& a) const override {
        const Vec& x = a.as_vec();
        std::ostringstream os;
        bool first = true;
        for (size_t i = deg_; i-- > 0;) {
            if (base_->is_zero(x[i])) continue;
            if (!first) os << " + ";
            first = false;
            std::string cs = base_->str(x[i]);
            if (i == 0) {
                os << cs;
                continue;
            }
            if (!base_->is_one(x[i])) os << cs << "*";
            os << var_;
            if (i > 1) os << "^" << i;
        }
        if (first) os << "0";
        return os.str();
    }

    std::optional<std::uint64_t> size() const override {
        auto b = base_->size();
        if (!b) return std::nullopt;
        std::uint64_t n = 1;
        for (size_t i = 0; i < deg_; ++i) n *= *b;
        return n;
    }

    Value element(std::uint64_t index) const override {
        auto b = base_->size();
        if (!b) throw Error(description() + " is not enumerable");
        Vec c(deg_);
        for (size_t i = 0; i < deg_; ++i) {
            c[i] = base_->element(index % *b);
            index /= *b;
        }
        if (index != 0) throw Error("element index out of range");
        return Value(std::move(c));
    }

private:
    Dense to_dense(const Value& a) const {
        Dense d(a.as_vec().begin(), a.as_vec().end());
        return trim(*base_, std::move(d));
    }
    Value from_dense(const Dense& d) const {
        Vec c(deg_, base_->zero());
        for (size_t i = 0; i < d.size(); ++i) c[i] = d[i];
        return Value(std::move(c));
    }

    FieldPtr base_;
    std::string var_;
    std::vector<Value> modulus_;
    Dense mod_dense_;
    size_t deg_ = 0;
    bool verified_ = false;
};

} // namespace

Value ExtensionField::from_coords(Vec coords) const {
    if (coords.size() != degree()) throw Error("coordinate tuple has wrong length");
    return Value(std::move(coords));
}

ExtFieldPtr make_extension_field(FieldPtr base, std::string var,
                                 std::vector<Value> modulus_coeffs, bool assume_irreducible) {
    return std::make_shared<ExtensionFieldImpl>(std::move(base), std::move(var),
                                                std::move(modulus_coeffs), assume_irreducible);
}

} // namespace qflab
