#include "qflab/poly.hpp"

#include <algorithm>
#include <sstream>

namespace qflab {

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (unsigned e : exps) d += e;
    return d;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    size_t n = std::max(a.exps.size(), b.exps.size());
    for (size_t i = 0; i < n; ++i) {
        unsigned ea = i < a.exps.size() ? a.exps[i] : 0;
        unsigned eb = i < b.exps.size() ? b.exps[i] : 0;
        if (ea != eb) return ea < eb;
    }
    return false;
}

MultiPoly::MultiPoly(RingPtr coeff, std::vector<std::string> vars)
    : coeff_(std::move(coeff)), vars_(std::move(vars)) {}

MultiPoly MultiPoly::constant(RingPtr coeff, std::vector<std::string> vars, const Value& c) {
    MultiPoly p(std::move(coeff), std::move(vars));
    p.insert_term(Monomial{std::vector<unsigned>(p.vars_.size(), 0)}, c);
    return p;
}

MultiPoly MultiPoly::variable(RingPtr coeff, std::vector<std::string> vars, const std::string& name) {
    MultiPoly p(coeff, std::move(vars));
    Monomial m{std::vector<unsigned>(p.vars_.size(), 0)};
    m.exps[p.var_index(name)] = 1;
    p.insert_term(m, coeff->one());
    return p;
}

MultiPoly MultiPoly::from_terms(RingPtr coeff, std::vector<std::string> vars, Terms terms) {
    MultiPoly p(std::move(coeff), std::move(vars));
    for (const auto& [m, c] : terms) p.insert_term(m, c);
    return p;
}

size_t MultiPoly::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw Error("unknown variable '" + name + "'");
    return static_cast<size_t>(it - vars_.begin());
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

Value MultiPoly::constant_value() const {
    if (terms_.empty()) return coeff_->zero();
    Monomial unit{std::vector<unsigned>(vars_.size(), 0)};
    auto it = terms_.find(unit);
    return it == terms_.end() ? coeff_->zero() : it->second;
}

unsigned MultiPoly::total_degree() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

unsigned MultiPoly::degree_in(const std::string& name) const {
    size_t i = var_index(name);
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exps[i]);
    return d;
}

void MultiPoly::insert_term(const Monomial& m, const Value& c) {
    if (coeff_->is_zero(c)) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        Value s = coeff_->add(it->second, c);
        if (coeff_->is_zero(s))
            terms_.erase(it);
        else
            it->second = s;
    }
}

namespace {

void require_same_layout(const MultiPoly& a, const MultiPoly& b) {
    if (a.coeff_ring()->description() != b.coeff_ring()->description() || a.vars() != b.vars())
        throw Error("polynomial operands live in different rings");
}

} // namespace

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    require_same_layout(*this, o);
    MultiPoly r(coeff_, vars_);
    r.terms_ = terms_;
    for (const auto& [m, c] : o.terms_) r.insert_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(coeff_, vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, coeff_->neg(c));
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    require_same_layout(*this, o);
    MultiPoly r(coeff_, vars_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m{std::vector<unsigned>(vars_.size(), 0)};
            for (size_t i = 0; i < vars_.size(); ++i) m.exps[i] = ma.exps[i] + mb.exps[i];
            r.insert_term(m, coeff_->mul(ca, cb));
        }
    }
    return r;
}

MultiPoly MultiPoly::scale(const Value& c) const {
    MultiPoly r(coeff_, vars_);
    for (const auto& [m, t] : terms_) r.insert_term(m, coeff_->mul(c, t));
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    return coeff_->description() == o.coeff_->description() && vars_ == o.vars_ && terms_ == o.terms_;
}

MultiPoly MultiPoly::derivative(const std::string& name) const {
    size_t i = var_index(name);
    MultiPoly r(coeff_, vars_);
    for (const auto& [m, c] : terms_) {
        if (m.exps[i] == 0) continue;
        Monomial d = m;
        d.exps[i] -= 1;
        r.insert_term(d, coeff_->mul(c, coeff_->from_int(static_cast<std::int64_t>(m.exps[i]))));
    }
    return r;
}

Value MultiPoly::eval_values(const std::vector<Value>& point) const {
    struct RingOps {
        const Ring& r;
        Value one() const { return r.one(); }
        Value add(const Value& a, const Value& b) const { return r.add(a, b); }
        Value mul(const Value& a, const Value& b) const { return r.mul(a, b); }
        Value scale(const Value& c, const Value& a) const { return r.mul(c, a); }
    };
    return eval(point, RingOps{*coeff_});
}

const Monomial& MultiPoly::leading_monomial() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->first;
}

const Value& MultiPoly::leading_coeff() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->second;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        const auto& [m, c] = *it;
        std::string mono;
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (m.exps[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (m.exps[i] > 1) mono += "^" + std::to_string(m.exps[i]);
        }
        std::string cs = coeff_->str(c);
        bool simple = cs.find('+') == std::string::npos && cs.find('*') == std::string::npos &&
                      cs.find(' ') == std::string::npos;
        if (mono.empty()) {
            os << (simple ? cs : "(" + cs + ")");
        } else if (coeff_->is_one(c)) {
            os << mono;
        } else {
            os << (simple ? cs : "(" + cs + ")") << "*" << mono;
        }
    }
    return os.str();
}

// ---- division and gcd ----------------------------------------------------

namespace {

// Does mb divide ma componentwise?
bool mono_divides(const Monomial& mb, const Monomial& ma) {
    for (size_t i = 0; i < mb.exps.size(); ++i)
        if (mb.exps[i] > ma.exps[i]) return false;
    return true;
}

Monomial mono_div(const Monomial& ma, const Monomial& mb) {
    Monomial m = ma;
    for (size_t i = 0; i < m.exps.size(); ++i) m.exps[i] -= mb.exps[i];
    return m;
}

const Field& field_of(const MultiPoly& p) {
    const auto* f = dynamic_cast<const Field*>(p.coeff_ring().get());
    if (!f) throw Error("operation requires field coefficients");
    return *f;
}

MultiPoly monic(const MultiPoly& p) {
    if (p.is_zero()) return p;
    const Field& k = field_of(p);
    return p.scale(k.inv(p.leading_coeff()));
}

// Coefficient of x_v^k, as a polynomial in the same layout with x_v-degree 0.
MultiPoly coeff_of_power(const MultiPoly& p, size_t v, unsigned k) {
    MultiPoly::Terms terms;
    for (const auto& [m, c] : p.terms()) {
        if (m.exps[v] != k) continue;
        Monomial stripped = m;
        stripped.exps[v] = 0;
        terms.emplace(stripped, c);
    }
    return MultiPoly::from_terms(p.coeff_ring(), p.vars(), terms);
}

unsigned degree_in_index(const MultiPoly& p, size_t v) {
    unsigned d = 0;
    for (const auto& [m, c] : p.terms()) d = std::max(d, m.exps[v]);
    return d;
}

MultiPoly times_power(const MultiPoly& p, size_t v, unsigned k) {
    MultiPoly::Terms terms;
    for (const auto& [m, c] : p.terms()) {
        Monomial shifted = m;
        shifted.exps[v] += k;
        terms.emplace(shifted, c);
    }
    return MultiPoly::from_terms(p.coeff_ring(), p.vars(), terms);
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b, size_t var_count);

// gcd of the x_v-coefficients of p (a polynomial of x_v-degree 0).
MultiPoly content_wrt(const MultiPoly& p, size_t v, size_t var_count) {
    MultiPoly g(p.coeff_ring(), p.vars());
    for (unsigned k = 0; k <= degree_in_index(p, v); ++k) {
        MultiPoly c = coeff_of_power(p, v, k);
        if (!c.is_zero()) g = gcd_rec(g, c, var_count);
    }
    return g;
}

// Pseudo-remainder of a by b viewed as univariate in x_v (b nonzero there).
MultiPoly pseudo_rem(MultiPoly a, const MultiPoly& b, size_t v) {
    unsigned db = degree_in_index(b, v);
    MultiPoly lb = coeff_of_power(b, v, db);
    while (!a.is_zero() && degree_in_index(a, v) >= db) {
        unsigned da = degree_in_index(a, v);
        MultiPoly la = coeff_of_power(a, v, da);
        a = a * lb - times_power(la, v, da - db) * b;
    }
    return a;
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b, size_t var_count) {
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (var_count == 0) return monic(MultiPoly::constant(a.coeff_ring(), a.vars(), a.coeff_ring()->one()));

    size_t v = var_count - 1;
    if (degree_in_index(a, v) == 0 && degree_in_index(b, v) == 0)
        return gcd_rec(a, b, var_count - 1);

    MultiPoly ca = content_wrt(a, v, var_count - 1);
    MultiPoly cb = content_wrt(b, v, var_count - 1);
    MultiPoly pa = poly_exact_div(a, ca);
    MultiPoly pb = poly_exact_div(b, cb);
    MultiPoly cg = gcd_rec(ca, cb, var_count - 1);

    // Primitive polynomial-remainder sequence in x_v.
    while (!pb.is_zero()) {
        MultiPoly r = pseudo_rem(pa, pb, v);
        pa = pb;
        if (r.is_zero()) {
            pb = r;
        } else {
            MultiPoly cr = content_wrt(r, v, var_count - 1);
            pb = poly_exact_div(r, cr);
        }
    }
    return monic(cg * pa);
}

} // namespace

MultiPoly poly_exact_div(const MultiPoly& a, const MultiPoly& b) {
    require_same_layout(a, b);
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    const Field& k = field_of(a);
    MultiPoly q(a.coeff_ring(), a.vars());
    MultiPoly r = a;
    while (!r.is_zero()) {
        const Monomial& mr = r.leading_monomial();
        const Monomial& mb = b.leading_monomial();
        if (!mono_divides(mb, mr)) throw Error("polynomial division is not exact");
        Monomial mq = mono_div(mr, mb);
        Value cq = k.div(r.leading_coeff(), b.leading_coeff());
        MultiPoly t = MultiPoly::from_terms(a.coeff_ring(), a.vars(), {{mq, cq}});
        q = q + t;
        r = r - t * b;
    }
    return q;
}

std::pair<MultiPoly, MultiPoly> poly_divmod(const MultiPoly& a, const MultiPoly& b) {
    require_same_layout(a, b);
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    size_t active = a.vars().size();
    size_t used = 0, vi = 0;
    for (size_t i = 0; i < active; ++i) {
        if (a.degree_in(a.vars()[i]) > 0 || b.degree_in(b.vars()[i]) > 0) {
            ++used;
            vi = i;
        }
    }
    if (used > 1) throw Error("divmod requires univariate polynomials");
    const Field& k = field_of(a);
    MultiPoly q(a.coeff_ring(), a.vars());
    MultiPoly r = a;
    unsigned db = degree_in_index(b, vi);
    while (!r.is_zero() && degree_in_index(r, vi) >= db) {
        unsigned dr = degree_in_index(r, vi);
        Value cq = k.div(r.leading_coeff(), b.leading_coeff());
        Monomial m{std::vector<unsigned>(a.vars().size(), 0)};
        m.exps[vi] = dr - db;
        MultiPoly t = MultiPoly::from_terms(a.coeff_ring(), a.vars(), {{m, cq}});
        q = q + t;
        r = r - t * b;
    }
    return {q, r};
}

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    require_same_layout(a, b);
    field_of(a); // gcd is only defined here over field coefficients
    return gcd_rec(a, b, a.vars().size());
}

} // namespace qflab
