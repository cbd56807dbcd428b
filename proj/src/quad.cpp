#include "qflab/quad.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace qflab {

namespace {

constexpr std::uint64_t kMaxDomain = 4096;          // elements in an exhaustive sweep
constexpr std::uint64_t kMaxSquareOps = std::uint64_t{1} << 22;
constexpr std::uint64_t kMaxTripleOps = std::uint64_t{1} << 25;
constexpr std::uint64_t kMaxDirectBilinear = std::uint64_t{1} << 20;
constexpr std::uint64_t kMaxTargetClosure = std::uint64_t{1} << 16;
constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 16;

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    const std::uint64_t cap = std::uint64_t{1} << 62;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return std::nullopt;
        r *= base;
    }
    return r;
}

// Coordinate tuple of length `len` over a finite field, decoded from a mixed-
// radix index (coordinate 0 is the least significant digit). Index 0 is the
// zero tuple.
Value coords_element(const FieldPtr& k, size_t len, std::uint64_t index) {
    const std::uint64_t q = *k->size();
    Vec v(len, k->zero());
    for (size_t c = 0; c < len; ++c) {
        v[c] = k->element(index % q);
        index /= q;
    }
    return Value(std::move(v));
}

std::string coords_str(const FieldPtr& k, const Vec& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += k->str(v[i]);
    }
    return out + ")";
}

std::string algebra_scalar_desc(const AlgPtr& s) {
    return s->base()->description() + "-algebra[" + join(s->labels(), ",") + "]";
}

// ---------------------------------------------------------------------------
// Module implementations
// ---------------------------------------------------------------------------

class AlgebraModule final : public QuadModule {
public:
    explicit AlgebraModule(AlgPtr s) : s_(std::move(s)) {}

    std::string description() const override {
        return "S as a module over itself, S = " + algebra_scalar_desc(s_);
    }
    long characteristic() const override { return s_->base()->characteristic(); }

    Value zero() const override { return Value(s_->zero()); }
    Value add(const Value& a, const Value& b) const override {
        return Value(s_->add(a.as_vec(), b.as_vec()));
    }
    Value neg(const Value& a) const override { return Value(s_->neg(a.as_vec())); }
    std::string str(const Value& a) const override { return s_->str(a.as_vec()); }

    std::optional<std::uint64_t> size() const override {
        auto q = s_->base()->size();
        if (!q) return std::nullopt;
        return checked_pow(*q, s_->dim());
    }
    Value element(std::uint64_t index) const override {
        return coords_element(s_->base(), s_->dim(), index);
    }

    std::string scalar_description() const override { return algebra_scalar_desc(s_); }
    Value scale(const Value& s, const Value& x) const override {
        return Value(s_->mul(s.as_vec(), x.as_vec()));
    }
    Value scalar_mul(const Value& a, const Value& b) const override {
        return Value(s_->mul(a.as_vec(), b.as_vec()));
    }
    std::string scalar_str(const Value& s) const override { return s_->str(s.as_vec()); }
    std::optional<std::uint64_t> scalar_count() const override { return size(); }
    Value scalar_element(std::uint64_t index) const override { return element(index); }
    std::optional<std::uint64_t> base_count() const override { return s_->base()->size(); }
    Value base_element(std::uint64_t index) const override {
        return Value(s_->scale(s_->base()->element(index), s_->unit()));
    }

    std::vector<Value> basis() const override {
        std::vector<Value> b;
        for (size_t c = 0; c < s_->dim(); ++c) b.push_back(Value(s_->basis_vector(c)));
        return b;
    }
    std::vector<Value> scalar_basis() const override { return basis(); }
    std::vector<Value> base_scalar_basis() const override { return {Value(s_->unit())}; }

private:
    AlgPtr s_;
};

class ActionModule final : public QuadModule {
public:
    ActionModule(AlgPtr s, ModuleAction act, std::string what)
        : s_(std::move(s)), act_(std::move(act)), what_(std::move(what)) {
        if (act_.action.size() != s_->dim())
            throw Error("module action needs one matrix per algebra basis element");
        for (const auto& m : act_.action)
            if (m.rows() != act_.dim || m.cols() != act_.dim)
                throw Error("module action matrices have the wrong shape");
    }

    std::string description() const override {
        return what_ + " (dim " + std::to_string(act_.dim) + " over " +
               s_->base()->description() + ")";
    }
    long characteristic() const override { return s_->base()->characteristic(); }

    Value zero() const override { return Value(Vec(act_.dim, s_->base()->zero())); }
    Value add(const Value& a, const Value& b) const override {
        const auto& k = s_->base();
        const Vec& av = a.as_vec();
        const Vec& bv = b.as_vec();
        Vec r(act_.dim, k->zero());
        for (size_t i = 0; i < act_.dim; ++i) r[i] = k->add(av[i], bv[i]);
        return Value(std::move(r));
    }
    Value neg(const Value& a) const override {
        const auto& k = s_->base();
        const Vec& av = a.as_vec();
        Vec r(act_.dim, k->zero());
        for (size_t i = 0; i < act_.dim; ++i) r[i] = k->neg(av[i]);
        return Value(std::move(r));
    }
    std::string str(const Value& a) const override { return coords_str(s_->base(), a.as_vec()); }

    std::optional<std::uint64_t> size() const override {
        auto q = s_->base()->size();
        if (!q) return std::nullopt;
        return checked_pow(*q, act_.dim);
    }
    Value element(std::uint64_t index) const override {
        return coords_element(s_->base(), act_.dim, index);
    }

    std::string scalar_description() const override { return algebra_scalar_desc(s_); }
    Value scale(const Value& s, const Value& x) const override {
        const auto& k = s_->base();
        const Vec& sv = s.as_vec();
        const Vec& xv = x.as_vec();
        Vec r(act_.dim, k->zero());
        for (size_t t = 0; t < s_->dim(); ++t) {
            if (k->is_zero(sv[t])) continue;
            Vec ax = act_.action[t].apply(xv);
            for (size_t i = 0; i < act_.dim; ++i) r[i] = k->add(r[i], k->mul(sv[t], ax[i]));
        }
        return Value(std::move(r));
    }
    Value scalar_mul(const Value& a, const Value& b) const override {
        return Value(s_->mul(a.as_vec(), b.as_vec()));
    }
    std::string scalar_str(const Value& s) const override { return s_->str(s.as_vec()); }
    std::optional<std::uint64_t> scalar_count() const override {
        auto q = s_->base()->size();
        if (!q) return std::nullopt;
        return checked_pow(*q, s_->dim());
    }
    Value scalar_element(std::uint64_t index) const override {
        return coords_element(s_->base(), s_->dim(), index);
    }
    std::optional<std::uint64_t> base_count() const override { return s_->base()->size(); }
    Value base_element(std::uint64_t index) const override {
        return Value(s_->scale(s_->base()->element(index), s_->unit()));
    }

    std::vector<Value> basis() const override {
        std::vector<Value> b;
        for (size_t i = 0; i < act_.dim; ++i) {
            Vec v(act_.dim, s_->base()->zero());
            v[i] = s_->base()->one();
            b.push_back(Value(std::move(v)));
        }
        return b;
    }
    std::vector<Value> scalar_basis() const override {
        std::vector<Value> b;
        for (size_t t = 0; t < s_->dim(); ++t) b.push_back(Value(s_->basis_vector(t)));
        return b;
    }
    std::vector<Value> base_scalar_basis() const override { return {Value(s_->unit())}; }

private:
    AlgPtr s_;
    ModuleAction act_;
    std::string what_;
};

class FunctionFieldModule final : public QuadModule {
public:
    explicit FunctionFieldModule(FieldPtr kt) : kt_(std::move(kt)) {
        Value zv = kt_->zero();
        coeff_ = zv.as_frac().coeff_field();
        vars_ = zv.as_frac().vars();
    }

    std::string description() const override {
        return kt_->description() + " as a module over itself";
    }
    long characteristic() const override { return kt_->characteristic(); }

    Value zero() const override { return kt_->zero(); }
    Value add(const Value& a, const Value& b) const override { return kt_->add(a, b); }
    Value neg(const Value& a) const override { return kt_->neg(a); }
    std::string str(const Value& a) const override { return kt_->str(a); }

    std::string scalar_description() const override { return kt_->description(); }
    Value scale(const Value& s, const Value& x) const override { return kt_->mul(s, x); }
    Value scalar_mul(const Value& a, const Value& b) const override { return kt_->mul(a, b); }
    std::string scalar_str(const Value& s) const override { return kt_->str(s); }

    std::optional<std::uint64_t> base_count() const override { return coeff_->size(); }
    Value base_element(std::uint64_t index) const override {
        return Value(RatFunc::from_poly(
            MultiPoly::constant(coeff_, vars_, coeff_->element(index))));
    }
    std::vector<Value> base_scalar_basis() const override { return {kt_->one()}; }

private:
    FieldPtr kt_;
    FieldPtr coeff_;
    std::vector<std::string> vars_;
};

class BoundedPolyModule final : public QuadModule {
public:
    BoundedPolyModule(FieldPtr coeff, std::vector<std::string> vars, unsigned cap)
        : coeff_(std::move(coeff)), vars_(std::move(vars)), cap_(cap) {
        if (!coeff_->size())
            throw Error("bounded polynomial modules need a finite coefficient field");
        // All exponent tuples with every entry <= cap, variable 0 fastest.
        const size_t nv = vars_.size();
        std::vector<unsigned> exps(nv, 0);
        while (true) {
            monomials_.push_back(Monomial{exps});
            size_t c = 0;
            while (c < nv && exps[c] == cap_) exps[c++] = 0;
            if (c == nv) break;
            ++exps[c];
        }
    }

    std::string description() const override {
        return coeff_->description() + "[" + join(vars_, ",") + "], degree at most " +
               std::to_string(cap_) + " in each variable";
    }
    long characteristic() const override { return coeff_->characteristic(); }

    Value zero() const override { return Value(MultiPoly(coeff_, vars_)); }
    Value add(const Value& a, const Value& b) const override {
        return Value(a.as_poly() + b.as_poly());
    }
    Value neg(const Value& a) const override { return Value(-a.as_poly()); }
    std::string str(const Value& a) const override { return a.as_poly().str(); }

    std::optional<std::uint64_t> size() const override {
        return checked_pow(*coeff_->size(), monomials_.size());
    }
    Value element(std::uint64_t index) const override {
        const std::uint64_t q = *coeff_->size();
        MultiPoly::Terms terms;
        for (const auto& m : monomials_) {
            Value c = coeff_->element(index % q);
            index /= q;
            if (!coeff_->is_zero(c)) terms.emplace(m, std::move(c));
        }
        return Value(MultiPoly::from_terms(coeff_, vars_, std::move(terms)));
    }

    std::string scalar_description() const override {
        return coeff_->description() + "[" + join(vars_, ",") + "]";
    }
    Value scale(const Value& s, const Value& x) const override {
        return Value(s.as_poly() * x.as_poly());
    }
    Value scalar_mul(const Value& a, const Value& b) const override {
        return Value(a.as_poly() * b.as_poly());
    }
    std::string scalar_str(const Value& s) const override { return s.as_poly().str(); }
    std::optional<std::uint64_t> scalar_count() const override { return size(); }
    Value scalar_element(std::uint64_t index) const override { return element(index); }
    std::optional<std::uint64_t> base_count() const override { return coeff_->size(); }
    Value base_element(std::uint64_t index) const override {
        return Value(MultiPoly::constant(coeff_, vars_, coeff_->element(index)));
    }

    std::vector<Value> basis() const override {
        std::vector<Value> b;
        for (const auto& m : monomials_) {
            MultiPoly::Terms terms;
            terms.emplace(m, coeff_->one());
            b.push_back(Value(MultiPoly::from_terms(coeff_, vars_, std::move(terms))));
        }
        return b;
    }
    std::vector<Value> base_scalar_basis() const override {
        return {Value(MultiPoly::constant(coeff_, vars_, coeff_->one()))};
    }

    bool scale_closed() const override { return false; }

private:
    FieldPtr coeff_;
    std::vector<std::string> vars_;
    unsigned cap_;
    std::vector<Monomial> monomials_;
};

class PairModule final : public QuadModule {
public:
    PairModule(ModulePtr a, ModulePtr b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_->scalar_description() != b_->scalar_description())
            throw Error("direct-sum components have different scalar rings: " +
                        a_->scalar_description() + " vs " + b_->scalar_description());
    }

    std::string description() const override {
        return a_->description() + " ⊕ " + b_->description();
    }
    long characteristic() const override { return a_->characteristic(); }

    Value zero() const override { return Value(Vec{a_->zero(), b_->zero()}); }
    Value add(const Value& x, const Value& y) const override {
        const Vec& xv = x.as_vec();
        const Vec& yv = y.as_vec();
        return Value(Vec{a_->add(xv[0], yv[0]), b_->add(xv[1], yv[1])});
    }
    Value neg(const Value& x) const override {
        const Vec& xv = x.as_vec();
        return Value(Vec{a_->neg(xv[0]), b_->neg(xv[1])});
    }
    std::string str(const Value& x) const override {
        const Vec& xv = x.as_vec();
        return "(" + a_->str(xv[0]) + ", " + b_->str(xv[1]) + ")";
    }

    std::optional<std::uint64_t> size() const override {
        auto na = a_->size();
        auto nb = b_->size();
        if (!na || !nb) return std::nullopt;
        if (*nb != 0 && *na > (std::uint64_t{1} << 62) / *nb) return std::nullopt;
        return *na * *nb;
    }
    Value element(std::uint64_t index) const override {
        const std::uint64_t nb = *b_->size();
        return Value(Vec{a_->element(index / nb), b_->element(index % nb)});
    }

    std::string scalar_description() const override { return a_->scalar_description(); }
    Value scale(const Value& s, const Value& x) const override {
        const Vec& xv = x.as_vec();
        return Value(Vec{a_->scale(s, xv[0]), b_->scale(s, xv[1])});
    }
    Value scalar_mul(const Value& a, const Value& b) const override {
        return a_->scalar_mul(a, b);
    }
    std::string scalar_str(const Value& s) const override { return a_->scalar_str(s); }
    std::optional<std::uint64_t> scalar_count() const override { return a_->scalar_count(); }
    Value scalar_element(std::uint64_t index) const override { return a_->scalar_element(index); }
    std::optional<std::uint64_t> base_count() const override { return a_->base_count(); }
    Value base_element(std::uint64_t index) const override { return a_->base_element(index); }

    std::vector<Value> basis() const override {
        std::vector<Value> out;
        for (const auto& v : a_->basis()) out.push_back(Value(Vec{v, b_->zero()}));
        for (const auto& v : b_->basis()) out.push_back(Value(Vec{a_->zero(), v}));
        return out;
    }
    std::vector<Value> scalar_basis() const override { return a_->scalar_basis(); }
    std::vector<Value> base_scalar_basis() const override { return a_->base_scalar_basis(); }

    bool scale_closed() const override { return a_->scale_closed() && b_->scale_closed(); }

    bool is_pair() const override { return true; }
    ModulePtr pair_component(size_t which) const override { return which == 0 ? a_ : b_; }
    Value pair_of(const Value& a, const Value& b) const override { return Value(Vec{a, b}); }
    Value pair_proj(const Value& x, size_t which) const override { return x.as_vec()[which]; }

private:
    ModulePtr a_;
    ModulePtr b_;
};

class FreeRingModule final : public QuadModule {
public:
    FreeRingModule(RingPtr ring, size_t rank) : ring_(std::move(ring)), rank_(rank) {}

    std::string description() const override {
        return ring_->description() + "^" + std::to_string(rank_);
    }
    long characteristic() const override { return ring_->characteristic(); }

    Value zero() const override { return Value(Vec(rank_, ring_->zero())); }
    Value add(const Value& a, const Value& b) const override {
        const Vec& av = a.as_vec();
        const Vec& bv = b.as_vec();
        Vec r(rank_, ring_->zero());
        for (size_t i = 0; i < rank_; ++i) r[i] = ring_->add(av[i], bv[i]);
        return Value(std::move(r));
    }
    Value neg(const Value& a) const override {
        const Vec& av = a.as_vec();
        Vec r(rank_, ring_->zero());
        for (size_t i = 0; i < rank_; ++i) r[i] = ring_->neg(av[i]);
        return Value(std::move(r));
    }
    std::string str(const Value& a) const override {
        std::string out = "(";
        const Vec& av = a.as_vec();
        for (size_t i = 0; i < rank_; ++i) {
            if (i) out += ", ";
            out += ring_->str(av[i]);
        }
        return out + ")";
    }

    std::optional<std::uint64_t> size() const override {
        auto q = ring_->size();
        if (!q) return std::nullopt;
        return checked_pow(*q, rank_);
    }
    Value element(std::uint64_t index) const override {
        const std::uint64_t q = *ring_->size();
        Vec v(rank_, ring_->zero());
        for (size_t i = 0; i < rank_; ++i) {
            v[i] = ring_->element(index % q);
            index /= q;
        }
        return Value(std::move(v));
    }

    std::string scalar_description() const override { return ring_->description(); }
    Value scale(const Value& s, const Value& x) const override {
        const Vec& xv = x.as_vec();
        Vec r(rank_, ring_->zero());
        for (size_t i = 0; i < rank_; ++i) r[i] = ring_->mul(s, xv[i]);
        return Value(std::move(r));
    }
    Value scalar_mul(const Value& a, const Value& b) const override { return ring_->mul(a, b); }
    std::string scalar_str(const Value& s) const override { return ring_->str(s); }
    std::optional<std::uint64_t> scalar_count() const override { return ring_->size(); }
    Value scalar_element(std::uint64_t index) const override { return ring_->element(index); }
    std::optional<std::uint64_t> base_count() const override { return ring_->size(); }
    Value base_element(std::uint64_t index) const override { return ring_->element(index); }

private:
    RingPtr ring_;
    size_t rank_;
};

// F0 / U for a finite ambient module and a sub*module* U, realized by
// canonical coset representatives (the Value-least element of each coset).
class CosetModule final : public QuadModule {
public:
    CosetModule(ModulePtr ambient, const std::set<Value>& sub) : amb_(std::move(ambient)) {
        const std::uint64_t n = *amb_->size();
        // U must be a submodule: contains 0, closed under +, -, and scaling.
        if (!sub.count(amb_->zero()))
            throw Error("relation image does not contain 0");
        for (const auto& a : sub) {
            if (!sub.count(amb_->neg(a)))
                throw Error("relation image is not closed under negation");
            for (const auto& b : sub)
                if (!sub.count(amb_->add(a, b)))
                    throw Error("relation image is not closed under addition");
        }
        const std::uint64_t ns = *amb_->scalar_count();
        for (std::uint64_t si = 0; si < ns; ++si) {
            Value s = amb_->scalar_element(si);
            for (const auto& a : sub)
                if (!sub.count(amb_->scale(s, a)))
                    throw Error("relation image is not a submodule");
        }
        std::set<Value> reps;
        for (std::uint64_t i = 0; i < n; ++i) {
            Value e = amb_->element(i);
            Value best = amb_->add(e, *sub.begin());
            for (const auto& v : sub) {
                Value cand = amb_->add(e, v);
                if (cand < best) best = cand;
            }
            rep_of_.emplace(std::move(e), best);
            reps.insert(std::move(best));
        }
        reps_.assign(reps.begin(), reps.end());
    }

    std::string description() const override {
        return amb_->description() + " modulo the relation image";
    }
    long characteristic() const override { return amb_->characteristic(); }

    Value zero() const override { return rep_of_.at(amb_->zero()); }
    Value add(const Value& a, const Value& b) const override {
        return rep_of_.at(amb_->add(a, b));
    }
    Value neg(const Value& a) const override { return rep_of_.at(amb_->neg(a)); }
    std::string str(const Value& a) const override { return amb_->str(a) + " mod relations"; }

    std::optional<std::uint64_t> size() const override { return reps_.size(); }
    Value element(std::uint64_t index) const override { return reps_.at(index); }

    std::string scalar_description() const override { return amb_->scalar_description(); }
    Value scale(const Value& s, const Value& x) const override {
        return rep_of_.at(amb_->scale(s, x));
    }
    Value scalar_mul(const Value& a, const Value& b) const override {
        return amb_->scalar_mul(a, b);
    }
    std::string scalar_str(const Value& s) const override { return amb_->scalar_str(s); }
    std::optional<std::uint64_t> scalar_count() const override { return amb_->scalar_count(); }
    Value scalar_element(std::uint64_t index) const override {
        return amb_->scalar_element(index);
    }
    std::optional<std::uint64_t> base_count() const override { return amb_->base_count(); }
    Value base_element(std::uint64_t index) const override { return amb_->base_element(index); }

    const Value& representative(const Value& ambient_element) const {
        return rep_of_.at(ambient_element);
    }

private:
    ModulePtr amb_;
    std::vector<Value> reps_;
    std::map<Value, Value> rep_of_;
};

} // namespace

// ---------------------------------------------------------------------------
// QuadModule defaults and factories
// ---------------------------------------------------------------------------

Value QuadModule::element(std::uint64_t) const {
    throw Error(description() + " is not enumerable");
}
Value QuadModule::scalar_element(std::uint64_t) const {
    throw Error("the scalar ring of " + description() + " is not enumerable");
}
Value QuadModule::base_element(std::uint64_t) const {
    throw Error("the base ring of " + description() + " is not enumerable");
}
ModulePtr QuadModule::pair_component(size_t) const {
    throw Error(description() + " is not a direct sum of two modules");
}
Value QuadModule::pair_of(const Value&, const Value&) const {
    throw Error(description() + " is not a direct sum of two modules");
}
Value QuadModule::pair_proj(const Value&, size_t) const {
    throw Error(description() + " is not a direct sum of two modules");
}

ModulePtr algebra_module(const AlgPtr& s) { return std::make_shared<AlgebraModule>(s); }

ModulePtr action_module(const AlgPtr& s, const ModuleAction& act, const std::string& what) {
    return std::make_shared<ActionModule>(s, act, what);
}

ModulePtr q_phi_module(const QPhiResult& q) {
    return action_module(q.s, ModuleAction{q.q->dim(), q.s_action}, "Q");
}

ModulePtr function_field_module(const FieldPtr& function_field) {
    return std::make_shared<FunctionFieldModule>(function_field);
}

ModulePtr bounded_poly_module(const FieldPtr& coeff, const std::vector<std::string>& vars,
                              unsigned degree_cap) {
    return std::make_shared<BoundedPolyModule>(coeff, vars, degree_cap);
}

ModulePtr pair_module(const ModulePtr& a, const ModulePtr& b) {
    return std::make_shared<PairModule>(a, b);
}

ModulePtr free_ring_module(const RingPtr& ring, size_t rank) {
    return std::make_shared<FreeRingModule>(ring, rank);
}

// ---------------------------------------------------------------------------
// QuadraticMap
// ---------------------------------------------------------------------------

QuadraticMap::QuadraticMap(ModulePtr domain, ModulePtr target, std::string what,
                           std::function<Value(const Value&)> eval, bool bilinear_polarization)
    : domain_(std::move(domain)), target_(std::move(target)), what_(std::move(what)),
      eval_(std::move(eval)), bilinear_pol_(bilinear_polarization) {
    if (eval_(domain_->zero()) != target_->zero())
        throw Error("quadratic map '" + what_ + "' does not send 0 to 0");
}

Value QuadraticMap::polarize(const Value& x, const Value& y) const {
    Value qxy = eval_(domain_->add(x, y));
    return target_->sub(target_->sub(qxy, eval_(x)), eval_(y));
}

std::string to_string(Axiom a) {
    switch (a) {
    case Axiom::square_scaling: return "square-scaling";
    case Axiom::biadditivity: return "biadditivity";
    case Axiom::r_bilinearity: return "R-bilinearity";
    case Axiom::s_bilinearity: return "S-bilinearity";
    }
    return "?";
}

std::string to_string(AxiomMode m) {
    switch (m) {
    case AxiomMode::exhaustive: return "exhaustive";
    case AxiomMode::basis: return "basis";
    case AxiomMode::sampled: return "sampled";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::no_counterexample_found: return "no-counterexample-found";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Axiom checking
// ---------------------------------------------------------------------------

namespace {

std::string square_witness(const QuadraticMap& q, const Value& s, const Value& x) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    Value lhs = q.eval(dom.scale(s, x));
    Value rhs = tgt.scale(dom.scalar_mul(s, s), q.eval(x));
    return "q(λ·x) ≠ λ²·q(x) for λ = " + dom.scalar_str(s) + ", x = " + dom.str(x) +
           ": q(λ·x) = " + tgt.str(lhs) + ", λ²·q(x) = " + tgt.str(rhs);
}

std::string biadd_witness(const QuadraticMap& q, const Value& x, const Value& y, const Value& z) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    Value lhs = q.polarize(dom.add(x, y), z);
    Value rhs = tgt.add(q.polarize(x, z), q.polarize(y, z));
    return "pol(x+y, z) ≠ pol(x, z) + pol(y, z) for x = " + dom.str(x) + ", y = " + dom.str(y) +
           ", z = " + dom.str(z) + ": pol(x+y, z) = " + tgt.str(lhs) +
           ", pol(x, z) + pol(y, z) = " + tgt.str(rhs);
}

std::string bilin_witness(const QuadraticMap& q, const char* scalar_name, const Value& s,
                          const Value& x, const Value& y) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    Value lhs = q.polarize(dom.scale(s, x), y);
    Value rhs = tgt.scale(s, q.polarize(x, y));
    std::string sn(scalar_name);
    return "pol(" + sn + "·x, y) ≠ " + sn + "·pol(x, y) for " + sn + " = " + dom.scalar_str(s) +
           ", x = " + dom.str(x) + ", y = " + dom.str(y) + ": pol(" + sn + "·x, y) = " +
           tgt.str(lhs) + ", " + sn + "·pol(x, y) = " + tgt.str(rhs);
}

struct IndexedSet {
    std::vector<Value> elems;
    std::map<Value, std::uint32_t> index;

    std::uint32_t at(const Value& v) const {
        auto it = index.find(v);
        if (it == index.end())
            throw Error("a module operation left the enumerated element set");
        return it->second;
    }
};

IndexedSet enumerate_domain(const QuadModule& dom) {
    auto n = dom.size();
    if (!n)
        throw Error("exhaustive mode requires a finite domain; " + dom.description() +
                    " is not finite");
    if (*n > kMaxDomain)
        throw GuardExceeded("exhaustive sweep over " + std::to_string(*n) +
                            " elements of " + dom.description() + " exceeds the guard of " +
                            std::to_string(kMaxDomain));
    IndexedSet s;
    for (std::uint64_t i = 0; i < *n; ++i) {
        Value v = dom.element(i);
        s.index.emplace(v, static_cast<std::uint32_t>(i));
        s.elems.push_back(std::move(v));
    }
    return s;
}

std::vector<Value> scalar_list(const QuadModule& dom, bool base) {
    auto n = base ? dom.base_count() : dom.scalar_count();
    if (!n)
        throw Error(std::string("exhaustive mode requires a finite ") +
                    (base ? "base ring" : "scalar ring") + " for " + dom.description());
    std::vector<Value> out;
    for (std::uint64_t i = 0; i < *n; ++i)
        out.push_back(base ? dom.base_element(i) : dom.scalar_element(i));
    return out;
}

std::vector<std::uint32_t> addition_table(const QuadModule& dom, const IndexedSet& d) {
    const size_t n = d.elems.size();
    std::vector<std::uint32_t> add(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            add[i * n + j] = d.at(dom.add(d.elems[i], d.elems[j]));
    return add;
}

// The finite subgroup of the target generated by the given seeds (closed under
// +, −, and scaling by the given scalars), with lookup tables on it.
struct TargetTables {
    std::vector<Value> vals;
    std::map<Value, std::uint32_t> index;
    std::vector<std::uint32_t> addt;
    std::vector<std::uint32_t> negt;
    std::vector<std::vector<std::uint32_t>> scaled; // one row per scalar

    std::uint32_t at(const Value& v) const {
        auto it = index.find(v);
        if (it == index.end()) throw Error("target closure is incomplete");
        return it->second;
    }
};

TargetTables close_target(const QuadModule& tgt, const std::vector<Value>& seeds,
                          const std::vector<Value>& scalars) {
    std::set<Value> pool(seeds.begin(), seeds.end());
    pool.insert(tgt.zero());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Value> cur(pool.begin(), pool.end());
        for (const auto& a : cur) {
            if (pool.insert(tgt.neg(a)).second) grew = true;
            for (const auto& b : cur)
                if (pool.insert(tgt.add(a, b)).second) grew = true;
            for (const auto& s : scalars)
                if (pool.insert(tgt.scale(s, a)).second) grew = true;
        }
        if (pool.size() > kMaxTargetClosure)
            throw GuardExceeded("the subgroup generated by the evaluated values exceeds " +
                                std::to_string(kMaxTargetClosure) + " elements");
    }
    TargetTables t;
    for (const auto& v : pool) {
        t.index.emplace(v, static_cast<std::uint32_t>(t.vals.size()));
        t.vals.push_back(v);
    }
    const size_t m = t.vals.size();
    t.addt.resize(m * m);
    t.negt.resize(m);
    for (size_t i = 0; i < m; ++i) {
        t.negt[i] = t.at(tgt.neg(t.vals[i]));
        for (size_t j = 0; j < m; ++j)
            t.addt[i * m + j] = t.at(tgt.add(t.vals[i], t.vals[j]));
    }
    t.scaled.resize(scalars.size());
    for (size_t si = 0; si < scalars.size(); ++si) {
        t.scaled[si].resize(m);
        for (size_t i = 0; i < m; ++i)
            t.scaled[si][i] = t.at(tgt.scale(scalars[si], t.vals[i]));
    }
    return t;
}

AxiomReport check_square_scaling_exhaustive(const QuadraticMap& q) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    AxiomReport rep{Axiom::square_scaling, AxiomMode::exhaustive, Verdict::pass, "", 0};
    IndexedSet d = enumerate_domain(dom);
    std::vector<Value> scalars = scalar_list(dom, /*base=*/false);
    if (scalars.size() * d.elems.size() > kMaxSquareOps)
        throw GuardExceeded("square-scaling sweep size exceeds the guard");
    std::vector<Value> qv;
    qv.reserve(d.elems.size());
    for (const auto& x : d.elems) qv.push_back(q.eval(x));
    for (const auto& s : scalars) {
        Value s2 = dom.scalar_mul(s, s);
        for (size_t xi = 0; xi < d.elems.size(); ++xi) {
            ++rep.cases;
            Value lhs = q.eval(dom.scale(s, d.elems[xi]));
            Value rhs = tgt.scale(s2, qv[xi]);
            if (lhs != rhs) {
                rep.verdict = Verdict::fail;
                rep.witness = square_witness(q, s, d.elems[xi]);
                return rep;
            }
        }
    }
    return rep;
}

AxiomReport check_biadditivity_exhaustive(const QuadraticMap& q) {
    const auto& dom = *q.domain();
    AxiomReport rep{Axiom::biadditivity, AxiomMode::exhaustive, Verdict::pass, "", 0};
    IndexedSet d = enumerate_domain(dom);
    const size_t n = d.elems.size();
    if (static_cast<std::uint64_t>(n) * n * n > kMaxTripleOps)
        throw GuardExceeded("biadditivity sweep size exceeds the guard");
    std::vector<std::uint32_t> add = addition_table(dom, d);
    std::vector<Value> qvals;
    qvals.reserve(n);
    for (const auto& x : d.elems) qvals.push_back(q.eval(x));
    TargetTables t = close_target(*q.target(), qvals, {});
    const size_t m = t.vals.size();
    std::vector<std::uint32_t> qi(n);
    for (size_t i = 0; i < n; ++i) qi[i] = t.at(qvals[i]);
    auto ta = [&](std::uint32_t a, std::uint32_t b) { return t.addt[a * m + b]; };
    // pol(x+y, z) = pol(x, z) + pol(y, z) rearranged, with q(0) = 0, to
    // q(x+y+z) + q(x) + q(y) + q(z) = q(x+y) + q(x+z) + q(y+z).
    for (size_t x = 0; x < n; ++x) {
        for (size_t y = 0; y < n; ++y) {
            const std::uint32_t xy = add[x * n + y];
            const std::uint32_t q_xy = qi[xy];
            const std::uint32_t q_x_y = ta(qi[x], qi[y]);
            for (size_t z = 0; z < n; ++z) {
                ++rep.cases;
                const std::uint32_t lhs = ta(ta(qi[add[xy * n + z]], q_x_y), qi[z]);
                const std::uint32_t rhs = ta(q_xy, ta(qi[add[x * n + z]], qi[add[y * n + z]]));
                if (lhs != rhs) {
                    rep.verdict = Verdict::fail;
                    rep.witness = biadd_witness(q, d.elems[x], d.elems[y], d.elems[z]);
                    return rep;
                }
            }
        }
    }
    return rep;
}

AxiomReport check_bilinearity_exhaustive(const QuadraticMap& q, Axiom axiom) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    const char* sn = axiom == Axiom::r_bilinearity ? "r" : "s";
    AxiomReport rep{axiom, AxiomMode::exhaustive, Verdict::pass, "", 0};
    IndexedSet d = enumerate_domain(dom);
    const size_t n = d.elems.size();
    std::vector<Value> scalars = scalar_list(dom, axiom == Axiom::r_bilinearity);
    const std::uint64_t sweep = scalars.size() * static_cast<std::uint64_t>(n) * n;
    if (sweep > kMaxTripleOps)
        throw GuardExceeded("bilinearity sweep size exceeds the guard");
    std::vector<std::uint32_t> add = addition_table(dom, d);
    std::vector<Value> qvals;
    qvals.reserve(n);
    for (const auto& x : d.elems) qvals.push_back(q.eval(x));

    if (dom.scale_closed()) {
        TargetTables t = close_target(tgt, qvals, scalars);
        const size_t m = t.vals.size();
        std::vector<std::uint32_t> qi(n);
        for (size_t i = 0; i < n; ++i) qi[i] = t.at(qvals[i]);
        auto ta = [&](std::uint32_t a, std::uint32_t b) { return t.addt[a * m + b]; };
        auto pol_idx = [&](size_t a, size_t b) {
            return ta(ta(qi[add[a * n + b]], t.negt[qi[a]]), t.negt[qi[b]]);
        };
        std::vector<std::uint32_t> sdom(n);
        for (size_t si = 0; si < scalars.size(); ++si) {
            for (size_t x = 0; x < n; ++x) sdom[x] = d.at(dom.scale(scalars[si], d.elems[x]));
            const auto& srow = t.scaled[si];
            for (size_t x = 0; x < n; ++x) {
                const size_t sx = sdom[x];
                for (size_t y = 0; y < n; ++y) {
                    ++rep.cases;
                    if (pol_idx(sx, y) != srow[pol_idx(x, y)]) {
                        rep.verdict = Verdict::fail;
                        rep.witness = bilin_witness(q, sn, scalars[si], d.elems[x], d.elems[y]);
                        return rep;
                    }
                }
            }
        }
        return rep;
    }

    // Scaling can leave the enumerated set (bounded-degree carriers): evaluate
    // the scaled inputs directly in the ambient ring.
    if (sweep > kMaxDirectBilinear)
        throw GuardExceeded("bilinearity sweep size exceeds the direct-evaluation guard");
    for (const auto& s : scalars) {
        for (size_t x = 0; x < n; ++x) {
            Value sx = dom.scale(s, d.elems[x]);
            Value q_sx = q.eval(sx);
            for (size_t y = 0; y < n; ++y) {
                ++rep.cases;
                Value lhs = tgt.sub(tgt.sub(q.eval(dom.add(sx, d.elems[y])), q_sx), qvals[y]);
                Value pol_xy =
                    tgt.sub(tgt.sub(qvals[add[x * n + y]], qvals[x]), qvals[y]);
                Value rhs = tgt.scale(s, pol_xy);
                if (lhs != rhs) {
                    rep.verdict = Verdict::fail;
                    rep.witness = bilin_witness(q, sn, s, d.elems[x], d.elems[y]);
                    return rep;
                }
            }
        }
    }
    return rep;
}

AxiomReport check_swept(const QuadraticMap& q, Axiom axiom, AxiomMode mode,
                        const std::vector<Value>& vectors, const std::vector<Value>& scalars) {
    const auto& dom = *q.domain();
    const auto& tgt = *q.target();
    // A clean basis sweep proves a linear axiom (given the bilinear
    // polarization certificate); a clean sample sweep never does.
    const Verdict clean = mode == AxiomMode::basis ? Verdict::pass
                                                   : Verdict::no_counterexample_found;
    AxiomReport rep{axiom, mode, clean, "", 0};
    switch (axiom) {
    case Axiom::square_scaling:
        for (const auto& s : scalars) {
            Value s2 = dom.scalar_mul(s, s);
            for (const auto& x : vectors) {
                ++rep.cases;
                if (q.eval(dom.scale(s, x)) != tgt.scale(s2, q.eval(x))) {
                    rep.verdict = Verdict::fail;
                    rep.witness = square_witness(q, s, x);
                    return rep;
                }
            }
        }
        return rep;
    case Axiom::biadditivity:
        for (const auto& x : vectors)
            for (const auto& y : vectors)
                for (const auto& z : vectors) {
                    ++rep.cases;
                    Value lhs = q.polarize(dom.add(x, y), z);
                    Value rhs = tgt.add(q.polarize(x, z), q.polarize(y, z));
                    if (lhs != rhs) {
                        rep.verdict = Verdict::fail;
                        rep.witness = biadd_witness(q, x, y, z);
                        return rep;
                    }
                }
        return rep;
    case Axiom::r_bilinearity:
    case Axiom::s_bilinearity: {
        const char* sn = axiom == Axiom::r_bilinearity ? "r" : "s";
        for (const auto& s : scalars)
            for (const auto& x : vectors)
                for (const auto& y : vectors) {
                    ++rep.cases;
                    Value lhs = q.polarize(dom.scale(s, x), y);
                    Value rhs = tgt.scale(s, q.polarize(x, y));
                    if (lhs != rhs) {
                        rep.verdict = Verdict::fail;
                        rep.witness = bilin_witness(q, sn, s, x, y);
                        return rep;
                    }
                }
        return rep;
    }
    }
    throw Error("unknown axiom");
}

} // namespace

AxiomReport axiom_check(const QuadraticMap& q, Axiom axiom, AxiomMode mode,
                        const SamplePlan& plan) {
    const auto& dom = *q.domain();
    switch (mode) {
    case AxiomMode::exhaustive:
        switch (axiom) {
        case Axiom::square_scaling: return check_square_scaling_exhaustive(q);
        case Axiom::biadditivity: return check_biadditivity_exhaustive(q);
        case Axiom::r_bilinearity:
        case Axiom::s_bilinearity: return check_bilinearity_exhaustive(q, axiom);
        }
        throw Error("unknown axiom");

    case AxiomMode::basis: {
        if (axiom == Axiom::square_scaling)
            throw Error("basis mode applies to the linear axioms only "
                        "(biadditivity and bilinearity)");
        if (!q.bilinear_polarization())
            throw Error("basis mode requires a form whose polarization is bilinear "
                        "by construction");
        std::vector<Value> vectors = dom.basis();
        if (vectors.empty())
            throw Error("basis mode requires a finite module basis for " + dom.description());
        std::vector<Value> scalars;
        if (axiom == Axiom::r_bilinearity) {
            scalars = dom.base_scalar_basis();
            if (scalars.empty())
                throw Error("basis mode requires a base-ring basis for " + dom.description());
        } else if (axiom == Axiom::s_bilinearity) {
            scalars = dom.scalar_basis();
            if (scalars.empty())
                throw Error("basis mode requires a scalar-ring basis for " + dom.description());
        }
        return check_swept(q, axiom, mode, vectors, scalars);
    }

    case AxiomMode::sampled: {
        const std::vector<Value>& vectors = plan.vectors;
        const std::vector<Value>* scalars = nullptr;
        if (axiom == Axiom::square_scaling || axiom == Axiom::s_bilinearity)
            scalars = &plan.scalars;
        else if (axiom == Axiom::r_bilinearity)
            scalars = &plan.base_scalars;
        if (vectors.empty() || (scalars && scalars->empty()))
            throw Error("sampled mode requires a declared test-vector list for " +
                        to_string(axiom));
        static const std::vector<Value> none;
        return check_swept(q, axiom, mode, vectors, scalars ? *scalars : none);
    }
    }
    throw Error("unknown mode");
}

// ---------------------------------------------------------------------------
// Form constructors
// ---------------------------------------------------------------------------

QuadraticMap gram_form(const AlgPtr& s, size_t rank, const std::vector<Vec>& coeffs) {
    if (rank != 1 && rank != 2)
        throw Error("gram forms are provided for rank 1 and rank 2 only");
    const size_t expected = rank * (rank + 1) / 2;
    if (coeffs.size() != expected)
        throw Error("a rank-" + std::to_string(rank) + " gram form needs " +
                    std::to_string(expected) + " coefficients");
    for (const auto& c : coeffs)
        if (c.size() != s->dim()) throw Error("gram coefficient has the wrong dimension");

    ModulePtr target = algebra_module(s);
    if (rank == 1) {
        ModulePtr domain = target;
        Vec c00 = coeffs[0];
        AlgPtr alg = s;
        auto eval = [alg, c00](const Value& x) {
            const Vec& xv = x.as_vec();
            return Value(alg->mul(c00, alg->mul(xv, xv)));
        };
        return QuadraticMap(domain, target, "gram form on S", eval, true);
    }
    ModulePtr domain = pair_module(algebra_module(s), algebra_module(s));
    Vec c00 = coeffs[0], c01 = coeffs[1], c11 = coeffs[2];
    AlgPtr alg = s;
    auto eval = [alg, c00, c01, c11](const Value& v) {
        const Vec& x = v.as_vec()[0].as_vec();
        const Vec& y = v.as_vec()[1].as_vec();
        Vec r = alg->mul(c00, alg->mul(x, x));
        r = alg->add(r, alg->mul(c01, alg->mul(x, y)));
        r = alg->add(r, alg->mul(c11, alg->mul(y, y)));
        return Value(std::move(r));
    };
    return QuadraticMap(domain, target, "gram form on S ⊕ S", eval, true);
}

QuadraticMap derivation_form(const PresentedAlgebra& a, const ModuleAction& target,
                             const std::vector<Vec>& images, const std::string& target_what) {
    ExactMatrix d = derivation_matrix(a, target, images);
    const AlgPtr& s = a.realization;
    ModulePtr dom = pair_module(algebra_module(s), algebra_module(s));
    ModulePtr tgt = action_module(s, target, target_what);
    auto eval = [d, tgt](const Value& v) {
        const Value& f = v.as_vec()[0];
        const Value& g = v.as_vec()[1];
        Value df = Value(d.apply(f.as_vec()));
        Value dg = Value(d.apply(g.as_vec()));
        return tgt->sub(tgt->scale(g, df), tgt->scale(f, dg));
    };
    return QuadraticMap(dom, tgt, "derivation cross form d(F)·G − F·d(G)", eval, true);
}

namespace {

RatFunc var_frac(const FieldPtr& function_field, const std::string& var) {
    Value zv = function_field->zero();
    const RatFunc& z = zv.as_frac();
    const auto& vars = z.vars();
    if (std::find(vars.begin(), vars.end(), var) == vars.end())
        throw Error("the function field " + function_field->description() +
                    " has no variable named " + var);
    return RatFunc::from_poly(MultiPoly::variable(z.coeff_field(), vars, var));
}

} // namespace

QuadraticMap derivative_pair_form(const FieldPtr& function_field, const std::string& var) {
    var_frac(function_field, var); // validates the variable name
    ModulePtr ff = function_field_module(function_field);
    ModulePtr dom = pair_module(ff, ff);
    std::string v = var;
    auto eval = [v](const Value& x) {
        const RatFunc& f = x.as_vec()[0].as_frac();
        const RatFunc& g = x.as_vec()[1].as_frac();
        return Value(f.derivative(v) * g - f * g.derivative(v));
    };
    return QuadraticMap(dom, ff, "derivative cross form F′G − FG′ in d/d" + var, eval, true);
}

SamplePlan derivative_pair_samples(const FieldPtr& function_field, const std::string& var) {
    RatFunc t = var_frac(function_field, var);
    RatFunc one = function_field->one().as_frac();
    RatFunc zero = function_field->zero().as_frac();
    RatFunc t2 = t * t;
    RatFunc t1 = t + one;
    auto pair = [](const RatFunc& a, const RatFunc& b) {
        return Value(Vec{Value(a), Value(b)});
    };
    SamplePlan plan;
    plan.vectors = {pair(one, zero), pair(zero, one), pair(t, zero),    pair(zero, t),
                    pair(t, one),    pair(one, t),    pair(t2, t1)};
    plan.scalars = {Value(t), Value(t1), Value(t2)};
    plan.base_scalars = {function_field->one(), function_field->from_int(2)};
    return plan;
}

QuadraticMap higher_derivative_form(const ModulePtr& pair_domain, const ModulePtr& target,
                                    const std::vector<std::string>& index_vars) {
    if (!pair_domain->is_pair())
        throw Error("higher-derivative forms need a pair domain (F, G)");
    if (pair_domain->characteristic() != 2)
        throw Error("higher-derivative forms require characteristic 2");
    std::vector<std::string> sorted = index_vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("higher-derivative forms need distinct index variables");
    // Validate the index variables against the carrier.
    {
        Value z0 = pair_domain->pair_proj(pair_domain->zero(), 0);
        const std::vector<std::string>& vars =
            z0.is_poly() ? z0.as_poly().vars()
                         : (z0.is_frac() ? z0.as_frac().vars()
                                         : throw Error("higher-derivative forms need a "
                                                       "polynomial or rational-function "
                                                       "carrier"));
        for (const auto& v : index_vars)
            if (std::find(vars.begin(), vars.end(), v) == vars.end())
                throw Error("the carrier has no variable named " + v);
    }
    std::vector<std::string> idx = index_vars;
    auto eval = [idx](const Value& x) -> Value {
        const Value& f = x.as_vec()[0];
        const Value& g = x.as_vec()[1];
        if (f.is_poly()) {
            MultiPoly p = f.as_poly() * g.as_poly();
            for (const auto& v : idx) p = p.derivative(v);
            return Value(std::move(p));
        }
        RatFunc p = f.as_frac() * g.as_frac();
        for (const auto& v : idx) p = p.derivative(v);
        return Value(std::move(p));
    };
    std::string what = index_vars.empty()
                           ? "product form (F, G) ↦ FG"
                           : "higher-derivative form ∂^" + std::to_string(index_vars.size()) +
                                 "(FG)/∂" + join(index_vars, "∂");
    return QuadraticMap(pair_domain, target, what, eval, true);
}

// ---------------------------------------------------------------------------
// Forms attached to Q
// ---------------------------------------------------------------------------

namespace {

// Action of each basis element of S on W, written in W coordinates.
std::vector<ExactMatrix> w_action_matrices(const QPhiResult& q) {
    const FieldPtr& k = q.s->base();
    const size_t n = q.s->dim();
    const size_t wd = q.w.dim();
    std::vector<ExactMatrix> out;
    for (size_t t = 0; t < n; ++t) {
        ExactMatrix at(k, wd, wd);
        for (size_t r = 0; r < wd; ++r) {
            Vec img = q.s_action[t].apply(q.w.basis_vector(r));
            auto c = q.w.coordinates(img);
            if (!c) throw Error("W is not stable under the S-action");
            for (size_t i = 0; i < wd; ++i) at.set(i, r, (*c)[i]);
        }
        out.push_back(std::move(at));
    }
    return out;
}

} // namespace

std::vector<ExactMatrix> w_functional_basis(const QPhiResult& q) {
    const FieldPtr& k = q.s->base();
    const size_t n = q.s->dim();
    const size_t wd = q.w.dim();
    if (wd == 0) return {};
    std::vector<ExactMatrix> acts = w_action_matrices(q);
    // Unknowns f[i][r] (i over S coordinates, r over W coordinates), flattened
    // as i·wd + r; S-linearity reads f∘a_t = m_t∘f for every t.
    std::vector<Vec> rows;
    for (size_t t = 0; t < n; ++t) {
        ExactMatrix mt = q.s->mult_matrix(q.s->basis_vector(t));
        for (size_t i = 0; i < n; ++i)
            for (size_t r = 0; r < wd; ++r) {
                Vec row(n * wd, k->zero());
                for (size_t rho = 0; rho < wd; ++rho)
                    row[i * wd + rho] = k->add(row[i * wd + rho], acts[t].at(rho, r));
                for (size_t j = 0; j < n; ++j)
                    row[j * wd + r] = k->sub(row[j * wd + r], mt.at(i, j));
                rows.push_back(std::move(row));
            }
    }
    ExactMatrix kb = kernel_basis(ExactMatrix::from_rows(k, rows));
    std::vector<ExactMatrix> out;
    for (size_t v = 0; v < kb.rows(); ++v) {
        ExactMatrix f(k, n, wd);
        for (size_t i = 0; i < n; ++i)
            for (size_t r = 0; r < wd; ++r) f.set(i, r, kb.at(v, i * wd + r));
        out.push_back(std::move(f));
    }
    return out;
}

QuadraticMap exotic_form(const QPhiResult& q, const ExactMatrix& functional) {
    const size_t n = q.s->dim();
    const size_t wd = q.w.dim();
    if (functional.rows() != n || functional.cols() != wd)
        throw Error("functional dimension mismatch: expected " + std::to_string(n) + "×" +
                    std::to_string(wd) + ", got " + std::to_string(functional.rows()) + "×" +
                    std::to_string(functional.cols()));
    if (wd > 0) {
        std::vector<ExactMatrix> acts = w_action_matrices(q);
        for (size_t t = 0; t < n; ++t) {
            ExactMatrix mt = q.s->mult_matrix(q.s->basis_vector(t));
            if (functional * acts[t] != mt * functional)
                throw Error("the functional is not S-linear on W");
        }
    }
    auto qp = std::make_shared<const QPhiResult>(q);
    ExactMatrix f = functional;
    ModulePtr dom = pair_module(algebra_module(q.s), algebra_module(q.s));
    ModulePtr tgt = algebra_module(q.s);
    auto eval = [qp, f](const Value& v) {
        const Vec& x = v.as_vec()[0].as_vec();
        const Vec& y = v.as_vec()[1].as_vec();
        Vec cls = qp->tensor_class(x, y, qp->s->unit());
        return Value(f.apply(qp->w_coords(cls)));
    };
    return QuadraticMap(dom, tgt, "functional of the W-component of the cross class", eval,
                        true);
}

QuadraticMap universal_cross_map(const QPhiResult& q) {
    auto qp = std::make_shared<const QPhiResult>(q);
    ModulePtr dom = pair_module(algebra_module(q.s), algebra_module(q.s));
    ModulePtr tgt = q_phi_module(q);
    auto eval = [qp](const Value& v) {
        const Vec& x = v.as_vec()[0].as_vec();
        const Vec& y = v.as_vec()[1].as_vec();
        return Value(qp->tensor_class(x, y, qp->s->unit()));
    };
    return QuadraticMap(dom, tgt, "universal cross map (x, y) ↦ class(x⊗y⊗1)", eval, true);
}

QuadraticMap table_form(const ModulePtr& domain, const ModulePtr& target,
                        std::vector<Value> values) {
    auto n = domain->size();
    if (!n) throw Error("table forms need a finite domain");
    if (*n > kMaxTable) throw GuardExceeded("table form domain exceeds the guard");
    if (values.size() != *n)
        throw Error("table form needs exactly one value per domain element");
    auto lookup = std::make_shared<std::map<Value, Value>>();
    for (std::uint64_t i = 0; i < *n; ++i) lookup->emplace(domain->element(i), values[i]);
    auto eval = [lookup](const Value& x) {
        auto it = lookup->find(x);
        if (it == lookup->end()) throw Error("table form evaluated outside its domain");
        return it->second;
    };
    return QuadraticMap(domain, target, "table form", eval, false);
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

SplitForm split_form(const QuadraticMap& q, const std::vector<std::pair<Value, Value>>& samples) {
    const ModulePtr& dom = q.domain();
    if (!dom->is_pair())
        throw Error("split_form needs a direct-sum domain");
    ModulePtr a = dom->pair_component(0);
    ModulePtr b = dom->pair_component(1);
    QuadraticMap qc = q;
    Value za = a->zero();
    Value zb = b->zero();
    ModulePtr domc = dom;
    QuadraticMap first(a, q.target(), q.description() + " restricted to M ⊕ 0",
                       [qc, domc, zb](const Value& x) { return qc.eval(domc->pair_of(x, zb)); },
                       q.bilinear_polarization());
    QuadraticMap second(b, q.target(), q.description() + " restricted to 0 ⊕ M′",
                        [qc, domc, za](const Value& y) { return qc.eval(domc->pair_of(za, y)); },
                        q.bilinear_polarization());
    auto cross = [qc, domc, za, zb](const Value& x, const Value& y) {
        return qc.polarize(domc->pair_of(x, zb), domc->pair_of(za, y));
    };

    NamedCheck rec{"direct-sum-reconstruction", true, ""};
    const auto& tgt = *q.target();
    auto check_one = [&](const Value& x, const Value& y) {
        Value whole = qc.eval(domc->pair_of(x, y));
        Value parts = tgt.add(tgt.add(first.eval(x), cross(x, y)), second.eval(y));
        if (whole != parts) {
            rec.pass = false;
            rec.details = "q(m ⊕ m′) ≠ q₁(m) + b(m, m′) + q₂(m′) for m = " + a->str(x) +
                          ", m′ = " + b->str(y) + ": q(m ⊕ m′) = " + tgt.str(whole) +
                          ", split sum = " + tgt.str(parts);
            return false;
        }
        return true;
    };
    std::uint64_t cases = 0;
    auto na = a->size();
    auto nb = b->size();
    if (na && nb && *na * *nb <= kMaxDirectBilinear) {
        bool ok = true;
        for (std::uint64_t i = 0; ok && i < *na; ++i)
            for (std::uint64_t j = 0; ok && j < *nb; ++j) {
                ++cases;
                ok = check_one(a->element(i), b->element(j));
            }
    } else {
        if (samples.empty())
            throw Error("split_form needs sample pairs to verify reconstruction on an "
                        "infinite domain");
        bool ok = true;
        for (const auto& [x, y] : samples) {
            ++cases;
            ok = check_one(x, y);
            if (!ok) break;
        }
    }
    if (rec.pass)
        rec.details = "verified on " + std::to_string(cases) + " pairs";
    return SplitForm{std::move(first), std::move(second), std::move(cross), std::move(rec)};
}

// ---------------------------------------------------------------------------
// Linear independence of the higher-derivative forms
// ---------------------------------------------------------------------------

IndependenceReport higher_derivative_independence(unsigned n) {
    if (n < 1 || n > 3)
        throw GuardExceeded("the independence matrix is provided for 1 ≤ n ≤ 3");
    std::vector<std::string> vars;
    for (unsigned i = 1; i <= n; ++i) vars.push_back("T" + std::to_string(i));
    FieldPtr kt = make_function_field(make_prime_field(2), vars);
    ModulePtr ff = function_field_module(kt);
    ModulePtr dom = pair_module(ff, ff);
    const size_t count = size_t{1} << n;

    // Input pairs (Π_{i∈J} T_i, 1), J in binary-counter order.
    std::vector<Value> inputs;
    for (size_t j = 0; j < count; ++j) {
        RatFunc m = kt->one().as_frac();
        for (unsigned i = 0; i < n; ++i)
            if (j & (size_t{1} << i)) m = m * var_frac(kt, vars[i]);
        inputs.push_back(dom->pair_of(Value(m), kt->one()));
    }

    ExactMatrix matrix(kt, count, count);
    for (size_t i = 0; i < count; ++i) {
        std::vector<std::string> idx;
        for (unsigned v = 0; v < n; ++v)
            if (i & (size_t{1} << v)) idx.push_back(vars[v]);
        QuadraticMap form = higher_derivative_form(dom, ff, idx);
        for (size_t j = 0; j < count; ++j) matrix.set(i, j, form.eval(inputs[j]));
    }
    bool invertible = rref(matrix).rank == count;
    return IndependenceReport{n, std::move(matrix), invertible};
}

// ---------------------------------------------------------------------------
// The resolution formula
// ---------------------------------------------------------------------------

namespace {

// All S-quadratic value tables on a finite module: tables q with q(0) = 0,
// square-scaling, biadditive polarization, and S-bilinear polarization, found
// by exhaustive sweep over the |N|^(|M|−1) candidates.
std::vector<std::vector<Value>> quadratic_tables(const ModulePtr& m, const ModulePtr& target,
                                                 std::uint64_t guard) {
    const std::uint64_t msize = *m->size();
    const std::uint64_t nsize = *target->size();
    auto total = checked_pow(nsize, msize > 0 ? msize - 1 : 0);
    if (!total || *total > guard)
        throw GuardExceeded("quadratic-map enumeration needs " +
                            (total ? std::to_string(*total) : std::string("too many")) +
                            " candidate tables, above the guard of " + std::to_string(guard));
    std::vector<Value> targets;
    for (std::uint64_t i = 0; i < nsize; ++i) targets.push_back(target->element(i));

    std::vector<std::vector<Value>> found;
    std::vector<std::uint64_t> digits(msize > 0 ? msize - 1 : 0, 0);
    while (true) {
        std::vector<Value> table;
        table.reserve(msize);
        table.push_back(target->zero());
        for (std::uint64_t d : digits) table.push_back(targets[d]);
        QuadraticMap q = table_form(m, target, table);
        if (axiom_check(q, Axiom::square_scaling, AxiomMode::exhaustive).verdict ==
                Verdict::pass &&
            axiom_check(q, Axiom::biadditivity, AxiomMode::exhaustive).verdict ==
                Verdict::pass &&
            axiom_check(q, Axiom::s_bilinearity, AxiomMode::exhaustive).verdict == Verdict::pass)
            found.push_back(std::move(table));
        size_t c = 0;
        while (c < digits.size() && digits[c] == nsize - 1) digits[c++] = 0;
        if (c == digits.size()) break;
        ++digits[c];
    }
    return found;
}

} // namespace

ResolutionReport resolution_quad(const RingPtr& ring, size_t rank0, size_t rank1,
                                 const std::vector<Vec>& d1_columns, const ModulePtr& target,
                                 std::uint64_t guard) {
    if (!ring->size()) throw Error("the resolution formula needs a finite ring");
    if (!target->size()) throw Error("the resolution formula needs a finite target module");
    if (d1_columns.size() != rank1)
        throw Error("d1 needs one column per basis vector of F1");
    for (const auto& c : d1_columns)
        if (c.size() != rank0) throw Error("d1 columns must have length rank0");

    ModulePtr f0 = free_ring_module(ring, rank0);
    const std::uint64_t f0_size = *f0->size();
    IndexedSet f0_set;
    for (std::uint64_t i = 0; i < f0_size; ++i) {
        Value v = f0->element(i);
        f0_set.index.emplace(v, static_cast<std::uint32_t>(i));
        f0_set.elems.push_back(std::move(v));
    }

    // Images d1(f1) for every element of F1 = R^rank1.
    const std::uint64_t rsize = *ring->size();
    auto f1_count = checked_pow(rsize, rank1);
    if (!f1_count || *f1_count > guard)
        throw GuardExceeded("F1 enumeration exceeds the guard");
    std::vector<Value> images;
    std::set<Value> image_set;
    for (std::uint64_t idx = 0; idx < *f1_count; ++idx) {
        std::uint64_t rest = idx;
        Vec img(rank0, ring->zero());
        for (size_t j = 0; j < rank1; ++j) {
            Value cj = ring->element(rest % rsize);
            rest /= rsize;
            for (size_t i = 0; i < rank0; ++i)
                img[i] = ring->add(img[i], ring->mul(cj, d1_columns[j][i]));
        }
        Value v(std::move(img));
        image_set.insert(v);
        images.push_back(std::move(v));
    }

    ModulePtr presented = std::make_shared<CosetModule>(f0, image_set);

    std::vector<std::vector<Value>> on_f0 = quadratic_tables(f0, target, guard);
    std::vector<std::vector<Value>> kernel_tables;
    for (auto& table : on_f0) {
        // q lies in the kernel iff q(f0 + d1 f1) = q(f0) for all f1, f0.
        bool in_kernel = true;
        for (const auto& img : images) {
            for (std::uint64_t x = 0; in_kernel && x < f0_size; ++x)
                if (table[f0_set.at(f0->add(f0_set.elems[x], img))] != table[x])
                    in_kernel = false;
            if (!in_kernel) break;
        }
        if (in_kernel) kernel_tables.push_back(std::move(table));
    }

    std::vector<std::vector<Value>> direct_tables = quadratic_tables(presented, target, guard);

    // Push each kernel table down to M and compare the two collections.
    const auto* cosets = static_cast<const CosetModule*>(presented.get());
    const std::uint64_t msize = *presented->size();
    std::vector<std::vector<Value>> pushed;
    for (const auto& table : kernel_tables) {
        std::vector<Value> pt;
        pt.reserve(msize);
        for (std::uint64_t r = 0; r < msize; ++r)
            pt.push_back(table[f0_set.at(presented->element(r))]);
        // Constancy on cosets is exactly the kernel condition; spot-check it.
        for (std::uint64_t x = 0; x < f0_size; ++x)
            if (table[x] != table[f0_set.at(cosets->representative(f0_set.elems[x]))])
                throw Error("a kernel table is not constant on cosets");
        pushed.push_back(std::move(pt));
    }
    std::vector<std::vector<Value>> sorted_direct = direct_tables;
    std::sort(pushed.begin(), pushed.end());
    std::sort(sorted_direct.begin(), sorted_direct.end());
    bool agree = pushed == sorted_direct;

    return ResolutionReport{f0, presented, std::move(kernel_tables), std::move(direct_tables),
                            agree};
}

} // namespace qflab
