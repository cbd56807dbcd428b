#include "qflab/algebra.hpp"

#include <sstream>

namespace qflab {

FiniteDimAlgebra::FiniteDimAlgebra(FieldPtr base, std::vector<std::string> labels,
                                   std::vector<Vec> basis_products, Vec unit)
    : base_(std::move(base)), labels_(std::move(labels)), table_(std::move(basis_products)),
      unit_(std::move(unit)) {
    size_t n = labels_.size();
    if (n == 0) throw Error("algebra must have positive dimension");
    if (table_.size() != n * n) throw Error("structure-constant table has wrong size");
    for (const Vec& v : table_)
        if (v.size() != n) throw Error("structure-constant entry has wrong length");
    if (unit_.size() != n) throw Error("unit vector has wrong length");

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j)
            if (basis_product(i, j) != basis_product(j, i))
                throw Error("multiplication table is not commutative at (" + labels_[i] + ", " +
                            labels_[j] + ")");
    for (size_t j = 0; j < n; ++j)
        if (mul(unit_, basis_vector(j)) != basis_vector(j))
            throw Error("unit does not act as identity on " + labels_[j]);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                if (mul(basis_product(i, j), basis_vector(k)) !=
                    mul(basis_vector(i), basis_product(j, k)))
                    throw Error("multiplication is not associative at basis triple (" +
                                labels_[i] + ", " + labels_[j] + ", " + labels_[k] + ")");
}

Vec FiniteDimAlgebra::basis_vector(size_t i) const {
    Vec v = zero();
    v[i] = base_->one();
    return v;
}

Vec FiniteDimAlgebra::add(const Vec& a, const Vec& b) const {
    Vec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = base_->add(a[i], b[i]);
    return r;
}

Vec FiniteDimAlgebra::sub(const Vec& a, const Vec& b) const {
    Vec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = base_->sub(a[i], b[i]);
    return r;
}

Vec FiniteDimAlgebra::neg(const Vec& a) const {
    Vec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = base_->neg(a[i]);
    return r;
}

Vec FiniteDimAlgebra::scale(const Value& c, const Vec& a) const {
    Vec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = base_->mul(c, a[i]);
    return r;
}

Vec FiniteDimAlgebra::mul(const Vec& a, const Vec& b) const {
    Vec r = zero();
    for (size_t i = 0; i < dim(); ++i) {
        if (base_->is_zero(a[i])) continue;
        for (size_t j = 0; j < dim(); ++j) {
            if (base_->is_zero(b[j])) continue;
            Value c = base_->mul(a[i], b[j]);
            const Vec& t = basis_product(i, j);
            for (size_t k = 0; k < dim(); ++k) r[k] = base_->add(r[k], base_->mul(c, t[k]));
        }
    }
    return r;
}

Vec FiniteDimAlgebra::pow(const Vec& a, unsigned n) const {
    Vec r = unit_;
    for (unsigned i = 0; i < n; ++i) r = mul(r, a);
    return r;
}

bool FiniteDimAlgebra::is_zero(const Vec& a) const {
    for (const Value& x : a)
        if (!base_->is_zero(x)) return false;
    return true;
}

Vec FiniteDimAlgebra::eval_poly(const MultiPoly& p, const std::vector<Vec>& point) const {
    if (p.coeff_ring()->description() != base_->description())
        throw Error("polynomial coefficients live in a different field than the algebra");
    struct AlgOps {
        const FiniteDimAlgebra& a;
        Vec one() const { return a.unit(); }
        Vec add(const Vec& x, const Vec& y) const { return a.add(x, y); }
        Vec mul(const Vec& x, const Vec& y) const { return a.mul(x, y); }
        Vec scale(const Value& c, const Vec& x) const { return a.scale(c, x); }
    };
    return p.eval(point, AlgOps{*this});
}

ExactMatrix FiniteDimAlgebra::mult_matrix(const Vec& a) const {
    ExactMatrix m(base_, dim(), dim());
    for (size_t j = 0; j < dim(); ++j) {
        Vec col = mul(a, basis_vector(j));
        for (size_t i = 0; i < dim(); ++i) m.set(i, j, col[i]);
    }
    return m;
}

std::string FiniteDimAlgebra::str(const Vec& a) const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < dim(); ++i) {
        if (base_->is_zero(a[i])) continue;
        if (!first) os << " + ";
        first = false;
        std::string cs = base_->str(a[i]);
        bool simple = cs.find('+') == std::string::npos && cs.find(' ') == std::string::npos;
        if (base_->is_one(a[i]))
            os << labels_[i];
        else
            os << (simple ? cs : "(" + cs + ")") << "*" << labels_[i];
    }
    if (first) os << "0";
    return os.str();
}

AlgPtr make_algebra(FieldPtr base, std::vector<std::string> labels,
                    std::vector<Vec> basis_products, Vec unit) {
    return std::make_shared<FiniteDimAlgebra>(std::move(base), std::move(labels),
                                              std::move(basis_products), std::move(unit));
}

AlgebraMorphism::AlgebraMorphism(AlgPtr source, AlgPtr target, ExactMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_->dim() || matrix_.cols() != source_->dim())
        throw Error("morphism matrix has wrong shape");
    if (source_->base()->description() != target_->base()->description())
        throw Error("morphism endpoints have different base fields");
    if (apply(source_->unit()) != target_->unit())
        throw Error("morphism does not preserve the unit");
    for (size_t i = 0; i < source_->dim(); ++i)
        for (size_t j = i; j < source_->dim(); ++j)
            if (apply(source_->basis_product(i, j)) !=
                target_->mul(apply(source_->basis_vector(i)), apply(source_->basis_vector(j))))
                throw Error("morphism is not multiplicative at basis pair (" +
                            source_->labels()[i] + ", " + source_->labels()[j] + ")");
}

Subspace mult_closure(const FiniteDimAlgebra& alg, const std::vector<Vec>& generators) {
    Subspace span = Subspace::from_vectors(alg.base(), alg.dim(), generators);
    for (;;) {
        std::vector<Vec> products;
        for (const Vec& g : generators)
            for (size_t i = 0; i < span.dim(); ++i) products.push_back(alg.mul(g, span.basis_vector(i)));
        Subspace next = span.sum(Subspace::from_vectors(alg.base(), alg.dim(), products));
        if (next.dim() == span.dim()) break;
        span = next;
    }
    for (size_t i = 0; i < span.dim(); ++i)
        for (size_t j = i; j < span.dim(); ++j)
            if (!span.contains_vector(alg.mul(span.basis_vector(i), span.basis_vector(j))))
                throw Error("mult_closure fixed point is not closed under multiplication");
    return span;
}

AlgPtr algebra_from_extension(const ExtFieldPtr& ext) {
    size_t n = ext->degree();
    FieldPtr base = ext->base();
    std::vector<std::string> labels;
    std::vector<Value> powers; // x^i as field elements
    Value x = ext->generator();
    Value acc = ext->one();
    for (size_t i = 0; i < n; ++i) {
        labels.push_back(i == 0 ? "1" : (i == 1 ? ext->var() : ext->var() + "^" + std::to_string(i)));
        powers.push_back(acc);
        acc = ext->mul(acc, x);
    }
    std::vector<Vec> table;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) table.push_back(ext->mul(powers[i], powers[j]).as_vec());
    Vec unit = ext->one().as_vec();
    return make_algebra(std::move(base), std::move(labels), std::move(table), std::move(unit));
}

AlgPtr trivial_algebra(FieldPtr base) {
    Vec unit{base->one()};
    return make_algebra(base, {"1"}, {Vec{base->one()}}, unit);
}

AlgPtr truncated_poly_algebra(FieldPtr base, const std::string& var, unsigned d) {
    if (d == 0) throw Error("truncation order must be positive");
    std::vector<std::string> labels;
    for (unsigned i = 0; i < d; ++i)
        labels.push_back(i == 0 ? "1" : (i == 1 ? var : var + "^" + std::to_string(i)));
    std::vector<Vec> table;
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            Vec v(d, base->zero());
            if (i + j < d) v[i + j] = base->one();
            table.push_back(std::move(v));
        }
    Vec unit(d, base->zero());
    unit[0] = base->one();
    return make_algebra(std::move(base), std::move(labels), std::move(table), std::move(unit));
}

} // namespace qflab
