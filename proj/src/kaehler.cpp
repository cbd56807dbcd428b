#include "qflab/kaehler.hpp"

#include <sstream>

namespace qflab {

namespace {

Vec act(const ModuleAction& target, const FieldPtr& k, const Vec& s_coords, const Vec& m) {
    Vec r(target.dim, k->zero());
    for (size_t t = 0; t < s_coords.size(); ++t) {
        if (k->is_zero(s_coords[t])) continue;
        Vec part = target.action[t].apply(m);
        for (size_t i = 0; i < target.dim; ++i) r[i] = k->add(r[i], k->mul(s_coords[t], part[i]));
    }
    return r;
}

bool vec_is_zero(const Field& k, const Vec& a) {
    for (const Value& x : a)
        if (!k.is_zero(x)) return false;
    return true;
}

std::string coords_str(const Field& k, const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << k.str(v[i]);
    }
    os << ")";
    return os.str();
}

} // namespace

PresentedAlgebra make_presented_algebra(FieldPtr base, std::vector<std::string> generators,
                                        std::vector<MultiPoly> relations, AlgPtr realization,
                                        std::vector<Vec> generator_images,
                                        std::vector<MultiPoly> basis_reps) {
    if (generator_images.size() != generators.size())
        throw Error("presentation: one image per generator required");
    if (basis_reps.size() != realization->dim())
        throw Error("presentation: one representative per basis vector required");
    for (const MultiPoly& f : relations)
        if (!realization->is_zero(realization->eval_poly(f, generator_images)))
            throw Error("presentation: relation " + f.str() +
                        " does not vanish in the realization");
    for (size_t c = 0; c < basis_reps.size(); ++c)
        if (realization->eval_poly(basis_reps[c], generator_images) !=
            realization->basis_vector(c))
            throw Error("presentation: representative " + basis_reps[c].str() +
                        " does not evaluate to basis vector " + realization->labels()[c]);
    return {std::move(base), std::move(generators), std::move(relations), std::move(realization),
            std::move(generator_images), std::move(basis_reps)};
}

PresentedAlgebra presented_from_extension(const ExtFieldPtr& ext) {
    if (ext->degree() < 2)
        throw Error("presentation needs the generator as a basis vector (degree >= 2)");
    FieldPtr base = ext->base();
    std::string var = ext->var();
    AlgPtr s = algebra_from_extension(ext);

    MultiPoly::Terms terms;
    const std::vector<Value>& mod = ext->modulus();
    for (size_t k = 0; k < mod.size(); ++k) {
        if (base->is_zero(mod[k])) continue;
        terms[Monomial{{static_cast<unsigned>(k)}}] = mod[k];
    }
    MultiPoly relation = MultiPoly::from_terms(base, {var}, std::move(terms));

    std::vector<MultiPoly> reps;
    MultiPoly x = MultiPoly::variable(base, {var}, var);
    MultiPoly power = MultiPoly::constant(base, {var}, base->one());
    for (size_t c = 0; c < s->dim(); ++c) {
        reps.push_back(power);
        power = power * x;
    }
    return make_presented_algebra(base, {var}, {relation}, s, {s->basis_vector(1)},
                                  std::move(reps));
}

PresentedAlgebra presented_truncated(FieldPtr base, const std::string& var, unsigned d) {
    if (d < 2) throw Error("presentation needs the generator as a basis vector (d >= 2)");
    AlgPtr s = truncated_poly_algebra(base, var, d);
    MultiPoly x = MultiPoly::variable(base, {var}, var);
    MultiPoly relation = MultiPoly::constant(base, {var}, base->one());
    for (unsigned k = 0; k < d; ++k) relation = relation * x;
    std::vector<MultiPoly> reps;
    MultiPoly power = MultiPoly::constant(base, {var}, base->one());
    for (size_t c = 0; c < s->dim(); ++c) {
        reps.push_back(power);
        power = power * x;
    }
    return make_presented_algebra(base, {var}, {relation}, s, {s->basis_vector(1)},
                                  std::move(reps));
}

ModuleAction regular_module(const AlgPtr& s) {
    ModuleAction m;
    m.dim = s->dim();
    for (size_t t = 0; t < s->dim(); ++t) m.action.push_back(s->mult_matrix(s->basis_vector(t)));
    return m;
}

KaehlerModule kaehler_module(const PresentedAlgebra& a) {
    const FieldPtr& k = a.base;
    const AlgPtr& s = a.realization;
    size_t n = a.generators.size();
    size_t ds = s->dim();
    size_t ambient = n * ds;

    // Jacobian rows: e_c · ∂f_i/∂x_j in slot j, over all relations i and all
    // basis vectors c of S.
    std::vector<Vec> rows;
    for (const MultiPoly& f : a.relations) {
        std::vector<Vec> jac;
        for (size_t j = 0; j < n; ++j)
            jac.push_back(s->eval_poly(f.derivative(a.generators[j]), a.generator_images));
        for (size_t c = 0; c < ds; ++c) {
            Vec row(ambient, k->zero());
            for (size_t j = 0; j < n; ++j) {
                Vec part = s->mul(s->basis_vector(c), jac[j]);
                for (size_t p = 0; p < ds; ++p) row[j * ds + p] = part[p];
            }
            rows.push_back(std::move(row));
        }
    }
    Subspace span = Subspace::from_vectors(k, ambient, rows);

    // The row span must be stable under the slotwise S-action, or the induced
    // module structure on the quotient would depend on lift choices.
    for (size_t t = 0; t < ds; ++t)
        for (size_t r = 0; r < span.dim(); ++r) {
            Vec v = span.basis_vector(r);
            Vec moved(ambient, k->zero());
            for (size_t j = 0; j < n; ++j) {
                Vec slot(ds);
                for (size_t p = 0; p < ds; ++p) slot[p] = v[j * ds + p];
                Vec prod = s->mul(s->basis_vector(t), slot);
                for (size_t p = 0; p < ds; ++p) moved[j * ds + p] = prod[p];
            }
            if (!span.contains_vector(moved))
                throw Error("Jacobian row span is not an S-submodule");
        }

    QuotientSpace qs = quotient_space(k, ambient, span);

    std::vector<ExactMatrix> s_action;
    for (size_t t = 0; t < ds; ++t) {
        ExactMatrix mat(k, qs.dim, qs.dim);
        for (size_t c = 0; c < qs.dim; ++c) {
            Vec v = qs.lift.col(c);
            Vec moved(ambient, k->zero());
            for (size_t j = 0; j < n; ++j) {
                Vec slot(ds);
                for (size_t p = 0; p < ds; ++p) slot[p] = v[j * ds + p];
                Vec prod = s->mul(s->basis_vector(t), slot);
                for (size_t p = 0; p < ds; ++p) moved[j * ds + p] = prod[p];
            }
            Vec img = qs.project.apply(moved);
            for (size_t r = 0; r < qs.dim; ++r) mat.set(r, c, img[r]);
        }
        s_action.push_back(std::move(mat));
    }

    // Universal derivation on basis vectors via their representatives.
    ExactMatrix d_matrix(k, qs.dim, ds);
    for (size_t c = 0; c < ds; ++c) {
        Vec v(ambient, k->zero());
        for (size_t j = 0; j < n; ++j) {
            Vec part = s->eval_poly(a.basis_reps[c].derivative(a.generators[j]),
                                    a.generator_images);
            for (size_t p = 0; p < ds; ++p) v[j * ds + p] = part[p];
        }
        Vec img = qs.project.apply(v);
        for (size_t r = 0; r < qs.dim; ++r) d_matrix.set(r, c, img[r]);
    }

    // d must kill the unit and satisfy the Leibniz rule on all basis pairs —
    // this pins down consistency of the representatives with the product.
    if (!vec_is_zero(*k, d_matrix.apply(s->unit())))
        throw Error("universal derivation does not kill 1");
    for (size_t p = 0; p < ds; ++p)
        for (size_t q2 = 0; q2 < ds; ++q2) {
            Vec lhs = d_matrix.apply(s->basis_product(p, q2));
            Vec rhs(qs.dim, k->zero());
            {
                Vec t1 = s_action[p].apply(d_matrix.col(q2));
                Vec t2 = s_action[q2].apply(d_matrix.col(p));
                for (size_t r = 0; r < qs.dim; ++r) rhs[r] = k->add(t1[r], t2[r]);
            }
            if (lhs != rhs)
                throw Error("universal derivation violates the Leibniz rule on " +
                            s->labels()[p] + " · " + s->labels()[q2]);
        }

    size_t dim = qs.dim;
    return {a, dim, dim == 0, std::move(qs), std::move(d_matrix), std::move(s_action)};
}

DerivationReport derivation_check(const PresentedAlgebra& a, const ModuleAction& target,
                                  const std::vector<Vec>& images) {
    const FieldPtr& k = a.base;
    if (images.size() != a.generators.size())
        throw Error("derivation_check: one image per generator required");
    for (const MultiPoly& f : a.relations) {
        Vec total(target.dim, k->zero());
        for (size_t j = 0; j < a.generators.size(); ++j) {
            Vec coeff = a.realization->eval_poly(f.derivative(a.generators[j]),
                                                 a.generator_images);
            Vec part = act(target, k, coeff, images[j]);
            for (size_t i = 0; i < target.dim; ++i) total[i] = k->add(total[i], part[i]);
        }
        if (!vec_is_zero(*k, total))
            return {false, "relation " + f.str() + " maps to " + coords_str(*k, total)};
    }
    return {true, ""};
}

ExactMatrix derivation_matrix(const PresentedAlgebra& a, const ModuleAction& target,
                              const std::vector<Vec>& images) {
    const FieldPtr& k = a.base;
    DerivationReport rep = derivation_check(a, target, images);
    if (!rep.valid) throw Error("invalid derivation: " + rep.witness);

    const AlgPtr& s = a.realization;
    size_t ds = s->dim();
    ExactMatrix d(k, target.dim, ds);
    for (size_t c = 0; c < ds; ++c) {
        Vec col(target.dim, k->zero());
        for (size_t j = 0; j < a.generators.size(); ++j) {
            Vec coeff = s->eval_poly(a.basis_reps[c].derivative(a.generators[j]),
                                     a.generator_images);
            Vec part = act(target, k, coeff, images[j]);
            for (size_t i = 0; i < target.dim; ++i) col[i] = k->add(col[i], part[i]);
        }
        for (size_t r = 0; r < target.dim; ++r) d.set(r, c, col[r]);
    }

    for (size_t p = 0; p < ds; ++p)
        for (size_t q2 = 0; q2 < ds; ++q2) {
            Vec lhs = d.apply(s->basis_product(p, q2));
            Vec t1 = target.action[p].apply(d.col(q2));
            Vec t2 = target.action[q2].apply(d.col(p));
            Vec rhs(target.dim, k->zero());
            for (size_t r = 0; r < target.dim; ++r) rhs[r] = k->add(t1[r], t2[r]);
            if (lhs != rhs)
                throw Error("derivation violates the Leibniz rule on " + s->labels()[p] + " · " +
                            s->labels()[q2]);
        }
    return d;
}

WToOmegaReport w_to_omega(const QPhiResult& q, const KaehlerModule& omega) {
    const AlgPtr& s = q.s;
    const FieldPtr& k = s->base();
    const AlgPtr& other = omega.a.realization;
    if (s->dim() != other->dim() || s->labels() != other->labels() ||
        s->base()->description() != other->base()->description())
        throw Error("w_to_omega: Q and Ω were built from different algebras");

    size_t n = s->dim();
    size_t m = q.q->dim();
    auto triple_image = [&](size_t i, size_t j, size_t t) {
        // t(d(e_i)·e_j − e_i·d(e_j))
        Vec left = omega.s_action[j].apply(omega.d_matrix.col(i));
        Vec right = omega.s_action[i].apply(omega.d_matrix.col(j));
        Vec diff(omega.dim);
        for (size_t r = 0; r < omega.dim; ++r) diff[r] = k->sub(left[r], right[r]);
        return omega.s_action[t].apply(diff);
    };

    ExactMatrix on_q(k, omega.dim, m);
    for (size_t c = 0; c < m; ++c) {
        size_t rep = 0;
        for (size_t a = 0; a < q.triple_lift.rows(); ++a)
            if (!k->is_zero(q.triple_lift.at(a, c))) rep = a;
        size_t t = rep % n, ij = rep / n, j = ij % n, i = ij / n;
        Vec img = triple_image(i, j, t);
        for (size_t r = 0; r < omega.dim; ++r) on_q.set(r, c, img[r]);
    }

    // The triple-level map must factor through Q's balancing relations.
    {
        ExactMatrix qrel = kernel_basis(q.triple_project);
        for (size_t r = 0; r < qrel.rows(); ++r) {
            Vec rel = qrel.row(r);
            Vec img(omega.dim, k->zero());
            for (size_t a = 0; a < rel.size(); ++a) {
                if (k->is_zero(rel[a])) continue;
                size_t t = a % n, ij = a / n, j = ij % n, i = ij / n;
                Vec part = triple_image(i, j, t);
                for (size_t x = 0; x < omega.dim; ++x)
                    img[x] = k->add(img[x], k->mul(rel[a], part[x]));
            }
            if (!vec_is_zero(*k, img))
                throw Error("w_to_omega: map does not factor through Q");
        }
    }

    ExactMatrix on_w(k, omega.dim, q.w.dim());
    for (size_t c = 0; c < q.w.dim(); ++c) {
        Vec img = on_q.apply(q.w.basis_vector(c));
        for (size_t r = 0; r < omega.dim; ++r) on_w.set(r, c, img[r]);
    }

    size_t rank = rref(on_w).rank;
    return {std::move(on_q), std::move(on_w), rank == omega.dim, q.w.dim() - rank};
}

} // namespace qflab
