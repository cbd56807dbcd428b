#include "qflab/exterior.hpp"

#include <sstream>

namespace qflab {

ExteriorElement::ExteriorElement(RingPtr coeff, std::vector<std::string> gen_names)
    : coeff_(std::move(coeff)), names_(std::move(gen_names)) {
    if (names_.size() > 31) throw Error("too many square-zero generators");
}

ExteriorElement ExteriorElement::scalar(RingPtr coeff, std::vector<std::string> gen_names,
                                        const Value& c) {
    ExteriorElement e(std::move(coeff), std::move(gen_names));
    e.insert(0, c);
    return e;
}

ExteriorElement ExteriorElement::generator(RingPtr coeff, std::vector<std::string> gen_names,
                                           size_t i) {
    ExteriorElement e(coeff, std::move(gen_names));
    if (i >= e.names_.size()) throw Error("generator index out of range");
    e.insert(std::uint32_t{1} << i, coeff->one());
    return e;
}

Value ExteriorElement::component(std::uint32_t mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? coeff_->zero() : it->second;
}

void ExteriorElement::insert(std::uint32_t mask, const Value& c) {
    if (coeff_->is_zero(c)) return;
    auto [it, fresh] = comps_.emplace(mask, c);
    if (!fresh) {
        Value s = coeff_->add(it->second, c);
        if (coeff_->is_zero(s))
            comps_.erase(it);
        else
            it->second = s;
    }
}

namespace {
void require_same_layout(const RingPtr& ra, const RingPtr& rb, size_t na, size_t nb) {
    if (ra->description() != rb->description() || na != nb)
        throw Error("square-zero elements live in different algebras");
}
} // namespace

ExteriorElement ExteriorElement::operator+(const ExteriorElement& o) const {
    require_same_layout(coeff_, o.coeff_, names_.size(), o.names_.size());
    ExteriorElement r = *this;
    for (const auto& [m, c] : o.comps_) r.insert(m, c);
    return r;
}

ExteriorElement ExteriorElement::operator-() const {
    ExteriorElement r(coeff_, names_);
    for (const auto& [m, c] : comps_) r.comps_.emplace(m, coeff_->neg(c));
    return r;
}

ExteriorElement ExteriorElement::operator-(const ExteriorElement& o) const {
    return *this + (-o);
}

ExteriorElement ExteriorElement::operator*(const ExteriorElement& o) const {
    require_same_layout(coeff_, o.coeff_, names_.size(), o.names_.size());
    ExteriorElement r(coeff_, names_);
    for (const auto& [ma, ca] : comps_)
        for (const auto& [mb, cb] : o.comps_) {
            if (ma & mb) continue; // a repeated generator squares to zero
            r.insert(ma | mb, coeff_->mul(ca, cb));
        }
    return r;
}

ExteriorElement ExteriorElement::scale(const Value& c) const {
    ExteriorElement r(coeff_, names_);
    for (const auto& [m, t] : comps_) r.insert(m, coeff_->mul(c, t));
    return r;
}

bool ExteriorElement::operator==(const ExteriorElement& o) const {
    return coeff_->description() == o.coeff_->description() && names_ == o.names_ &&
           comps_ == o.comps_;
}

ExteriorElement ExteriorElement::inverse() const {
    const auto* k = dynamic_cast<const Field*>(coeff_.get());
    if (!k) throw Error("inverse needs field coefficients");
    Value c0 = component(0);
    if (coeff_->is_zero(c0)) throw DivisionByZero("scalar part is zero, element not invertible");
    // 1/(c + n) = (1/c) * sum_{j} (-n/c)^j, n nilpotent of index <= #generators + 1.
    ExteriorElement n = *this - scalar(coeff_, names_, c0);
    ExteriorElement m = n.scale(k->neg(k->inv(c0)));
    ExteriorElement acc = scalar(coeff_, names_, coeff_->one());
    ExteriorElement powm = scalar(coeff_, names_, coeff_->one());
    for (size_t j = 1; j <= names_.size(); ++j) {
        powm = powm * m;
        acc = acc + powm;
    }
    return acc.scale(k->inv(c0));
}

std::string ExteriorElement::str() const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, c] : comps_) {
        if (!first) os << " + ";
        first = false;
        std::string mono;
        for (size_t i = 0; i < names_.size(); ++i) {
            if (!(mask & (std::uint32_t{1} << i))) continue;
            if (!mono.empty()) mono += "*";
            mono += names_[i];
        }
        std::string cs = coeff_->str(c);
        bool simple = cs.find('+') == std::string::npos && cs.find(' ') == std::string::npos;
        if (mono.empty())
            os << (simple ? cs : "(" + cs + ")");
        else if (coeff_->is_one(c))
            os << mono;
        else
            os << (simple ? cs : "(" + cs + ")") << "*" << mono;
    }
    return os.str();
}

} // namespace qflab
