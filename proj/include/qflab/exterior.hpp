#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qflab/ring.hpp"

namespace qflab {

// Element of R[S_1..S_n]/(S_i², S_iS_j - S_jS_i): square-zero generators with
// no sign rule (the generators commute). Components are indexed by subsets of
// {0..n-1} as bitmasks; multiplication kills any product with a repeated
// generator. Coefficients live in an arbitrary exact ring (often a function
// field, giving dual numbers and their several-variable analogues).
class ExteriorElement {
public:
    ExteriorElement(RingPtr coeff, std::vector<std::string> gen_names);
    static ExteriorElement scalar(RingPtr coeff, std::vector<std::string> gen_names, const Value& c);
    static ExteriorElement generator(RingPtr coeff, std::vector<std::string> gen_names, size_t i);

    const RingPtr& coeff_ring() const { return coeff_; }
    size_t gen_count() const { return names_.size(); }

    bool is_zero() const { return comps_.empty(); }
    Value component(std::uint32_t mask) const; // zero if absent

    ExteriorElement operator+(const ExteriorElement& o) const;
    ExteriorElement operator-(const ExteriorElement& o) const;
    ExteriorElement operator*(const ExteriorElement& o) const;
    ExteriorElement operator-() const;
    ExteriorElement scale(const Value& c) const;
    bool operator==(const ExteriorElement& o) const;
    bool operator!=(const ExteriorElement& o) const { return !(*this == o); }

    // Multiplicative inverse when the scalar part is invertible in a
    // coefficient field: geometric series in the nilpotent part (finite, the
    // generators are square-zero). Throws if the scalar part is zero.
    ExteriorElement inverse() const;

    std::string str() const;

private:
    void insert(std::uint32_t mask, const Value& c);

    RingPtr coeff_;
    std::vector<std::string> names_;
    std::map<std::uint32_t, Value> comps_;
};

} // namespace qflab
