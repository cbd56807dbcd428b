#pragma once

#include <string>
#include <vector>

#include "qflab/ring.hpp"

namespace qflab {

// K[x]/(f) for f monic and irreducible over the base field K. Elements are
// dense coordinate tuples of length deg f in the power basis 1, x, ..,
// x^(deg-1). Irreducibility is verified for deg f <= 3 (no-roots check:
// exhaustive over a finite base, rational-root theorem over Q); for larger
// degrees the caller has to vouch via assume_irreducible, and the field
// remembers that the check was skipped.
class ExtensionField : public Field {
public:
    virtual FieldPtr base() const = 0;
    virtual size_t degree() const = 0;
    virtual const std::string& var() const = 0;
    virtual Value generator() const = 0;
    // Monic modulus as deg+1 base-field coefficients, constant term first.
    virtual const std::vector<Value>& modulus() const = 0;
    virtual bool irreducibility_verified() const = 0;

    Value from_coords(Vec coords) const;
    Vec coords(const Value& v) const { return v.as_vec(); }
};

using ExtFieldPtr = std::shared_ptr<const ExtensionField>;

ExtFieldPtr make_extension_field(FieldPtr base, std::string var,
                                 std::vector<Value> modulus_coeffs,
                                 bool assume_irreducible = false);

} // namespace qflab
