#pragma once

#include <string>
#include <vector>

namespace qflab {

// One verified identity with a human-readable trail; `details` carries the
// witness when the check fails (and may carry the instantiated statement when
// it passes).
struct NamedCheck {
    std::string name;
    bool pass = false;
    std::string details;
};

inline bool all_pass(const std::vector<NamedCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

} // namespace qflab
