#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

// Violation of an operation's preconditions or of a structural invariant
// (mismatched bases, non-equivariant map, non-split lattice, ...).
// The CLI maps these to exit code 1; bad usage is handled separately.
class domain_error : public std::runtime_error {
public:
    domain_error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace qcs
