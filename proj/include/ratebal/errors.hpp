#pragma once

#include <stdexcept>
#include <string>

namespace ratebal {

// Thrown when a requested lattice (quantizer cells, joint message space)
// would exceed the configured size cap.
class size_cap_error : public std::length_error {
public:
    explicit size_cap_error(const std::string& what) : std::length_error(what) {}
};

// Thrown when an interval carries no probability mass under one of the
// hypotheses, so conditional quantities are undefined.
class degenerate_interval_error : public std::domain_error {
public:
    explicit degenerate_interval_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ratebal
