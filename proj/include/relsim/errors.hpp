#pragma once

#include <stdexcept>

namespace relsim {

/// Invalid user-supplied configuration. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulation invariant was violated; results of the run are not
/// trustworthy. The CLI maps this to exit code 2.
class SimInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace relsim
