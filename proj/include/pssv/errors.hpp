#ifndef PSSV_ERRORS_HPP
#define PSSV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pssv {

// Bad user input: malformed config files, unknown keys, out-of-range
// parameters. Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: inconsistent transforms, uncertainty violations,
// quadrature or root-bracket failures. Mapped to exit code 2 by the CLI.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pssv

#endif
