#pragma once

#include <stdexcept>
#include <string>

namespace igavib {

// Bad user input: malformed model files, out-of-range parameters, schema
// violations. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry construction/evaluation failures: out-of-domain parameters,
// crossing ruling lines, failed point inversion, degenerate meshes.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures downstream of valid input: factorization breakdown,
// eigen iteration non-convergence. CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace igavib
