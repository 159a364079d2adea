#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

/// Invalid input: bad region coefficients, malformed config, out-of-range flags.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation broke down: NaN in a trajectory, singular factorization,
/// non-real convolution weights.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace viscowave
