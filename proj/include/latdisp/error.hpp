#pragma once

#include <stdexcept>
#include <string>

namespace latdisp {

/// Bad input: a precondition of a public operation does not hold.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// λ lies on the closed spectral interval where no root with |r| < 1 exists.
class SpectralPointError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A numerical routine (eigensolver, quadrature) failed to deliver its contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace latdisp
