// errors.hpp: Exception types shared by every qlevy module

#pragma once

#include <stdexcept>
#include <string>

namespace qlevy {

// Invalid construction input (A <= 1, b < 1, negative rates, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A quantity is mathematically undefined for the requested parameters,
// e.g. the pseudo-momentum eigenvalue for b >= A.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A series or moment diverges (the "infinite" branch of a piecewise result).
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

// Quadrature could not resolve the integrand (imaginary residue or negative
// probability beyond the error estimate).
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lattice-sum window too narrow: probability mass leaks past its edges.
class WindowOverflowError : public ResolutionError {
public:
    using ResolutionError::ResolutionError;
};

} // namespace qlevy
