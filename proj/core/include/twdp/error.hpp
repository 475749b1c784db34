#pragma once

#include <stdexcept>
#include <string>

namespace twdp {

/// Input outside the mathematical domain of an operation (negative radius,
/// odd moment order, out-of-range parameter, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver its stated accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The parameter point sits where the quantity is undefined or unidentifiable
/// (K = 0, Gamma in {0, 1}, singular Fisher matrix).
class BoundaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace twdp
