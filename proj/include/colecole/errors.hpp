#ifndef COLECOLE_ERRORS_HPP
#define COLECOLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace colecole {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization or linear solve fails.
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace colecole

#endif // COLECOLE_ERRORS_HPP
