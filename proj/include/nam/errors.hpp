#ifndef NAM_ERRORS_HPP
#define NAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nam {

// Argument outside the mathematical domain of an operation (x <= 0 for
// digamma, df <= dim - 1 for a Wishart, mismatched lengths, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Floating-point breakdown: Cholesky failure, non-finite intermediate.
class NumericalFault : public std::runtime_error {
 public:
  explicit NumericalFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nam

#endif  // NAM_ERRORS_HPP
