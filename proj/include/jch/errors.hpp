#ifndef JCH_ERRORS_HPP
#define JCH_ERRORS_HPP

#include <stdexcept>

namespace jch {

// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required iterative solve did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A resource guard (basis dimension budget) refused the computation.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jch

#endif
