#pragma once

#include <stdexcept>
#include <string>

namespace fsheat {

/// Parameter outside the admissible range of a formula.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// A quadrature or series truncation failed to reach its tolerance.
/// Carries the residual estimate that was achieved.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& msg, double residual)
      : std::runtime_error(msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Numerical blow-up in a time-stepping scheme.
class stability_error : public std::runtime_error {
 public:
  stability_error(const std::string& msg, double t, double x)
      : std::runtime_error(msg), t_(t), x_(x) {}
  double where_t() const { return t_; }
  double where_x() const { return x_; }

 private:
  double t_;
  double x_;
};

}  // namespace fsheat
