#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "charsieve/common.hpp"

namespace charsieve {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 48;
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive Gauss-Kronrod 7-15 on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opts = {});

// Same, with the interval pre-split at the given interior breakpoints
// (used for piecewise-smooth integrands such as fractional parts).
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& interior_breaks, const QuadOptions& opts = {});

cdouble integrate_complex(const std::function<cdouble(double)>& f, double a, double b,
                          const QuadOptions& opts = {});

}  // namespace charsieve
