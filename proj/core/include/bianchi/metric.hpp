#pragma once

#include <cmath>

#include "bianchi/errors.hpp"

namespace bianchi {

/// Constants A, B > 0 of the left-invariant metric
///   ds^2 = A^{-1} dq0^2 + B^{-1}(dq1^2 + dq2^2 + (B-1)(sin q0 dq1 + cos q0 dq2)^2).
/// B = 1 is the flat metric.
struct MetricParams {
  double A = 1.0;
  double B = 1.0;

  MetricParams() = default;
  MetricParams(double a, double b) : A(a), B(b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0)) {
      throw DomainError("metric constants A and B must be finite and positive");
    }
  }

  bool is_flat() const noexcept { return B == 1.0; }
};

}  // namespace bianchi
