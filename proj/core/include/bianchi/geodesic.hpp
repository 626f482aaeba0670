#pragma once

// Geodesic flow of the left-invariant metric on E(2):
//   H = (A p0^2 + p1^2 + p2^2 + (B-1)(p1 cos q0 - p2 sin q0)^2) / 2.
// p1, p2 are conserved; in the frame p2 = 0 the pair (q0, p0) is a pendulum
//   h0 = A p0^2 / 2 + C cos 2q0,  C = (B-1) c1^2 / 4,
// solved in closed form with Jacobi elliptic functions.

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bianchi/metric.hpp"

namespace bianchi::geodesic {

struct TrajectoryState {
  double t = 0.0;
  double q0 = 0.0;  ///< unwrapped
  double q1 = 0.0;
  double q2 = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

double hamiltonian(const MetricParams& metric, const TrajectoryState& s);

/// Right-hand side of Hamilton's equations, in the order (q0, q1, q2, p0, p1, p2).
std::array<double, 6> hamilton_rhs(const MetricParams& metric, const TrajectoryState& s);

enum class RegimeKind { rotation, libration, separatrix, equilibrium };

std::string_view to_string(RegimeKind k);

struct PendulumRegime {
  RegimeKind kind = RegimeKind::equilibrium;
  double A = 1.0;
  double C = 0.0;
  double h0 = 0.0;
  double omega = 0.0;    ///< small-oscillation frequency 2 sqrt(A |C|)
  double modulus = 0.0;  ///< k with k^2 = (h0 + |C|) / (2|C|); 0 when C = 0
};

/// Relative width of the separatrix band around h0 = |C|.
inline constexpr double kSeparatrixBand = 1e-12;

PendulumRegime reduce_to_pendulum(const MetricParams& metric, double c1, double h0);

/// Closed-form pendulum flow from fixed initial data.
class PendulumSolution {
 public:
  /// Throws ConsistencyError unless A p0^2/2 + C cos 2q0 matches h0 to 1e-12.
  PendulumSolution(const PendulumRegime& regime, double q0, double p0);

  /// (q0(t), p0(t)); q0 is continuous in t.
  std::pair<double, double> operator()(double t) const;

  const PendulumRegime& regime() const noexcept { return regime_; }

 private:
  PendulumRegime regime_;
  double q0_init_;
  double p0_init_;
  double theta_min_ = 0.0;  ///< 2 q0 at the stable equilibrium
  double shift_ = 0.0;      ///< 2 pi multiple removed from 2 q0 - theta_min
  double sigma_ = 1.0;
  double u0_ = 0.0;
};

std::pair<double, double> pendulum_exact(const PendulumRegime& regime, double q0_init, double p0_init, double t);

struct Trajectory {
  std::vector<TrajectoryState> samples;
  PendulumRegime regime;
  double c = 0.0;     ///< |(p1, p2)|
  double beta = 0.0;  ///< atan2(p2, p1), the frame rotation
  bool meridian = false;
};

/// Samples at t = 0, dt_out, 2 dt_out, ... up to t_max (t_max included).
/// Throws DomainError for t_max <= 0 or dt_out <= 0.
Trajectory integrate_geodesic(const MetricParams& metric, const TrajectoryState& initial, double t_max,
                              double dt_out);

struct InvariantDrift {
  std::string name;
  double max_drift = 0.0;
};

/// H and the polynomial integrals of the order-n quotient, with
/// max |F(t) - F(0)| over the samples. Throws DomainError for unsupported n.
std::vector<InvariantDrift> invariants_check(const MetricParams& metric, int n,
                                             const std::vector<TrajectoryState>& samples);

/// Polynomial integrals in (p1, p2) for symmetry order n, paired with names.
std::vector<std::pair<std::string, double>> polynomial_integrals(int n, double p1, double p2);

/// Position of 2H against p^2 and B p^2 for B > 1.
enum class ClairaultCase {
  lower_rest,   ///< 2H = p^2
  trapped,      ///< p^2 < 2H < B p^2
  critical,     ///< 2H = B p^2
  free          ///< 2H > B p^2
};

std::string_view to_string(ClairaultCase c);

/// Throws DomainError for B <= 1 or p = 0 or 2H < p^2 beyond rounding.
ClairaultCase clairault_case(const MetricParams& metric, double H, double p);

}  // namespace bianchi::geodesic
