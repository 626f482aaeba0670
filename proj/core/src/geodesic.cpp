#include "bianchi/geodesic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "bianchi/errors.hpp"
#include "bianchi/specfun.hpp"

namespace bianchi::geodesic {

namespace {

constexpr double kPi = std::numbers::pi;

double band_width(double C) { return kSeparatrixBand * std::max(1.0, std::abs(C)); }

}  // namespace

double hamiltonian(const MetricParams& metric, const TrajectoryState& s) {
  const double w = s.p1 * std::cos(s.q0) - s.p2 * std::sin(s.q0);
  return 0.5 * (metric.A * s.p0 * s.p0 + s.p1 * s.p1 + s.p2 * s.p2 + (metric.B - 1.0) * w * w);
}

std::array<double, 6> hamilton_rhs(const MetricParams& metric, const TrajectoryState& s) {
  const double c = std::cos(s.q0);
  const double sn = std::sin(s.q0);
  const double w = s.p1 * c - s.p2 * sn;
  const double bm1 = metric.B - 1.0;
  return {metric.A * s.p0,
          s.p1 + bm1 * w * c,
          s.p2 - bm1 * w * sn,
          bm1 * w * (s.p1 * sn + s.p2 * c),
          0.0,
          0.0};
}

std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::rotation: return "rotation";
    case RegimeKind::libration: return "libration";
    case RegimeKind::separatrix: return "separatrix";
    case RegimeKind::equilibrium: return "equilibrium";
  }
  return "?";
}

PendulumRegime reduce_to_pendulum(const MetricParams& metric, double c1, double h0) {
  if (!std::isfinite(c1) || !std::isfinite(h0)) throw DomainError("non-finite pendulum data");
  PendulumRegime r;
  r.A = metric.A;
  r.C = 0.25 * (metric.B - 1.0) * c1 * c1;
  r.h0 = h0;
  const double aC = std::abs(r.C);
  if (aC == 0.0) {
    if (h0 < -band_width(0.0)) throw DomainError("negative kinetic energy in free motion");
    r.kind = h0 > 0.0 ? RegimeKind::rotation : RegimeKind::equilibrium;
    return r;
  }
  r.omega = 2.0 * std::sqrt(metric.A * aC);
  const double band = band_width(r.C);
  if (h0 < -aC - band) throw DomainError("pendulum energy below the potential minimum");
  r.modulus = std::sqrt(std::max(0.0, (h0 + aC) / (2.0 * aC)));
  if (std::abs(h0 - aC) <= band) {
    r.kind = RegimeKind::separatrix;
    r.modulus = 1.0;
  } else if (h0 > aC) {
    r.kind = RegimeKind::rotation;
  } else if (h0 + aC <= band) {
    r.kind = RegimeKind::equilibrium;
    r.modulus = 0.0;
  } else {
    r.kind = RegimeKind::libration;
  }
  return r;
}

PendulumSolution::PendulumSolution(const PendulumRegime& regime, double q0, double p0)
    : regime_(regime), q0_init_(q0), p0_init_(p0) {
  const double h = 0.5 * regime.A * p0 * p0 + regime.C * std::cos(2.0 * q0);
  const double scale = std::max({1.0, std::abs(regime.h0), std::abs(regime.C)});
  if (std::abs(h - regime.h0) > 1e-12 * scale) {
    throw ConsistencyError("initial data has pendulum energy " + std::to_string(h) + ", regime says " +
                           std::to_string(regime.h0));
  }
  if (regime.C == 0.0 || regime.kind == RegimeKind::equilibrium) return;

  // phi = 2 q0 - theta_min obeys phi'' = -omega^2 sin phi, phi' = 2 A p0.
  theta_min_ = regime.C > 0.0 ? kPi : 0.0;
  const double raw = 2.0 * q0 - theta_min_;
  const double phi0 = std::remainder(raw, 2.0 * kPi);
  shift_ = raw - phi0;
  const double dphi0 = 2.0 * regime.A * p0;
  const double k = regime.modulus;
  const double w = regime.omega;
  sigma_ = dphi0 >= 0.0 ? 1.0 : -1.0;
  switch (regime.kind) {
    case RegimeKind::libration: {
      const double sn0 = std::sin(0.5 * phi0) / k;
      const double cn0 = dphi0 / (2.0 * k * w);
      u0_ = specfun::incomplete_elliptic_F(std::atan2(sn0, cn0), k);
      break;
    }
    case RegimeKind::rotation:
      u0_ = specfun::incomplete_elliptic_F(sigma_ * 0.5 * phi0, 1.0 / k);
      break;
    case RegimeKind::separatrix:
      u0_ = std::asinh(std::tan(sigma_ * 0.5 * phi0));
      break;
    case RegimeKind::equilibrium:
      break;
  }
}

std::pair<double, double> PendulumSolution::operator()(double t) const {
  const PendulumRegime& r = regime_;
  if (r.C == 0.0) return {q0_init_ + r.A * p0_init_ * t, p0_init_};
  const double k = r.modulus;
  const double w = r.omega;
  double phi = 0.0;
  double dphi = 0.0;
  switch (r.kind) {
    case RegimeKind::equilibrium:
      return {q0_init_, p0_init_};
    case RegimeKind::libration: {
      const auto j = specfun::jacobi_sn_cn_dn(w * t + u0_, k);
      phi = 2.0 * std::atan2(k * j.sn, j.dn);
      dphi = 2.0 * k * w * j.cn;
      break;
    }
    case RegimeKind::rotation: {
      const double u = k * w * t + u0_;
      const double kappa = 1.0 / k;
      phi = 2.0 * sigma_ * specfun::jacobi_amplitude(u, kappa);
      dphi = 2.0 * sigma_ * k * w * specfun::jacobi_sn_cn_dn(u, kappa).dn;
      break;
    }
    case RegimeKind::separatrix: {
      const double u = w * t + u0_;
      phi = 2.0 * sigma_ * std::atan(std::sinh(u));
      dphi = 2.0 * sigma_ * w / std::cosh(u);
      break;
    }
  }
  return {0.5 * (phi + shift_ + theta_min_), dphi / (2.0 * r.A)};
}

std::pair<double, double> pendulum_exact(const PendulumRegime& regime, double q0_init, double p0_init, double t) {
  return PendulumSolution(regime, q0_init, p0_init)(t);
}

Trajectory integrate_geodesic(const MetricParams& metric, const TrajectoryState& initial, double t_max,
                              double dt_out) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
  if (!(dt_out > 0.0)) throw DomainError("output step must be positive");

  Trajectory out;
  out.c = std::hypot(initial.p1, initial.p2);
  out.meridian = out.c == 0.0;
  out.beta = out.meridian ? 0.0 : std::atan2(initial.p2, initial.p1);
  const double cb = std::cos(out.beta);
  const double sb = std::sin(out.beta);
  const double c = out.c;

  // Frame with p2 = 0: q0' = q0 + beta, (q1', q2') = R(-beta) (q1, q2).
  const double q0p = initial.q0 + out.beta;
  const double h0 = 0.5 * metric.A * initial.p0 * initial.p0 + 0.25 * (metric.B - 1.0) * c * c * std::cos(2.0 * q0p);
  out.regime = reduce_to_pendulum(metric, c, h0);
  const PendulumSolution pendulum(out.regime, q0p, initial.p0);
  const double q1p0 = cb * initial.q1 + sb * initial.q2;
  const double q2p0 = -sb * initial.q1 + cb * initial.q2;
  const double q2_const = out.meridian ? q2p0 : q2p0 + initial.p0 / c;

  auto q1_rate = [&](double tau) {
    const double cq = std::cos(pendulum(tau).first);
    return c + (metric.B - 1.0) * c * cq * cq;
  };

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt_out - 1e-9));
  out.samples.reserve(steps + 1);
  double q1p = q1p0;
  double t_prev = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = std::min(static_cast<double>(i) * dt_out, t_max);
    if (i > 0 && !out.meridian) {
      q1p += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(q1_rate, t_prev, t, 8, 1e-12);
    }
    t_prev = t;
    const auto [q0t, p0t] = pendulum(t);
    const double q2p = out.meridian ? q2p0 : q2_const - p0t / c;
    TrajectoryState s;
    s.t = t;
    s.q0 = q0t - out.beta;
    s.p0 = p0t;
    s.q1 = cb * q1p - sb * q2p;
    s.q2 = sb * q1p + cb * q2p;
    s.p1 = initial.p1;
    s.p2 = initial.p2;
    out.samples.push_back(s);
  }
  return out;
}

std::vector<std::pair<std::string, double>> polynomial_integrals(int n, double p1, double p2) {
  const double r2 = p1 * p1 + p2 * p2;
  const double cubic = p1 * p1 * p1 - 3.0 * p1 * p2 * p2;
  switch (n) {
    case 1: return {{"p1", p1}, {"p2", p2}};
    case 2: return {{"p1^2", p1 * p1}, {"p2^2", p2 * p2}};
    case 3: return {{"p1^2+p2^2", r2}, {"p1^3-3p1p2^2", cubic}};
    case 4: return {{"p1^2+p2^2", r2}, {"p1^2p2^2", p1 * p1 * p2 * p2}};
    case 6: return {{"p1^2+p2^2", r2}, {"(p1^3-3p1p2^2)^2", cubic * cubic}};
    default: throw DomainError("symmetry order must be one of 1, 2, 3, 4, 6");
  }
}

std::vector<InvariantDrift> invariants_check(const MetricParams& metric, int n,
                                             const std::vector<TrajectoryState>& samples) {
  if (samples.empty()) throw DomainError("empty trajectory");
  const auto& first = samples.front();
  const double H0 = hamiltonian(metric, first);
  const auto F0 = polynomial_integrals(n, first.p1, first.p2);
  std::vector<InvariantDrift> out;
  out.push_back({"H", 0.0});
  for (const auto& [name, value] : F0) out.push_back({name, 0.0});
  for (const auto& s : samples) {
    out[0].max_drift = std::max(out[0].max_drift, std::abs(hamiltonian(metric, s) - H0));
    const auto F = polynomial_integrals(n, s.p1, s.p2);
    for (std::size_t i = 0; i < F.size(); ++i) {
      out[i + 1].max_drift = std::max(out[i + 1].max_drift, std::abs(F[i].second - F0[i].second));
    }
  }
  return out;
}

std::string_view to_string(ClairaultCase c) {
  switch (c) {
    case ClairaultCase::lower_rest: return "2H=p^2";
    case ClairaultCase::trapped: return "p^2<2H<Bp^2";
    case ClairaultCase::critical: return "2H=Bp^2";
    case ClairaultCase::free: return "2H>Bp^2";
  }
  return "?";
}

ClairaultCase clairault_case(const MetricParams& metric, double H, double p) {
  if (!(metric.B > 1.0)) throw DomainError("Clairault cases need B > 1");
  if (p == 0.0) throw DomainError("Clairault cases need p != 0");
  const double two_h = 2.0 * H;
  const double lo = p * p;
  const double hi = metric.B * p * p;
  const double band = kSeparatrixBand * std::max(1.0, two_h);
  if (two_h < lo - band) throw DomainError("2H below p^2 is not reachable");
  if (std::abs(two_h - lo) <= band) return ClairaultCase::lower_rest;
  if (std::abs(two_h - hi) <= band) return ClairaultCase::critical;
  return two_h < hi ? ClairaultCase::trapped : ClairaultCase::free;
}

}  // namespace bianchi::geodesic
