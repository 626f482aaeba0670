#include "bianchi/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "bianchi/errors.hpp"

namespace bianchi::specfun {

namespace {

constexpr double kAgmGap = 1e-15;
constexpr int kMaxLevels = 16;  // quadratic convergence: 6 levels suffice for k < 1 - 1e-12

struct AgmLadder {
  std::array<double, kMaxLevels + 1> a{};
  std::array<double, kMaxLevels + 1> c{};
  int levels = 0;
};

AgmLadder agm_ladder(double k, double kc) {
  AgmLadder ladder;
  ladder.a[0] = 1.0;
  ladder.c[0] = k;
  double b = kc;
  int n = 0;
  while (std::abs(ladder.c[n]) > kAgmGap * ladder.a[n] && n < kMaxLevels) {
    ladder.a[n + 1] = 0.5 * (ladder.a[n] + b);
    ladder.c[n + 1] = 0.5 * (ladder.a[n] - b);
    b = std::sqrt(ladder.a[n] * b);
    ++n;
  }
  ladder.levels = n;
  return ladder;
}

}  // namespace

EllipticModulus::EllipticModulus(double k) : k_(k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1");
  }
}

double EllipticModulus::complementary() const noexcept {
  return std::sqrt((1.0 - k_) * (1.0 + k_));
}

double complete_elliptic_K(double k) {
  const EllipticModulus mod(k);
  const AgmLadder ladder = agm_ladder(mod.k(), mod.complementary());
  return std::numbers::pi / (2.0 * ladder.a[ladder.levels]);
}

JacobiTriple jacobi_sn_cn_dn(double x, double k) {
  if (!std::isfinite(x)) {
    throw DomainError("jacobi_sn_cn_dn: argument must be finite");
  }
  const EllipticModulus mod(k);
  if (mod.k() == 0.0) {
    return {std::sin(x), std::cos(x), 1.0};
  }
  const AgmLadder ladder = agm_ladder(mod.k(), mod.complementary());
  const int n = ladder.levels;
  const double quarter = std::numbers::pi / (2.0 * ladder.a[n]);
  const double xr = std::remainder(x, 4.0 * quarter);

  if (n == 0) {
    const double s = std::sin(xr);
    return {s, std::cos(xr), std::sqrt(1.0 - mod.m() * s * s)};
  }

  double phi = std::ldexp(ladder.a[n] * xr, n);
  for (int j = n; j >= 1; --j) {
    phi = 0.5 * (phi + std::asin(ladder.c[j] / ladder.a[j] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = k'^2 + k^2 cn^2: both terms nonnegative, no cancellation near cn = 0.
  const double kc = mod.complementary();
  return {sn, cn, std::sqrt(kc * kc + mod.m() * cn * cn)};
}

double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || (x == 0.0) + (y == 0.0) + (z == 0.0) > 1) {
    throw DomainError("carlson_rf: arguments must be nonnegative with at most one zero");
  }
  // Carlson (1995): stop once the spread has shrunk below (3 eps)^(1/6).
  const double tol = std::pow(3.0 * 2.220446049250313e-16, -1.0 / 6.0);
  const double a0 = (x + y + z) / 3.0;
  double an = a0;
  double q = tol * std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double x0 = x, y0 = y, z0 = z, mul = 1.0;
  while (q >= mul * std::abs(an)) {
    const double lam = std::sqrt(x0) * std::sqrt(y0) + std::sqrt(y0) * std::sqrt(z0) +
                       std::sqrt(z0) * std::sqrt(x0);
    an = 0.25 * (an + lam);
    x0 = 0.25 * (x0 + lam);
    y0 = 0.25 * (y0 + lam);
    z0 = 0.25 * (z0 + lam);
    mul *= 4.0;
  }
  const double xx = (a0 - x) / (mul * an);
  const double yy = (a0 - y) / (mul * an);
  const double zz = -(xx + yy);
  const double e2 = xx * yy - zz * zz;
  const double e3 = xx * yy * zz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
         std::sqrt(an);
}

double incomplete_elliptic_F(double phi, double k) {
  if (!std::isfinite(phi)) {
    throw DomainError("incomplete_elliptic_F: amplitude must be finite");
  }
  const EllipticModulus mod(k);
  const double j = std::round(phi / std::numbers::pi);
  const double r = phi - j * std::numbers::pi;
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double base = s * carlson_rf(c * c, 1.0 - mod.m() * s * s, 1.0);
  return j == 0.0 ? base : base + 2.0 * j * complete_elliptic_K(mod.k());
}

double jacobi_amplitude(double u, double k) {
  const double quarter = complete_elliptic_K(k);
  const double j = std::round(u / (2.0 * quarter));
  const double r = u - 2.0 * quarter * j;
  const JacobiTriple t = jacobi_sn_cn_dn(r, k);
  return std::atan2(t.sn, t.cn) + j * std::numbers::pi;
}

}  // namespace bianchi::specfun
