#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bianchi/errors.hpp"
#include "bianchi/spectrum.hpp"

namespace bianchi::spectrum {

double eigenfunction_residual(const MetricParams& metric, const lattice::Lattice2D& lat,
                              const ResidualTarget& target, const GridSize& grid) {
  using cplx = std::complex<double>;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (grid.n0 < 4 || grid.n1 < 4 || grid.n2 < 4) throw DomainError("residual grid needs at least 4 points per axis");

  // Factor along q0 and the plane wave in lattice coordinates s = E^{-1} q.
  std::vector<double> f0(static_cast<std::size_t>(grid.n0));
  std::vector<cplx> f0c;
  IVec2 k{0, 0};
  double energy = 0.0;
  const double h0 = two_pi / grid.n0;
  if (target.k) {
    k = *target.k;
    const auto mode = build_mode(metric, lattice::dual_basis(lat), k);
    if (target.l < 0) throw DomainError("Mathieu index must be non-negative");
    const auto pairs = mathieu::characteristic_values(mode.mu, target.l + 1, 1e-11, true);
    const auto& pair = pairs[static_cast<std::size_t>(target.l)];
    energy = metric.A * pair.lambda + 0.5 * (metric.B + 1.0) * mode.Qk;
    for (int i = 0; i < grid.n0; ++i) f0[static_cast<std::size_t>(i)] = mathieu::eigenfunction_eval(pair, i * h0 + mode.alpha);
  } else {
    if (target.m < 0) throw DomainError("trivial mode order must be non-negative");
    energy = metric.A * static_cast<double>(target.m) * target.m;
  }
  f0c.resize(f0.size());
  for (int i = 0; i < grid.n0; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    f0c[idx] = target.k ? cplx(f0[idx], 0.0) : std::polar(1.0, target.m * i * h0);
  }

  const double h1 = 1.0 / grid.n1;
  const double h2 = 1.0 / grid.n2;
  std::vector<cplx> g(static_cast<std::size_t>(grid.n1) * grid.n2);
  for (int a = 0; a < grid.n1; ++a) {
    for (int b = 0; b < grid.n2; ++b) {
      const double phase = two_pi * (static_cast<double>(k[0]) * a * h1 + static_cast<double>(k[1]) * b * h2);
      g[static_cast<std::size_t>(a) * grid.n2 + b] = std::polar(1.0, phase);
    }
  }
  auto gat = [&](int a, int b) {
    a = (a + grid.n1) % grid.n1;
    b = (b + grid.n2) % grid.n2;
    return g[static_cast<std::size_t>(a) * grid.n2 + b];
  };

  const auto& e1 = lat.e1();
  const auto& e2 = lat.e2();
  const double det = e1[0] * e2[1] - e2[0] * e1[1];
  // G = E^{-1}, E with columns e1, e2; d/dq_i = sum_a G[a][i] d/ds_a.
  const double G[2][2] = {{e2[1] / det, -e2[0] / det}, {-e1[1] / det, e1[0] / det}};
  const double GG00 = G[0][0] * G[0][0] + G[0][1] * G[0][1];
  const double GG01 = G[0][0] * G[1][0] + G[0][1] * G[1][1];
  const double GG11 = G[1][0] * G[1][0] + G[1][1] * G[1][1];

  double res2 = 0.0;
  double norm2 = 0.0;
  for (int i = 0; i < grid.n0; ++i) {
    const double q0 = i * h0;
    const double c = std::cos(q0);
    const double s = std::sin(q0);
    const double W0 = c * G[0][0] - s * G[0][1];
    const double W1 = c * G[1][0] - s * G[1][1];
    const double S00 = GG00 + (metric.B - 1.0) * W0 * W0;
    const double S01 = GG01 + (metric.B - 1.0) * W0 * W1;
    const double S11 = GG11 + (metric.B - 1.0) * W1 * W1;
    const cplx fm = f0c[static_cast<std::size_t>((i + grid.n0 - 1) % grid.n0)];
    const cplx fc = f0c[static_cast<std::size_t>(i)];
    const cplx fp = f0c[static_cast<std::size_t>((i + 1) % grid.n0)];
    const cplx d00 = (fp - 2.0 * fc + fm) / (h0 * h0);
    for (int a = 0; a < grid.n1; ++a) {
      for (int b = 0; b < grid.n2; ++b) {
        const cplx gc = gat(a, b);
        const cplx d11 = (gat(a + 1, b) - 2.0 * gc + gat(a - 1, b)) / (h1 * h1);
        const cplx d22 = (gat(a, b + 1) - 2.0 * gc + gat(a, b - 1)) / (h2 * h2);
        const cplx d12 =
            (gat(a + 1, b + 1) - gat(a + 1, b - 1) - gat(a - 1, b + 1) + gat(a - 1, b - 1)) / (4.0 * h1 * h2);
        const cplx psi = fc * gc;
        const cplx lap = metric.A * d00 * gc + fc * (S00 * d11 + 2.0 * S01 * d12 + S11 * d22);
        const cplx r = -lap - energy * psi;
        res2 += std::norm(r);
        norm2 += std::norm(psi);
      }
    }
  }
  return std::sqrt(res2 / norm2);
}

}  // namespace bianchi::spectrum
