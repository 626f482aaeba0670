#pragma once

// Laplace-Beltrami spectrum of the Bianchi torus E(2)/L and of its Z_n
// quotients. Each nonzero dual index k separates into a Mathieu problem with
//   mu = (B-1) Q(k) / 2A,   E = A lambda_l(mu) + (B+1) Q(k) / 2,
// while k = 0 gives the trivial part E = A m^2 (A m^2 n^2 on the quotient).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bianchi/lattice.hpp"
#include "bianchi/mathieu.hpp"
#include "bianchi/metric.hpp"

namespace bianchi::spectrum {

using lattice::IVec2;

struct SeparatedMode {
  IVec2 k{};
  double Qk = 0.0;
  double alpha = 0.0;  ///< Omega^T k = sqrt(Qk) (cos alpha, sin alpha), alpha in (-pi, pi]
  double mu = 0.0;
};

/// Throws DomainError for k = (0, 0); that index belongs to the trivial part.
SeparatedMode build_mode(const MetricParams& metric, const lattice::DualBasis& dual, const IVec2& k);

enum class Part { trivial, mathieu };

std::string_view to_string(Part p);

/// One (K, l) channel, or one trivial level m, inside a spectral line.
struct LineLabel {
  Part part = Part::trivial;
  double K = 0.0;         ///< Q value of the shell (Mathieu part only)
  int l = -1;             ///< Mathieu index (Mathieu part only)
  int m = 0;              ///< trivial level, or the order of a_m / b_m
  std::int64_t multiplicity = 0;
  double energy = 0.0;    ///< energy of this channel before merging
  double mu = 0.0;
  IVec2 representative{}; ///< first orbit representative of the shell
};

struct SpectralLine {
  double energy = 0.0;
  std::int64_t multiplicity = 0;
  Part part = Part::trivial;  ///< part of the lowest label
  std::vector<LineLabel> labels;
};

/// Distinct channels whose energies agree within the merge tolerance.
struct Coincidence {
  double energy = 0.0;
  std::vector<LineLabel> labels;
};

struct SpectrumOptions {
  double E_max = 0.0;
  double tol = 1e-10;
  double merge_tol = 1e-9;
  std::size_t max_lines = 5'000'000;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct Spectrum {
  std::vector<SpectralLine> lines;
  std::vector<Coincidence> coincidences;
  int symmetry_order = 1;
  std::size_t mathieu_solves = 0;  ///< distinct mu values diagonalized
};

/// Mathieu levels per distinct mu. Concurrent readers, insert-if-absent.
class MathieuCache {
 public:
  struct Entry {
    double lambda_max;
    std::vector<mathieu::MathieuEigenpair> levels;
  };

  /// Levels with lambda <= lambda_max, computing them if not cached with at
  /// least that coverage.
  std::shared_ptr<const Entry> get(double mu, double lambda_max, double tol);
  std::size_t size() const;

 private:
  static double key(double mu);
  mutable std::shared_mutex mutex_;
  std::map<double, std::shared_ptr<const Entry>> entries_;
};

Spectrum torus_spectrum(const MetricParams& metric, const lattice::Lattice2D& lat, const SpectrumOptions& opts);

/// Spectrum of T^3_L / Z_n with orbit-derived multiplicities. n = 1 gives the
/// torus spectrum. Throws SymmetryError if the lattice lacks order n.
Spectrum quotient_spectrum(const MetricParams& metric, const lattice::Lattice2D& lat, int n,
                           const SpectrumOptions& opts);

/// Total multiplicity of all lines with energy <= E.
std::int64_t counting_function(const Spectrum& s, double E);

struct ResidualTarget {
  std::optional<IVec2> k;  ///< nullopt: trivial mode e^{i m q0}
  int l = 0;
  int m = 0;
};

struct GridSize {
  int n0 = 64;  ///< q0 in [0, 2 pi)
  int n1 = 64;  ///< lattice coordinates s in [0, 1)^2
  int n2 = 64;
};

/// Relative discrete L^2 residual || (-Delta - E) Psi || / || Psi || with Delta
/// applied by second-order central differences on a periodic grid.
double eigenfunction_residual(const MetricParams& metric, const lattice::Lattice2D& lat,
                              const ResidualTarget& target, const GridSize& grid);

struct Deviation {
  Part part = Part::trivial;
  double K = 0.0;
  int l = -1;
  int m = 0;
  double mu = 0.0;
  double energy = 0.0;
  double predicted = 0.0;  ///< A m^2 + (B+1) K / 2
  double deviation = 0.0;  ///< energy - predicted
};

struct DeviationReport {
  std::vector<Deviation> entries;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// Largest |deviation| among Mathieu channels of order >= m, per order m.
  double max_abs_for_order_at_least(int m) const;
};

DeviationReport asymptotic_form_compare(const MetricParams& metric, const lattice::Lattice2D& lat, double E_max,
                                        double tol = 1e-10);

struct MonodromyPoint {
  IVec2 p{};
  double Q = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
};

/// One point per Z_n orbit of nonzero dual vectors with Q(p) <= Q_max:
/// F1 = sqrt(Q) cos n phi, F2 = sqrt(Q) sin n phi, phi the polar angle of
/// Omega^T p. Requires n in {3, 4, 6}.
std::vector<MonodromyPoint> monodromy_grid(const lattice::Lattice2D& lat, int n, double Q_max);

/// Monodromy values computed for a single index (any orbit member).
MonodromyPoint monodromy_point(const lattice::DualBasis& dual, int n, const IVec2& p);

}  // namespace bianchi::spectrum
