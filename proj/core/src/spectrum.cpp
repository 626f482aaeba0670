#include "bianchi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "bianchi/errors.hpp"
#include "parallel.hpp"

namespace bianchi::spectrum {

namespace {

struct Shell {
  double K;
  std::int64_t multiplicity;
  IVec2 representative;
};

void check_options(const SpectrumOptions& opts) {
  if (!(opts.E_max > 0.0) || !std::isfinite(opts.E_max)) throw DomainError("E_max must be positive and finite");
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
}

double shell_cutoff(const MetricParams& metric, double E_max) {
  // A lambda_l(mu) >= -A|mu| gives E >= min(B, 1) Q(k).
  return E_max / std::min(metric.B, 1.0);
}

void check_label_budget(const MetricParams& metric, const std::vector<Shell>& shells, const SpectrumOptions& opts) {
  // Upper bound on the channel count from lambda_l(mu) >= ceil(l/2)^2 - |mu|.
  double bound = std::sqrt(opts.E_max / metric.A) * 2.0 + 1.0;
  for (const Shell& s : shells) {
    const double mu = (metric.B - 1.0) * s.K / (2.0 * metric.A);
    const double lam_max = (opts.E_max - 0.5 * (metric.B + 1.0) * s.K) / metric.A;
    if (lam_max + std::abs(mu) >= 0.0) bound += 2.0 * std::sqrt(lam_max + std::abs(mu)) + 1.0;
  }
  if (bound > 4.0 * static_cast<double>(opts.max_lines)) {
    std::ostringstream msg;
    msg << "spectrum below E_max=" << opts.E_max << " needs ~" << bound << " lines; budget is " << opts.max_lines;
    throw ResourceError(msg.str());
  }
}

Spectrum assemble(const MetricParams& metric, const std::vector<Shell>& shells, int n, const SpectrumOptions& opts) {
  check_label_budget(metric, shells, opts);
  const double A = metric.A;
  const double B = metric.B;

  std::vector<LineLabel> labels;
  for (int m = 0;; ++m) {
    const double e = A * static_cast<double>(m) * m * n * n;
    if (e > opts.E_max) break;
    LineLabel t;
    t.part = Part::trivial;
    t.m = m;
    t.multiplicity = m == 0 ? 1 : 2;
    t.energy = e;
    labels.push_back(t);
  }

  struct Job {
    double mu;
    double lambda_max;
  };
  std::vector<Job> jobs(shells.size());
  for (std::size_t i = 0; i < shells.size(); ++i) {
    jobs[i].mu = (B - 1.0) * shells[i].K / (2.0 * A);
    jobs[i].lambda_max = (opts.E_max - 0.5 * (B + 1.0) * shells[i].K) / A;
  }
  std::vector<std::vector<mathieu::MathieuEigenpair>> levels(shells.size());
  MathieuCache cache;
  detail::parallel_for(shells.size(), opts.threads, [&](std::size_t i) {
    if (jobs[i].lambda_max < -std::abs(jobs[i].mu)) return;
    levels[i] = cache.get(jobs[i].mu, jobs[i].lambda_max, opts.tol)->levels;
  });

  for (std::size_t i = 0; i < shells.size(); ++i) {
    for (const auto& p : levels[i]) {
      if (p.lambda > jobs[i].lambda_max) break;
      const double e = A * p.lambda + 0.5 * (B + 1.0) * shells[i].K;
      if (e > opts.E_max) break;
      LineLabel lab;
      lab.part = Part::mathieu;
      lab.K = shells[i].K;
      lab.l = p.l;
      lab.m = p.order;
      lab.multiplicity = shells[i].multiplicity;
      lab.energy = e;
      lab.mu = jobs[i].mu;
      lab.representative = shells[i].representative;
      labels.push_back(lab);
    }
  }
  if (labels.size() > opts.max_lines) {
    throw ResourceError("spectrum has " + std::to_string(labels.size()) + " channels; budget is " +
                        std::to_string(opts.max_lines));
  }

  std::sort(labels.begin(), labels.end(), [](const LineLabel& x, const LineLabel& y) {
    return std::tie(x.energy, x.part, x.K, x.l, x.m) < std::tie(y.energy, y.part, y.K, y.l, y.m);
  });

  Spectrum out;
  out.symmetry_order = n;
  out.mathieu_solves = cache.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i == 0 || labels[i].energy - labels[i - 1].energy > opts.merge_tol) {
      SpectralLine line;
      line.energy = labels[i].energy;
      line.part = labels[i].part;
      out.lines.push_back(std::move(line));
    }
    SpectralLine& line = out.lines.back();
    line.multiplicity += labels[i].multiplicity;
    line.labels.push_back(labels[i]);
  }
  for (const auto& line : out.lines) {
    if (line.labels.size() > 1) out.coincidences.push_back({line.energy, line.labels});
  }
  return out;
}

}  // namespace

std::string_view to_string(Part p) { return p == Part::trivial ? "trivial" : "mathieu"; }

SeparatedMode build_mode(const MetricParams& metric, const lattice::DualBasis& dual, const IVec2& k) {
  if (k[0] == 0 && k[1] == 0) throw DomainError("k = (0,0) belongs to the trivial part of the spectrum");
  SeparatedMode mode;
  mode.k = k;
  mode.Qk = lattice::qform_value(lattice::QuadraticForm::from_dual(dual), k);
  const lattice::Vec2 v = dual.apply_transpose(k);
  mode.alpha = std::atan2(v[1], v[0]);
  if (mode.alpha <= -std::numbers::pi) mode.alpha = std::numbers::pi;
  mode.mu = (metric.B - 1.0) * mode.Qk / (2.0 * metric.A);
  return mode;
}

double MathieuCache::key(double mu) {
  if (mu == 0.0) return 0.0;
  const double e = std::floor(std::log10(std::abs(mu)));
  const double scale = std::pow(10.0, 13.0 - e);
  return std::round(mu * scale) / scale;
}

std::shared_ptr<const MathieuCache::Entry> MathieuCache::get(double mu, double lambda_max, double tol) {
  const double k = key(mu);
  {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(k);
    if (it != entries_.end() && it->second->lambda_max >= lambda_max) return it->second;
  }
  auto fresh = std::make_shared<Entry>();
  fresh->lambda_max = lambda_max;
  fresh->levels = mathieu::characteristic_values_below(mu, lambda_max, tol, false);
  std::unique_lock lock(mutex_);
  auto& slot = entries_[k];
  if (!slot || slot->lambda_max < lambda_max) slot = fresh;
  return slot;
}

std::size_t MathieuCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

Spectrum torus_spectrum(const MetricParams& metric, const lattice::Lattice2D& lat, const SpectrumOptions& opts) {
  check_options(opts);
  const auto q = lattice::QuadraticForm::from_dual(lattice::dual_basis(lat));
  const auto vectors = lattice::enumerate_vectors(q, shell_cutoff(metric, opts.E_max));
  const bool integral = q.is_integral();

  // Every k is its own channel on the torus; group k's of equal Q.
  std::vector<Shell> shells;
  std::size_t begin = 0;
  while (begin < vectors.size()) {
    const double K = lattice::qform_value(q, vectors[begin]);
    std::size_t end = begin + 1;
    while (end < vectors.size()) {
      const double v = lattice::qform_value(q, vectors[end]);
      if (integral ? v != K : std::abs(v - K) > 1e-11 * std::max(1.0, std::abs(K))) break;
      ++end;
    }
    const IVec2 rep = *std::min_element(vectors.begin() + static_cast<std::ptrdiff_t>(begin),
                                        vectors.begin() + static_cast<std::ptrdiff_t>(end));
    shells.push_back({K, static_cast<std::int64_t>(end - begin), rep});
    begin = end;
  }
  return assemble(metric, shells, 1, opts);
}

Spectrum quotient_spectrum(const MetricParams& metric, const lattice::Lattice2D& lat, int n,
                           const SpectrumOptions& opts) {
  check_options(opts);
  if (!lattice::is_crystallographic_order(n) || !lat.invariant_under(n)) {
    throw SymmetryError("lattice does not admit the rotation of order " + std::to_string(n));
  }
  const auto dual = lattice::dual_basis(lat);
  const auto orbit_shells = lattice::orbit_decomposition(dual, n, shell_cutoff(metric, opts.E_max));
  std::vector<Shell> shells;
  shells.reserve(orbit_shells.size());
  for (const auto& s : orbit_shells) {
    shells.push_back({s.K, static_cast<std::int64_t>(s.orbits.size()), s.orbits.front().representative});
  }
  return assemble(metric, shells, n, opts);
}

std::int64_t counting_function(const Spectrum& s, double E) {
  std::int64_t total = 0;
  for (const auto& line : s.lines) {
    if (line.energy > E) break;
    total += line.multiplicity;
  }
  return total;
}

double DeviationReport::max_abs_for_order_at_least(int m) const {
  double worst = 0.0;
  for (const auto& d : entries) {
    if (d.part == Part::mathieu && d.m >= m) worst = std::max(worst, std::abs(d.deviation));
  }
  return worst;
}

DeviationReport asymptotic_form_compare(const MetricParams& metric, const lattice::Lattice2D& lat, double E_max,
                                        double tol) {
  SpectrumOptions opts;
  opts.E_max = E_max;
  opts.tol = tol;
  const Spectrum s = torus_spectrum(metric, lat, opts);
  DeviationReport report;
  double sum = 0.0;
  for (const auto& line : s.lines) {
    for (const auto& lab : line.labels) {
      Deviation d;
      d.part = lab.part;
      d.K = lab.K;
      d.l = lab.l;
      d.m = lab.m;
      d.mu = lab.mu;
      d.energy = lab.energy;
      const double m2 = static_cast<double>(lab.m) * lab.m;
      d.predicted = metric.A * m2 + (lab.part == Part::mathieu ? 0.5 * (metric.B + 1.0) * lab.K : 0.0);
      d.deviation = d.energy - d.predicted;
      report.max_abs = std::max(report.max_abs, std::abs(d.deviation));
      sum += std::abs(d.deviation);
      report.entries.push_back(d);
    }
  }
  if (!report.entries.empty()) report.mean_abs = sum / static_cast<double>(report.entries.size());
  return report;
}

MonodromyPoint monodromy_point(const lattice::DualBasis& dual, int n, const IVec2& p) {
  const lattice::Vec2 v = dual.apply_transpose(p);
  const double phi = std::atan2(v[1], v[0]);
  MonodromyPoint pt;
  pt.p = p;
  pt.Q = lattice::qform_value(lattice::QuadraticForm::from_dual(dual), p);
  const double r = std::sqrt(pt.Q);
  pt.F1 = r * std::cos(n * phi);
  pt.F2 = r * std::sin(n * phi);
  return pt;
}

std::vector<MonodromyPoint> monodromy_grid(const lattice::Lattice2D& lat, int n, double Q_max) {
  if (n != 3 && n != 4 && n != 6) throw DomainError("monodromy grid needs n in {3, 4, 6}");
  if (!lat.invariant_under(n)) throw SymmetryError("lattice does not admit the rotation of order " + std::to_string(n));
  const auto dual = lattice::dual_basis(lat);
  std::vector<MonodromyPoint> out;
  for (const auto& shell : lattice::orbit_decomposition(dual, n, Q_max)) {
    for (const auto& orbit : shell.orbits) out.push_back(monodromy_point(dual, n, orbit.representative));
  }
  return out;
}

}  // namespace bianchi::spectrum
