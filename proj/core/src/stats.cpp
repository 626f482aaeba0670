#include "bianchi/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "bianchi/errors.hpp"
#include "parallel.hpp"

namespace bianchi::stats {

namespace {

struct Grouped {
  std::vector<double> values;
  std::vector<std::int64_t> multiplicities;
};

Grouped group_sorted(const std::vector<double>& sorted) {
  Grouped g;
  for (double v : sorted) {
    if (!g.values.empty() && g.values.back() == v) {
      ++g.multiplicities.back();
    } else {
      g.values.push_back(v);
      g.multiplicities.push_back(1);
    }
  }
  return g;
}

std::vector<double> fit_staircase(const std::vector<double>& E, const std::vector<double>& N, int degree) {
  const auto n = static_cast<Eigen::Index>(E.size());
  const double lo = E.front();
  const double span = E.back() - E.front();
  Eigen::MatrixXd V(n, degree + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (E[static_cast<std::size_t>(i)] - lo) / span;
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      V(i, d) = p;
      p *= t;
    }
    y(i) = N[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(y);
  std::vector<double> out(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) {
    const double t = (E[i] - lo) / span;
    double acc = 0.0;
    for (int d = degree; d >= 0; --d) acc = acc * t + coef(d);
    out[i] = acc;
  }
  return out;
}

UnfoldedSpectrum unfold_grouped(const Grouped& g, const UnfoldOptions& opts) {
  const bool expand = opts.levels == LevelMode::with_multiplicity;
  std::int64_t total = 0;
  for (auto m : g.multiplicities) total += expand ? m : 1;
  if (total < static_cast<std::int64_t>(std::max<std::size_t>(opts.min_levels, 2)) || g.values.size() < 2) {
    throw SampleSizeError("unfolding needs at least " + std::to_string(std::max<std::size_t>(opts.min_levels, 2)) +
                          " levels, got " + std::to_string(total));
  }

  // Staircase value at each distinct level, counting in the chosen mode.
  std::vector<double> stair(g.values.size());
  std::int64_t running = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    running += expand ? g.multiplicities[i] : 1;
    stair[i] = static_cast<double>(running);
  }
  std::vector<double> f;
  if (opts.method == UnfoldMethod::rank) {
    f = stair;
  } else {
    if (opts.degree < 1) throw DomainError("fit degree must be at least 1");
    f = fit_staircase(g.values, stair, opts.degree);
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (f[i] < f[i - 1]) throw ConsistencyError("fitted staircase is not monotone over the levels");
    }
  }

  const double f0 = f.front();
  const double scale = static_cast<double>(total - 1) / (f.back() - f0);
  UnfoldedSpectrum u;
  u.raw_multiplicities = g.multiplicities;
  u.levels.reserve(static_cast<std::size_t>(total));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = (f[i] - f0) * scale;
    const std::int64_t reps = expand ? g.multiplicities[i] : 1;
    for (std::int64_t r = 0; r < reps; ++r) u.levels.push_back(x);
  }
  return u;
}

}  // namespace

std::string_view to_string(LevelMode m) { return m == LevelMode::distinct ? "distinct" : "with_multiplicity"; }

std::string_view to_string(UnfoldMethod m) { return m == UnfoldMethod::rank ? "rank" : "polynomial_fit"; }

UnfoldedSpectrum unfold(std::vector<double> values, const UnfoldOptions& opts) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("non-finite level");
  }
  std::sort(values.begin(), values.end());
  return unfold_grouped(group_sorted(values), opts);
}

UnfoldedSpectrum unfold(const std::vector<spectrum::SpectralLine>& lines, const UnfoldOptions& opts) {
  Grouped g;
  for (const auto& line : lines) {
    if (!g.values.empty() && line.energy < g.values.back()) throw DomainError("spectral lines must be sorted");
    g.values.push_back(line.energy);
    g.multiplicities.push_back(line.multiplicity);
  }
  return unfold_grouped(g, opts);
}

std::vector<double> spacings(const UnfoldedSpectrum& u) {
  std::vector<double> s;
  if (u.levels.size() < 2) return s;
  s.reserve(u.levels.size() - 1);
  for (std::size_t i = 1; i < u.levels.size(); ++i) s.push_back(u.levels[i] - u.levels[i - 1]);
  return s;
}

double ks_distance_exponential(std::vector<double> sample) {
  if (sample.empty()) throw SampleSizeError("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    // Treat ties as one jump of the empirical CDF.
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double F = -std::expm1(-std::max(0.0, sample[i]));
    d = std::max({d, std::abs(static_cast<double>(i) / n - F), std::abs(static_cast<double>(j) / n - F)});
    i = j;
  }
  return d;
}

SpacingHistogram spacing_distribution(const UnfoldedSpectrum& u, int bins, double s_max) {
  if (bins < 1 || !(s_max > 0.0)) throw DomainError("histogram needs bins >= 1 and s_max > 0");
  const auto s = spacings(u);
  if (s.empty()) throw SampleSizeError("need at least two levels");
  SpacingHistogram h;
  h.total = static_cast<std::int64_t>(s.size());
  const double width = s_max / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = b * width;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  std::int64_t zeros = 0;
  for (double x : s) {
    if (x < kZeroSpacing) ++zeros;
    const auto b = std::min<std::int64_t>(static_cast<std::int64_t>(x / width), bins - 1);
    ++h.counts[static_cast<std::size_t>(std::max<std::int64_t>(b, 0))];
  }
  h.density.resize(h.counts.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    h.density[b] = static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * width);
  }
  h.zero_atom = static_cast<double>(zeros) / static_cast<double>(h.total);
  h.ks_distance = ks_distance_exponential(s);
  return h;
}

PairCorrelation pair_correlation(const UnfoldedSpectrum& u, double window, int bins, unsigned threads) {
  if (!(window > 0.0) || bins < 1) throw DomainError("pair correlation needs window > 0 and bins >= 1");
  const auto& x = u.levels;
  if (x.size() < 2) throw SampleSizeError("need at least two levels");
  PairCorrelation pc;
  const double width = window / bins;
  pc.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) pc.edges[static_cast<std::size_t>(b)] = b * width;

  const double last = x.back();
  const auto refs = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), last - window) - x.begin());
  pc.references = static_cast<std::int64_t>(refs);
  if (refs == 0) throw SampleSizeError("window is wider than the unfolded range");

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (refs + kChunk - 1) / kChunk;
  std::vector<std::vector<std::int64_t>> partial(chunks, std::vector<std::int64_t>(static_cast<std::size_t>(bins) + 1, 0));
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    auto& acc = partial[c];
    const std::size_t end = std::min(refs, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        const double d = x[j] - x[i];
        if (d > window) break;
        if (d < kZeroSpacing) {
          ++acc[static_cast<std::size_t>(bins)];
          continue;
        }
        const auto b = std::min<std::size_t>(static_cast<std::size_t>(d / width), static_cast<std::size_t>(bins) - 1);
        ++acc[b];
      }
    }
  });
  pc.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& acc : partial) {
    for (int b = 0; b < bins; ++b) pc.counts[static_cast<std::size_t>(b)] += acc[static_cast<std::size_t>(b)];
    pc.zero_pairs += acc[static_cast<std::size_t>(bins)];
  }
  pc.density.resize(pc.counts.size());
  for (std::size_t b = 0; b < pc.counts.size(); ++b) {
    pc.density[b] = static_cast<double>(pc.counts[b]) / (static_cast<double>(pc.references) * width);
  }
  return pc;
}

double max_flatness_deviation(const PairCorrelation& pc) {
  double worst = 0.0;
  for (double d : pc.density) worst = std::max(worst, std::abs(d - 1.0));
  return worst;
}

std::vector<double> diagonal_form_values(double beta, double v_max) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(v_max > 0.0)) throw DomainError("v_max must be positive");
  const auto k2_max = static_cast<std::int64_t>(std::floor(std::sqrt(v_max / beta)));
  std::vector<double> out;
  for (std::int64_t k2 = -k2_max; k2 <= k2_max; ++k2) {
    const double rest = v_max - beta * static_cast<double>(k2 * k2);
    if (rest < 0.0) continue;
    const auto k1_max = static_cast<std::int64_t>(std::floor(std::sqrt(rest)));
    for (std::int64_t k1 = -k1_max; k1 <= k1_max; ++k1) {
      if (k1 == 0 && k2 == 0) continue;
      const double v = static_cast<double>(k1 * k1) + beta * static_cast<double>(k2 * k2);
      if (v <= v_max) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bianchi::stats
