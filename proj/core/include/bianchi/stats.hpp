#pragma once

// Level statistics: unfolding to unit mean spacing, nearest-neighbour spacing
// histograms with the Kolmogorov-Smirnov distance to the Poisson law e^{-s},
// and two-point (pair) correlation of unfolded levels.

#include <cstdint>
#include <string_view>
#include <vector>

#include "bianchi/spectrum.hpp"

namespace bianchi::stats {

enum class LevelMode {
  distinct,           ///< one level per spectral line
  with_multiplicity   ///< each line repeated by its multiplicity
};

enum class UnfoldMethod {
  rank,           ///< empirical staircase N(E)
  polynomial_fit  ///< least-squares polynomial fit of the staircase
};

std::string_view to_string(LevelMode m);
std::string_view to_string(UnfoldMethod m);

struct UnfoldOptions {
  LevelMode levels = LevelMode::with_multiplicity;
  UnfoldMethod method = UnfoldMethod::rank;
  int degree = 1;  ///< polynomial_fit only
  std::size_t min_levels = 100;
};

struct UnfoldedSpectrum {
  std::vector<double> levels;  ///< nondecreasing, first 0, last size()-1
  std::vector<std::int64_t> raw_multiplicities;  ///< per distinct input value
};

/// Unfolds raw values. Exactly equal values form one level of that multiplicity. The unfolded sequence is anchored so
/// its mean nearest-neighbour spacing is exactly 1. Throws SampleSizeError
/// below opts.min_levels levels and ConsistencyError for a non-monotone fit.
UnfoldedSpectrum unfold(std::vector<double> values, const UnfoldOptions& opts = {});

/// Unfolds spectral lines, expanding multiplicities when requested.
UnfoldedSpectrum unfold(const std::vector<spectrum::SpectralLine>& lines, const UnfoldOptions& opts = {});

/// Spacings at or below this unfolded width count as zero.
inline constexpr double kZeroSpacing = 1e-8;

struct SpacingHistogram {
  std::vector<double> edges;          ///< bins + 1 edges on [0, s_max]
  std::vector<std::int64_t> counts;   ///< spacings >= s_max land in the last bin
  std::vector<double> density;        ///< count / (total * width)
  std::int64_t total = 0;             ///< number of spacings, levels - 1
  double zero_atom = 0.0;             ///< fraction of spacings < kZeroSpacing
  double ks_distance = 0.0;           ///< sup |F_n(s) - (1 - e^{-s})|
};

SpacingHistogram spacing_distribution(const UnfoldedSpectrum& u, int bins = 40, double s_max = 4.0);

/// Nearest-neighbour spacings of an unfolded spectrum.
std::vector<double> spacings(const UnfoldedSpectrum& u);

/// Kolmogorov-Smirnov distance of a sample to the unit exponential law.
double ks_distance_exponential(std::vector<double> sample);

struct PairCorrelation {
  std::vector<double> edges;          ///< on (0, window]
  std::vector<std::int64_t> counts;
  std::vector<double> density;        ///< count / (references * width); 1 for Poisson
  std::int64_t references = 0;        ///< levels x with x + window <= last level
  std::int64_t zero_pairs = 0;        ///< pairs closer than kZeroSpacing, not binned
};

/// Forward pair differences x_j - x_i in (0, window] over reference levels.
PairCorrelation pair_correlation(const UnfoldedSpectrum& u, double window = 1.0, int bins = 10,
                                 unsigned threads = 0);

/// Largest |density - 1| over the bins.
double max_flatness_deviation(const PairCorrelation& pc);

/// Values k1^2 + beta k2^2 <= v_max over all nonzero k in Z^2, sorted, with
/// repeats (each sign pattern contributes).
std::vector<double> diagonal_form_values(double beta, double v_max);

}  // namespace bianchi::stats
