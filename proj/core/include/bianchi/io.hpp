#pragma once

// Plain-text output formats. CSV files start with "# key=value" provenance
// lines followed by a header row; numbers use 17 significant digits.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bianchi/geodesic.hpp"
#include "bianchi/spectrum.hpp"
#include "bianchi/stats.hpp"

namespace bianchi::io {

/// Ordered key/value provenance block.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Locale-independent 17-significant-digit form of v.
std::string format_double(double v);

void write_metadata(std::ostream& os, const Metadata& meta);

/// One row per channel: energy,multiplicity,part,K,l,m. Channels merged into
/// one line follow each other; the trivial part leaves K and l empty.
void write_spectrum_csv(std::ostream& os, const spectrum::Spectrum& s, const Metadata& meta);
nlohmann::json spectrum_json(const spectrum::Spectrum& s, const Metadata& meta);

/// Reads the CSV written above (or any energy,multiplicity[,...] table) and
/// re-merges channels closer than merge_tol. Throws DomainError on bad input.
std::vector<spectrum::SpectralLine> read_spectrum_csv(std::istream& is, double merge_tol = 1e-9);

void write_histogram_csv(std::ostream& os, const stats::SpacingHistogram& h, const Metadata& meta);
void write_pair_correlation_csv(std::ostream& os, const stats::PairCorrelation& pc, const Metadata& meta);
void write_monodromy_csv(std::ostream& os, const std::vector<spectrum::MonodromyPoint>& pts, const Metadata& meta);
void write_trajectory_csv(std::ostream& os, const MetricParams& metric, const std::vector<geodesic::TrajectoryState>& samples,
                          const Metadata& meta);

nlohmann::json metadata_json(const Metadata& meta);

}  // namespace bianchi::io
