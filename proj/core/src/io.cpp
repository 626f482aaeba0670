#include "bianchi/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bianchi/errors.hpp"

namespace bianchi::io {

std::string format_double(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

nlohmann::json metadata_json(const Metadata& meta) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

void write_spectrum_csv(std::ostream& os, const spectrum::Spectrum& s, const Metadata& meta) {
  write_metadata(os, meta);
  os << "energy,multiplicity,part,K,l,m\n";
  for (const auto& line : s.lines) {
    for (const auto& lab : line.labels) {
      os << format_double(lab.energy) << ',' << lab.multiplicity << ',' << spectrum::to_string(lab.part) << ',';
      if (lab.part == spectrum::Part::mathieu) os << format_double(lab.K) << ',' << lab.l;
      else os << ',';
      os << ',' << lab.m << '\n';
    }
  }
}

nlohmann::json spectrum_json(const spectrum::Spectrum& s, const Metadata& meta) {
  nlohmann::json j;
  j["metadata"] = metadata_json(meta);
  auto& lines = j["lines"] = nlohmann::json::array();
  for (const auto& line : s.lines) {
    nlohmann::json jl;
    jl["energy"] = line.energy;
    jl["multiplicity"] = line.multiplicity;
    jl["part"] = spectrum::to_string(line.part);
    auto& labels = jl["labels"] = nlohmann::json::array();
    for (const auto& lab : line.labels) {
      nlohmann::json x;
      x["part"] = spectrum::to_string(lab.part);
      x["energy"] = lab.energy;
      x["multiplicity"] = lab.multiplicity;
      x["m"] = lab.m;
      if (lab.part == spectrum::Part::mathieu) {
        x["K"] = lab.K;
        x["l"] = lab.l;
        x["mu"] = lab.mu;
        x["k"] = {lab.representative[0], lab.representative[1]};
      }
      labels.push_back(std::move(x));
    }
    lines.push_back(std::move(jl));
  }
  j["coincidences"] = s.coincidences.size();
  return j;
}

std::vector<spectrum::SpectralLine> read_spectrum_csv(std::istream& is, double merge_tol) {
  std::vector<spectrum::SpectralLine> lines;
  std::string row;
  bool header_seen = false;
  std::size_t lineno = 0;
  double prev = -INFINITY;
  while (std::getline(is, row)) {
    ++lineno;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty() || row[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (row.rfind("energy", 0) == 0) continue;
    }
    std::stringstream ss(row);
    std::string f_energy;
    std::string f_mult;
    std::string f_part;
    std::getline(ss, f_energy, ',');
    std::getline(ss, f_mult, ',');
    std::getline(ss, f_part, ',');
    spectrum::LineLabel lab;
    const char* b = f_energy.data();
    const auto r1 = std::from_chars(b, b + f_energy.size(), lab.energy);
    const auto r2 = std::from_chars(f_mult.data(), f_mult.data() + f_mult.size(), lab.multiplicity);
    if (r1.ec != std::errc() || r2.ec != std::errc() || lab.multiplicity < 1 || !std::isfinite(lab.energy)) {
      throw DomainError("bad spectrum row " + std::to_string(lineno) + ": " + row);
    }
    if (lab.energy < prev) throw DomainError("spectrum rows not sorted at line " + std::to_string(lineno));
    lab.part = f_part == "trivial" ? spectrum::Part::trivial : spectrum::Part::mathieu;
    if (lines.empty() || lab.energy - prev > merge_tol) {
      spectrum::SpectralLine line;
      line.energy = lab.energy;
      line.part = lab.part;
      lines.push_back(std::move(line));
    }
    lines.back().multiplicity += lab.multiplicity;
    lines.back().labels.push_back(lab);
    prev = lab.energy;
  }
  if (!header_seen) throw DomainError("spectrum file has no data");
  return lines;
}

void write_histogram_csv(std::ostream& os, const stats::SpacingHistogram& h, const Metadata& meta) {
  write_metadata(os, meta);
  os << "bin_lo,bin_hi,count,density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    os << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << ','
       << format_double(h.density[b]) << '\n';
  }
}

void write_pair_correlation_csv(std::ostream& os, const stats::PairCorrelation& pc, const Metadata& meta) {
  write_metadata(os, meta);
  os << "bin_lo,bin_hi,count,density\n";
  for (std::size_t b = 0; b < pc.counts.size(); ++b) {
    os << format_double(pc.edges[b]) << ',' << format_double(pc.edges[b + 1]) << ',' << pc.counts[b] << ','
       << format_double(pc.density[b]) << '\n';
  }
}

void write_monodromy_csv(std::ostream& os, const std::vector<spectrum::MonodromyPoint>& pts, const Metadata& meta) {
  write_metadata(os, meta);
  os << "p1,p2,Q,F1,F2\n";
  for (const auto& p : pts) {
    os << p.p[0] << ',' << p.p[1] << ',' << format_double(p.Q) << ',' << format_double(p.F1) << ','
       << format_double(p.F2) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const MetricParams& metric, const std::vector<geodesic::TrajectoryState>& samples,
                          const Metadata& meta) {
  write_metadata(os, meta);
  os << "t,q0,q1,q2,p0,p1,p2,H\n";
  for (const auto& s : samples) {
    os << format_double(s.t) << ',' << format_double(s.q0) << ',' << format_double(s.q1) << ','
       << format_double(s.q2) << ',' << format_double(s.p0) << ',' << format_double(s.p1) << ','
       << format_double(s.p2) << ',' << format_double(geodesic::hamiltonian(metric, s)) << '\n';
  }
}

}  // namespace bianchi::io
