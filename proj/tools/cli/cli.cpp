#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "bianchi/errors.hpp"
#include "bianchi/geodesic.hpp"
#include "bianchi/io.hpp"
#include "bianchi/lattice.hpp"
#include "bianchi/spectrum.hpp"
#include "bianchi/stats.hpp"
#include "bianchi/version.hpp"

namespace bianchi::cli {

namespace {

using io::format_double;
using io::Metadata;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MetricArgs {
  double A = 1.0;
  double B = 1.0;
  std::string lattice = "square";
  int n = 1;
};

void add_metric_options(CLI::App* cmd, MetricArgs& m) {
  cmd->add_option("--A", m.A, "metric parameter A > 0")->capture_default_str();
  cmd->add_option("--B", m.B, "metric parameter B > 0")->capture_default_str();
  cmd->add_option("--lattice", m.lattice, "square, hexagonal or generic:a,b,c,d")->capture_default_str();
  cmd->add_option("--n", m.n, "rotation order of the quotient (1, 2, 3, 4, 6)")->capture_default_str();
}

Metadata base_metadata(std::string_view command) {
  return {{"program", "bianchi"}, {"version", std::string(kVersion)}, {"command", std::string(command)}};
}

void add_metric_metadata(Metadata& meta, const MetricArgs& m) {
  meta.emplace_back("A", format_double(m.A));
  meta.emplace_back("B", format_double(m.B));
  meta.emplace_back("lattice", m.lattice);
  meta.emplace_back("n", std::to_string(m.n));
}

/// Writes to `path`, or to `fallback` when path is "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file " + path);
  body(f);
  if (!f) throw UsageError("failed writing " + path);
}

std::string sidecar_path(const std::string& output, const std::string& explicit_path, const char* suffix) {
  if (!explicit_path.empty()) return explicit_path;
  if (output == "-") return "-";
  return output + suffix;
}

spectrum::Spectrum compute_spectrum(const MetricArgs& m, double emax, double tol, unsigned threads) {
  const MetricParams metric(m.A, m.B);
  const auto lat = lattice::parse_lattice(m.lattice, m.n);
  spectrum::SpectrumOptions opts;
  opts.E_max = emax;
  opts.tol = tol;
  opts.threads = threads;
  return m.n == 1 ? spectrum::torus_spectrum(metric, lat, opts) : spectrum::quotient_spectrum(metric, lat, m.n, opts);
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  MetricArgs metric;
  double emax = 0.0;
  double tol = 1e-10;
  std::string format = "csv";
  std::string output = "-";
  unsigned threads = 0;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
  const auto s = compute_spectrum(a.metric, a.emax, a.tol, a.threads);
  Metadata meta = base_metadata("spectrum");
  add_metric_metadata(meta, a.metric);
  meta.emplace_back("E_max", format_double(a.emax));
  meta.emplace_back("tol", format_double(a.tol));
  meta.emplace_back("lines", std::to_string(s.lines.size()));
  meta.emplace_back("coincidences", std::to_string(s.coincidences.size()));
  emit(a.output, out, [&](std::ostream& os) {
    if (a.format == "json") os << io::spectrum_json(s, meta).dump(2) << '\n';
    else io::write_spectrum_csv(os, s, meta);
  });

  std::vector<const spectrum::SpectralLine*> top;
  for (const auto& line : s.lines) top.push_back(&line);
  std::stable_sort(top.begin(), top.end(),
                   [](const auto* x, const auto* y) { return x->multiplicity > y->multiplicity; });
  err << "lines: " << s.lines.size() << " (coincidences: " << s.coincidences.size() << ")\n";
  err << "top multiplicities:";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, top.size()); ++i) {
    err << ' ' << top[i]->multiplicity << "@" << format_double(top[i]->energy);
  }
  err << '\n';
  return kOk;
}

// ------------------------------------------------------- level statistics

struct LevelSource {
  std::string input;
  MetricArgs metric;
  double emax = 0.0;
  double tol = 1e-10;
  std::string synthetic;
  std::size_t count = 10000;
  std::uint64_t seed = 1;
  double form_beta = 0.0;
  double vmax = 0.0;
  std::string levels;
  std::string unfold;
  int degree = 3;
  unsigned threads = 0;
};

void add_level_source(CLI::App* cmd, LevelSource& s, bool with_form, const char* levels_default,
                      const char* unfold_default) {
  s.levels = levels_default;
  s.unfold = unfold_default;
  cmd->add_option("--input", s.input, "spectrum CSV written by `bianchi spectrum`");
  add_metric_options(cmd, s.metric);
  cmd->add_option("--emax", s.emax, "compute the spectrum inline up to this energy");
  cmd->add_option("--tol", s.tol, "Mathieu tolerance for inline spectra")->capture_default_str();
  cmd->add_option("--synthetic", s.synthetic, "synthetic control: poisson or picket")
      ->check(CLI::IsMember({"poisson", "picket"}));
  cmd->add_option("--count", s.count, "synthetic level count")->capture_default_str();
  cmd->add_option("--seed", s.seed, "synthetic RNG seed")->capture_default_str();
  if (with_form) {
    cmd->add_option("--form-beta", s.form_beta, "use values of k1^2 + beta k2^2");
    cmd->add_option("--vmax", s.vmax, "upper bound for the form values");
  }
  cmd->add_option("--levels", s.levels, "multiplicity or distinct")
      ->check(CLI::IsMember({"multiplicity", "distinct"}))
      ->capture_default_str();
  cmd->add_option("--unfold", s.unfold, "rank or fit")->check(CLI::IsMember({"rank", "fit"}))->capture_default_str();
  cmd->add_option("--degree", s.degree, "polynomial degree for --unfold fit")->capture_default_str();
  cmd->add_option("--threads", s.threads, "worker threads (0: all cores)");
}

stats::UnfoldedSpectrum load_levels(const LevelSource& s, Metadata& meta) {
  const int sources = static_cast<int>(!s.input.empty()) + static_cast<int>(s.emax > 0.0) +
                      static_cast<int>(!s.synthetic.empty()) + static_cast<int>(s.form_beta > 0.0);
  if (sources != 1) throw UsageError("give exactly one of --input, --emax, --synthetic, --form-beta");
  stats::UnfoldOptions opts;
  opts.levels = s.levels == "distinct" ? stats::LevelMode::distinct : stats::LevelMode::with_multiplicity;
  opts.method = s.unfold == "fit" ? stats::UnfoldMethod::polynomial_fit : stats::UnfoldMethod::rank;
  opts.degree = s.degree;
  meta.emplace_back("levels", std::string(stats::to_string(opts.levels)));
  meta.emplace_back("unfold", std::string(stats::to_string(opts.method)));
  if (opts.method == stats::UnfoldMethod::polynomial_fit) meta.emplace_back("degree", std::to_string(s.degree));

  if (!s.input.empty()) {
    std::ifstream f(s.input, std::ios::binary);
    if (!f) throw UsageError("cannot read " + s.input);
    meta.emplace_back("source", "file");
    meta.emplace_back("input", s.input);
    return stats::unfold(io::read_spectrum_csv(f), opts);
  }
  if (s.emax > 0.0) {
    meta.emplace_back("source", "spectrum");
    add_metric_metadata(meta, s.metric);
    meta.emplace_back("E_max", format_double(s.emax));
    meta.emplace_back("tol", format_double(s.tol));
    return stats::unfold(compute_spectrum(s.metric, s.emax, s.tol, s.threads).lines, opts);
  }
  if (!s.synthetic.empty()) {
    meta.emplace_back("source", "synthetic:" + s.synthetic);
    meta.emplace_back("count", std::to_string(s.count));
    std::vector<double> values(s.count);
    if (s.synthetic == "picket") {
      for (std::size_t i = 0; i < s.count; ++i) values[i] = static_cast<double>(i);
    } else {
      meta.emplace_back("seed", std::to_string(s.seed));
      std::mt19937_64 rng(s.seed);
      const double span = static_cast<double>(s.count);
      // Top 53 bits: identical across standard libraries, unlike the distributions.
      for (auto& v : values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * span;
    }
    return stats::unfold(std::move(values), opts);
  }
  if (!(s.vmax > 0.0)) throw UsageError("--form-beta needs --vmax > 0");
  meta.emplace_back("source", "form");
  meta.emplace_back("beta", format_double(s.form_beta));
  meta.emplace_back("v_max", format_double(s.vmax));
  return stats::unfold(stats::diagonal_form_values(s.form_beta, s.vmax), opts);
}

struct SpacingsArgs {
  LevelSource source;
  int bins = 40;
  double s_max = 4.0;
  std::string output = "-";
  std::string summary;
};

int cmd_spacings(const SpacingsArgs& a, std::ostream& out, std::ostream& err) {
  Metadata meta = base_metadata("spacings");
  const auto u = load_levels(a.source, meta);
  const auto h = stats::spacing_distribution(u, a.bins, a.s_max);
  meta.emplace_back("bins", std::to_string(a.bins));
  meta.emplace_back("s_max", format_double(a.s_max));
  emit(a.output, out, [&](std::ostream& os) { io::write_histogram_csv(os, h, meta); });

  nlohmann::json summary;
  summary["metadata"] = io::metadata_json(meta);
  summary["levels"] = u.levels.size();
  summary["spacings"] = h.total;
  summary["zero_atom"] = h.zero_atom;
  summary["ks_distance"] = h.ks_distance;
  emit(sidecar_path(a.output, a.summary, ".summary.json"), err,
       [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  err << "levels: " << u.levels.size() << "  zero atom: " << format_double(h.zero_atom)
      << "  KS distance: " << format_double(h.ks_distance) << '\n';
  return kOk;
}

struct PairArgs {
  LevelSource source;
  double window = 1.0;
  int bins = 10;
  std::string output = "-";
  std::string summary;
};

int cmd_pair_correlation(const PairArgs& a, std::ostream& out, std::ostream& err) {
  Metadata meta = base_metadata("pair-correlation");
  const auto u = load_levels(a.source, meta);
  const auto pc = stats::pair_correlation(u, a.window, a.bins, a.source.threads);
  meta.emplace_back("window", format_double(a.window));
  meta.emplace_back("bins", std::to_string(a.bins));
  emit(a.output, out, [&](std::ostream& os) { io::write_pair_correlation_csv(os, pc, meta); });

  nlohmann::json summary;
  summary["metadata"] = io::metadata_json(meta);
  summary["levels"] = u.levels.size();
  summary["references"] = pc.references;
  summary["zero_pairs"] = pc.zero_pairs;
  summary["max_flatness_deviation"] = stats::max_flatness_deviation(pc);
  emit(sidecar_path(a.output, a.summary, ".summary.json"), err,
       [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  err << "levels: " << u.levels.size() << "  max |density-1|: " << format_double(stats::max_flatness_deviation(pc))
      << '\n';
  return kOk;
}

// ----------------------------------------------------------- monodromy

struct MonodromyArgs {
  std::string lattice = "hexagonal";
  int n = 3;
  double qmax = 100.0;
  std::string output = "-";
};

int cmd_monodromy(const MonodromyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n != 3 && a.n != 4 && a.n != 6) throw UsageError("monodromy needs --n 3, 4 or 6");
  const auto lat = lattice::parse_lattice(a.lattice, a.n);
  const auto pts = spectrum::monodromy_grid(lat, a.n, a.qmax);
  Metadata meta = base_metadata("monodromy");
  meta.emplace_back("lattice", a.lattice);
  meta.emplace_back("n", std::to_string(a.n));
  meta.emplace_back("Q_max", format_double(a.qmax));
  meta.emplace_back("points", std::to_string(pts.size()));
  emit(a.output, out, [&](std::ostream& os) { io::write_monodromy_csv(os, pts, meta); });
  err << "orbit points: " << pts.size() << '\n';
  return kOk;
}

// ------------------------------------------------------------ geodesic

struct GeodesicArgs {
  double A = 1.0;
  double B = 1.0;
  int n = 1;
  geodesic::TrajectoryState init;
  std::optional<double> energy;
  double tmax = 0.0;
  double dt = 0.1;
  std::string output = "-";
  std::string summary;
};

int cmd_geodesic(const GeodesicArgs& a, std::ostream& out, std::ostream& err) {
  const MetricParams metric(a.A, a.B);
  const double H = geodesic::hamiltonian(metric, a.init);
  if (a.energy && std::abs(*a.energy - H) > 1e-12 * std::max(1.0, std::abs(H))) {
    throw ConsistencyError("--energy " + format_double(*a.energy) + " does not match H(initial) = " +
                           format_double(H));
  }
  const auto traj = geodesic::integrate_geodesic(metric, a.init, a.tmax, a.dt);
  const auto drifts = geodesic::invariants_check(metric, a.n, traj.samples);

  Metadata meta = base_metadata("geodesic");
  meta.emplace_back("A", format_double(a.A));
  meta.emplace_back("B", format_double(a.B));
  meta.emplace_back("n", std::to_string(a.n));
  for (const auto& [k, v] : {std::pair{"q0", a.init.q0}, {"q1", a.init.q1}, {"q2", a.init.q2}, {"p0", a.init.p0},
                             {"p1", a.init.p1}, {"p2", a.init.p2}}) {
    meta.emplace_back(k, format_double(v));
  }
  meta.emplace_back("t_max", format_double(a.tmax));
  meta.emplace_back("dt", format_double(a.dt));
  meta.emplace_back("regime", std::string(geodesic::to_string(traj.regime.kind)));
  emit(a.output, out, [&](std::ostream& os) { io::write_trajectory_csv(os, metric, traj.samples, meta); });

  nlohmann::json summary;
  summary["metadata"] = io::metadata_json(meta);
  summary["H"] = H;
  summary["regime"] = geodesic::to_string(traj.regime.kind);
  summary["C"] = traj.regime.C;
  summary["h0"] = traj.regime.h0;
  summary["meridian"] = traj.meridian;
  auto& inv = summary["max_drift"] = nlohmann::json::object();
  for (const auto& d : drifts) inv[d.name] = d.max_drift;
  if (!traj.meridian) {
    // q2' + p0/c in the frame p2 = 0.
    const double cb = std::cos(traj.beta);
    const double sb = std::sin(traj.beta);
    auto rel = [&](const geodesic::TrajectoryState& s) { return -sb * s.q1 + cb * s.q2 + s.p0 / traj.c; };
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, std::abs(rel(s) - rel(traj.samples.front())));
    inv["q2+p0/c"] = worst;
  }
  emit(sidecar_path(a.output, a.summary, ".json"), err, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  err << "samples: " << traj.samples.size() << "  regime: " << geodesic::to_string(traj.regime.kind) << '\n';
  return kOk;
}

// ------------------------------------------------------ arithmetic

struct RepcountArgs {
  std::string form = "square";
  std::int64_t K = 0;
  std::int64_t kmax = 0;
  bool check = false;
  std::string output = "-";
};

int cmd_repcount(const RepcountArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = lattice::parse_form_kind(a.form);
  if ((a.K > 0) == (a.kmax > 0)) throw UsageError("give exactly one of --K or --kmax");
  const std::int64_t lo = a.K > 0 ? a.K : 1;
  const std::int64_t hi = a.K > 0 ? a.K : a.kmax;
  Metadata meta = base_metadata("repcount");
  meta.emplace_back("form", a.form);
  meta.emplace_back("K_min", std::to_string(lo));
  meta.emplace_back("K_max", std::to_string(hi));
  std::int64_t mismatches = 0;
  emit(a.output, out, [&](std::ostream& os) {
    io::write_metadata(os, meta);
    os << (a.check ? "K,N,N_bruteforce\n" : "K,N\n");
    for (std::int64_t K = lo; K <= hi; ++K) {
      const auto n = lattice::representation_count_divisor(kind, K).N;
      os << K << ',' << n;
      if (a.check) {
        const auto b = lattice::representation_count_bruteforce(lattice::form_of(kind), static_cast<double>(K)).N;
        if (b != n) ++mismatches;
        os << ',' << b;
      }
      os << '\n';
    }
  });
  if (a.check) err << "mismatches: " << mismatches << '\n';
  return kOk;
}

struct DensityArgs {
  std::string form = "square";
  std::int64_t N = 0;
  std::string output = "-";
};

int cmd_density(const DensityArgs& a, std::ostream& out, std::ostream&) {
  const auto kind = lattice::parse_form_kind(a.form);
  const auto d = lattice::representable_density(kind, a.N);
  Metadata meta = base_metadata("density");
  meta.emplace_back("form", a.form);
  emit(a.output, out, [&](std::ostream& os) {
    io::write_metadata(os, meta);
    os << "N,count,normalized\n" << a.N << ',' << d.count << ',' << format_double(d.normalized) << '\n';
  });
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, geodesics and level statistics of Bianchi-VII0 torus bundles", "bianchi"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SpectrumArgs sp;
  auto* c_spec = app.add_subcommand("spectrum", "Laplace-Beltrami spectrum below E_max");
  add_metric_options(c_spec, sp.metric);
  c_spec->add_option("--emax", sp.emax, "energy cutoff")->required();
  c_spec->add_option("--tol", sp.tol, "Mathieu eigenvalue tolerance")->capture_default_str();
  c_spec->add_option("--format", sp.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_spec->add_option("--output,-o", sp.output, "output file ('-' for stdout)")->capture_default_str();
  c_spec->add_option("--threads", sp.threads, "worker threads (0: all cores)");

  SpacingsArgs sa;
  auto* c_spac = app.add_subcommand("spacings", "Nearest-neighbour spacing histogram and KS distance");
  add_level_source(c_spac, sa.source, false, "multiplicity", "fit");
  c_spac->add_option("--bins", sa.bins, "histogram bins")->capture_default_str();
  c_spac->add_option("--smax", sa.s_max, "histogram upper edge")->capture_default_str();
  c_spac->add_option("--output,-o", sa.output, "histogram CSV ('-' for stdout)")->capture_default_str();
  c_spac->add_option("--summary", sa.summary, "summary JSON (default: <output>.summary.json)");

  PairArgs pa;
  auto* c_pair = app.add_subcommand("pair-correlation", "Two-point correlation of unfolded levels");
  add_level_source(c_pair, pa.source, true, "distinct", "fit");
  c_pair->add_option("--window", pa.window, "largest pair distance")->capture_default_str();
  c_pair->add_option("--bins", pa.bins, "histogram bins")->capture_default_str();
  c_pair->add_option("--output,-o", pa.output, "histogram CSV ('-' for stdout)")->capture_default_str();
  c_pair->add_option("--summary", pa.summary, "summary JSON (default: <output>.summary.json)");

  MonodromyArgs ma;
  auto* c_mono = app.add_subcommand("monodromy", "Quantum monodromy grid (F1, F2) per Z_n orbit");
  c_mono->add_option("--lattice", ma.lattice, "square, hexagonal or generic:a,b,c,d")->capture_default_str();
  c_mono->add_option("--n", ma.n, "rotation order (3, 4 or 6)")->capture_default_str();
  c_mono->add_option("--qmax", ma.qmax, "largest Q(p)")->capture_default_str();
  c_mono->add_option("--output,-o", ma.output, "output CSV ('-' for stdout)")->capture_default_str();

  GeodesicArgs ga;
  auto* c_geo = app.add_subcommand("geodesic", "Exact geodesic trajectory with conservation summary");
  c_geo->add_option("--A", ga.A, "metric parameter A > 0")->capture_default_str();
  c_geo->add_option("--B", ga.B, "metric parameter B > 0")->capture_default_str();
  c_geo->add_option("--n", ga.n, "symmetry order for the polynomial integrals")->capture_default_str();
  c_geo->add_option("--q0", ga.init.q0);
  c_geo->add_option("--q1", ga.init.q1);
  c_geo->add_option("--q2", ga.init.q2);
  c_geo->add_option("--p0", ga.init.p0);
  c_geo->add_option("--p1", ga.init.p1);
  c_geo->add_option("--p2", ga.init.p2);
  c_geo->add_option("--energy", ga.energy, "expected H of the initial state (checked)");
  c_geo->add_option("--tmax", ga.tmax, "final time")->required();
  c_geo->add_option("--dt", ga.dt, "sampling step")->capture_default_str();
  c_geo->add_option("--output,-o", ga.output, "trajectory CSV ('-' for stdout)")->capture_default_str();
  c_geo->add_option("--summary", ga.summary, "conservation JSON (default: <output>.json)");

  RepcountArgs ra;
  auto* c_rep = app.add_subcommand("repcount", "Representation counts N(K) from the divisor formulas");
  c_rep->add_option("--form", ra.form, "square or hexagonal")->capture_default_str();
  c_rep->add_option("--K", ra.K, "single value");
  c_rep->add_option("--kmax", ra.kmax, "all K in [1, kmax]");
  c_rep->add_flag("--check", ra.check, "also count by brute force");
  c_rep->add_option("--output,-o", ra.output, "output CSV ('-' for stdout)")->capture_default_str();

  DensityArgs da;
  auto* c_den = app.add_subcommand("density", "Count of represented K <= N and count sqrt(log N) / N");
  c_den->add_option("--form", da.form, "square or hexagonal")->capture_default_str();
  c_den->add_option("--N", da.N, "upper bound")->required();
  c_den->add_option("--output,-o", da.output, "output CSV ('-' for stdout)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_spec->parsed()) return cmd_spectrum(sp, out, err);
    if (c_spac->parsed()) return cmd_spacings(sa, out, err);
    if (c_pair->parsed()) return cmd_pair_correlation(pa, out, err);
    if (c_mono->parsed()) return cmd_monodromy(ma, out, err);
    if (c_geo->parsed()) return cmd_geodesic(ga, out, err);
    if (c_rep->parsed()) return cmd_repcount(ra, out, err);
    if (c_den->parsed()) return cmd_density(da, out, err);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kConvergence;
  } catch (const std::exception& e) {
    // Domain, symmetry, lattice, consistency, sample-size and I/O problems.
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bianchi::cli
