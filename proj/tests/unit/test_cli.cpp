#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "bianchi/io.hpp"
#include "bianchi/lattice.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using bianchi::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bianchi_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"spectrum", "--A", "1"}).code, 2);  // missing --emax
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--lattice", "square", "--n", "3", "--emax", "10"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--B", "-1", "--emax", "10"}).code, 2);
}

TEST(Cli, ResourceExitCode) {
  const auto r = run({"spectrum", "--A", "1", "--B", "2", "--emax", "1e10"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, FlatSpectrumIsQTilde) {
  const auto r = run({"spectrum", "--A", "1", "--B", "1", "--lattice", "square", "--n", "1", "--emax", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# version="), std::string::npos);
  EXPECT_NE(r.err.find("top multiplicities"), std::string::npos);
  std::vector<double> got;
  for (const auto& row : csv_rows(r.out)) {
    const double e = std::stod(row[0]);
    for (int i = 0; i < std::stoi(row[1]); ++i) got.push_back(e);
  }
  std::sort(got.begin(), got.end());
  const auto ref = oracle::qtilde_values(1.0, 1.0, 0.0, 1.0, 50.0);
  ASSERT_EQ(got.size(), ref.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-10);
}

TEST(Cli, HexagonalQuotientMultiplicities) {
  const auto path = scratch("hex3.csv");
  const auto r = run({"spectrum", "--A", "1", "--B", "2", "--lattice", "hexagonal", "--n", "3", "--emax", "200",
                      "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int checked = 0;
  for (const auto& row : csv_rows(slurp(path))) {
    if (row[2] != "mathieu") continue;
    const auto K = std::llround(std::stod(row[3]));
    const auto N = bianchi::lattice::representation_count_divisor(bianchi::lattice::FormKind::hexagonal, K).N;
    EXPECT_EQ(std::stoll(row[1]) * 3, N) << "K=" << K;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Cli, SpectrumJson) {
  const auto r = run({"spectrum", "--B", "2", "--emax", "20", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["metadata"]["E_max"], "20");
  EXPECT_EQ(j["metadata"]["program"], "bianchi");
  EXPECT_GT(j["lines"].size(), 5u);
}

TEST(Cli, SpacingsControls) {
  const auto hist = scratch("poisson.csv");
  auto r = run({"spacings", "--synthetic", "poisson", "--count", "10000", "--seed", "4", "-o", hist.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto summary = nlohmann::json::parse(slurp(hist.string() + ".summary.json"));
  EXPECT_LT(summary["ks_distance"].get<double>(), 0.02);
  EXPECT_EQ(summary["metadata"]["seed"], "4");

  r = run({"spacings", "--synthetic", "picket", "--count", "500", "-o", hist.string()});
  ASSERT_EQ(r.code, 0);
  summary = nlohmann::json::parse(slurp(hist.string() + ".summary.json"));
  EXPECT_GT(summary["ks_distance"].get<double>(), 0.5);

  r = run({"spacings", "--A", "1", "--B", "2", "--lattice", "square", "--n", "4", "--emax", "500", "-o",
           hist.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  summary = nlohmann::json::parse(slurp(hist.string() + ".summary.json"));
  EXPECT_GT(summary["zero_atom"].get<double>(), 0.3);
  const auto rows = csv_rows(slurp(hist));
  EXPECT_EQ(rows.size(), 40u);
}

TEST(Cli, SpacingsFromFileAndBadInput) {
  const auto spec = scratch("spec.csv");
  ASSERT_EQ(run({"spectrum", "--B", "2", "--n", "4", "--emax", "300", "-o", spec.string()}).code, 0);
  const auto a = run({"spacings", "--input", spec.string(), "--summary", "-", "-o", scratch("h1.csv").string()});
  const auto b = run({"spacings", "--B", "2", "--n", "4", "--emax", "300", "--summary", "-", "-o",
                      scratch("h2.csv").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(csv_rows(slurp(scratch("h1.csv"))), csv_rows(slurp(scratch("h2.csv"))));
  EXPECT_EQ(run({"spacings", "--input", scratch("missing.csv").string()}).code, 2);
  EXPECT_EQ(run({"spacings"}).code, 2);
  EXPECT_EQ(run({"spacings", "--synthetic", "picket", "--count", "10"}).code, 2);
}

TEST(Cli, PairCorrelationGolden) {
  const auto r = run({"pair-correlation", "--form-beta", "1.6180339887498949", "--vmax", "1e6", "--summary", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : csv_rows(r.out)) EXPECT_NEAR(std::stod(row[3]), 1.0, 0.1);
}

TEST(Cli, Monodromy) {
  const auto r = run({"monodromy", "--lattice", "hexagonal", "--n", "3", "--qmax", "49"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  const auto vectors =
      bianchi::lattice::enumerate_vectors(bianchi::lattice::QuadraticForm::hexagonal(), 49.0).size();
  EXPECT_EQ(rows.size() * 3, vectors);
  for (const auto& row : rows) {
    const double Q = std::stod(row[2]), F1 = std::stod(row[3]), F2 = std::stod(row[4]);
    EXPECT_NEAR(F1 * F1 + F2 * F2, Q, 1e-12 * Q);
  }
  EXPECT_EQ(run({"monodromy", "--n", "5"}).code, 2);
  EXPECT_EQ(run({"monodromy", "--lattice", "square", "--n", "3"}).code, 2);
}

TEST(Cli, GeodesicRuns) {
  const auto path = scratch("traj.csv");
  auto r = run({"geodesic", "--A", "1", "--B", "2", "--p0", "0.5", "--p1", "1.5", "--q0", "0.3", "--tmax", "20",
                "--dt", "0.5", "--n", "4", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(slurp(path));
  ASSERT_EQ(rows.size(), 41u);
  const double base = std::stod(rows[0][3]) + std::stod(rows[0][4]) / 1.5;
  for (const auto& row : rows) EXPECT_NEAR(std::stod(row[3]) + std::stod(row[4]) / 1.5, base, 1e-10);
  const auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
  EXPECT_LT(side["max_drift"]["H"].get<double>(), 1e-11);
  EXPECT_LT(side["max_drift"]["q2+p0/c"].get<double>(), 1e-10);
  EXPECT_EQ(side["regime"], "rotation");

  r = run({"geodesic", "--A", "1", "--B", "2", "--p0", "0.7", "--tmax", "5", "--summary", "-"});
  ASSERT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) {
    EXPECT_EQ(std::stod(row[2]), 0.0);
    EXPECT_EQ(std::stod(row[3]), 0.0);
  }
  EXPECT_EQ(run({"geodesic", "--p0", "1", "--tmax", "5", "--energy", "7"}).code, 2);
  EXPECT_EQ(run({"geodesic", "--p0", "1", "--tmax", "-5"}).code, 2);
}

TEST(Cli, Arithmetic) {
  auto r = run({"repcount", "--form", "square", "--K", "25"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out)[0], (std::vector<std::string>{"25", "12"}));
  r = run({"repcount", "--form", "hexagonal", "--kmax", "50", "--check"});
  ASSERT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) EXPECT_EQ(row[1], row[2]);
  EXPECT_NE(r.err.find("mismatches: 0"), std::string::npos);
  r = run({"density", "--form", "square", "--N", "10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out)[0][1], "7");
  EXPECT_EQ(run({"repcount", "--form", "cubic", "--K", "3"}).code, 2);
  EXPECT_EQ(run({"repcount"}).code, 2);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> commands = {
      {"spectrum", "--B", "2.5", "--lattice", "hexagonal", "--n", "6", "--emax", "150"},
      {"spacings", "--synthetic", "poisson", "--count", "2000", "--summary", "-"},
      {"pair-correlation", "--synthetic", "poisson", "--count", "5000", "--summary", "-"},
      {"monodromy", "--n", "4", "--lattice", "square", "--qmax", "30"},
      {"geodesic", "--B", "3", "--p0", "0.2", "--p1", "1", "--p2", "0.4", "--tmax", "10", "--summary", "-"},
      {"repcount", "--kmax", "100"},
      {"density", "--N", "1000"}};
  for (const auto& c : commands) {
    const auto a = run(c);
    const auto b = run(c);
    ASSERT_EQ(a.code, 0) << c[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_EQ(a.err, b.err) << c[0];
  }
}
