#include "bianchi/mathieu.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include "bianchi/errors.hpp"

namespace bianchi::mathieu {

namespace {

constexpr int kMinTruncation = 32;
constexpr int kMaxTruncation = 4096;
constexpr double kBisectionWidth = 1e-12;

int class_index(SymmetryClass c) { return static_cast<int>(c); }

// Smallest block index r whose frequency squared exceeds `bound`; i.e. the
// number of block eigenvalues that can lie below bound + |mu|... by Weyl's
// inequality |lambda_r(mu) - m_r^2| <= |mu|.
int candidates_below(SymmetryClass c, double bound) {
  if (bound < 0.0) return 0;
  int r = 0;
  while (true) {
    const double m = block_frequency(c, r);
    if (m * m > bound) return r;
    ++r;
  }
}

double bisect_eigenvalue(const Tridiagonal& t, int index, double lo, double hi) {
  // Invariant: sturm_count(lo) <= index < sturm_count(hi).
  while (hi - lo > std::max(kBisectionWidth, 4.0 * std::numeric_limits<double>::epsilon() *
                                                  std::max(std::abs(lo), std::abs(hi)))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Lowest `wanted` eigenvalues of one block.
std::vector<double> block_eigenvalues(SymmetryClass c, double mu, int size, int wanted) {
  const Tridiagonal t = block_matrix(c, mu, size);
  std::vector<double> values;
  values.reserve(wanted);
  const double amu = std::abs(mu);
  double floor_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < wanted; ++r) {
    const double m = block_frequency(c, r);
    if (mu == 0.0) {
      values.push_back(m * m);  // diagonal block
      continue;
    }
    double lo = m * m - amu - 1.0;
    double hi = m * m + amu + 1.0;
    if (lo < floor_value) lo = floor_value;
    if (!(sturm_count(t, lo) <= r)) lo = floor_value;
    if (!(sturm_count(t, hi) > r)) {
      // Weyl bracket should always hold; fall back to Gershgorin.
      hi = static_cast<double>(4 * size + 4) * static_cast<double>(size + 1) + 2.0 * amu;
    }
    if (!std::isfinite(lo)) lo = -2.0 * amu - 1.0;
    const double value = bisect_eigenvalue(t, r, lo, hi);
    values.push_back(value);
    floor_value = value - 2.0 * kBisectionWidth;
  }
  return values;
}

// Inverse iteration on (T - sigma I) with a pivoted tridiagonal LU.
std::vector<double> inverse_iteration(const Tridiagonal& t, double sigma) {
  const std::size_t n = t.diag.size();
  std::vector<double> dl(t.off), d(n), du(t.off), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<std::uint8_t> swapped(n, 0);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - sigma;
    scale = std::max(scale, std::abs(t.diag[i]) + (i < t.off.size() ? std::abs(t.off[i]) : 0.0));
  }
  const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  };

  // Deterministic, non-degenerate starting vector.
  std::vector<double> v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  for (auto& x : v) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  for (int iter = 0; iter < 3; ++iter) {
    solve(v);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
  }
  return v;
}

void fix_sign(std::vector<double>& v, int order_index) {
  // The coefficient at the label frequency is made positive; it is the one
  // that survives as mu -> 0.
  std::size_t pivot = static_cast<std::size_t>(order_index);
  if (pivot >= v.size() || std::abs(v[pivot]) < 1e-300) {
    pivot = static_cast<std::size_t>(
        std::max_element(v.begin(), v.end(),
                         [](double a, double b) { return std::abs(a) < std::abs(b); }) -
        v.begin());
  }
  if (v[pivot] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

std::vector<MathieuEigenpair> solve_blocks(double mu, const std::array<int, 4>& wanted, int count_hint,
                                           double tol, bool eigenvectors) {
  const int max_wanted = *std::max_element(wanted.begin(), wanted.end());
  int size = std::max({kMinTruncation,
                       count_hint + static_cast<int>(std::ceil(std::sqrt(std::abs(mu)))) + 16,
                       max_wanted + 16});

  auto compute = [&](int n) {
    std::array<std::vector<double>, 4> out;
    for (SymmetryClass c : kAllClasses) {
      out[class_index(c)] = block_eigenvalues(c, mu, n, wanted[class_index(c)]);
    }
    return out;
  };

  std::array<std::vector<double>, 4> coarse = compute(size);
  std::array<std::vector<double>, 4> fine;
  double shift = std::numeric_limits<double>::infinity();
  while (true) {
    if (2 * size > kMaxTruncation) {
      std::ostringstream msg;
      msg << "Mathieu truncation cap " << kMaxTruncation << " reached for mu=" << mu
          << "; achieved accuracy " << shift;
      throw ConvergenceError(msg.str(), shift);
    }
    fine = compute(2 * size);
    shift = 0.0;
    for (int b = 0; b < 4; ++b) {
      for (std::size_t i = 0; i < fine[b].size(); ++i) {
        shift = std::max(shift, std::abs(fine[b][i] - coarse[b][i]));
      }
    }
    size *= 2;
    if (shift < tol) break;
    coarse = std::move(fine);
  }

  std::vector<MathieuEigenpair> pairs;
  for (SymmetryClass c : kAllClasses) {
    const auto& values = fine[class_index(c)];
    const Tridiagonal t = eigenvectors ? block_matrix(c, mu, size) : Tridiagonal{};
    for (std::size_t r = 0; r < values.size(); ++r) {
      MathieuEigenpair p;
      p.lambda = values[r];
      p.symmetry_class = c;
      p.order = block_frequency(c, static_cast<int>(r));
      p.mu = mu;
      if (eigenvectors) {
        p.fourier_coeffs = inverse_iteration(t, values[r]);
        fix_sign(p.fourier_coeffs, static_cast<int>(r));
      }
      pairs.push_back(std::move(p));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const MathieuEigenpair& a, const MathieuEigenpair& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return class_index(a.symmetry_class) < class_index(b.symmetry_class);
  });
  return pairs;
}

void check_mu(double mu, double tol) {
  if (!std::isfinite(mu)) throw DomainError("Mathieu parameter mu must be finite");
  if (!(tol > 0.0)) throw DomainError("Mathieu tolerance must be positive");
}

}  // namespace

std::string_view to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::even_cos_pi: return "even-cos-pi";
    case SymmetryClass::odd_cos_2pi: return "odd-cos-2pi";
    case SymmetryClass::odd_sin_2pi: return "odd-sin-2pi";
    case SymmetryClass::even_sin_pi: return "even-sin-pi";
  }
  return "?";
}

bool is_cosine(SymmetryClass c) {
  return c == SymmetryClass::even_cos_pi || c == SymmetryClass::odd_cos_2pi;
}

int block_frequency(SymmetryClass c, int r) {
  switch (c) {
    case SymmetryClass::even_cos_pi: return 2 * r;
    case SymmetryClass::odd_cos_2pi:
    case SymmetryClass::odd_sin_2pi: return 2 * r + 1;
    case SymmetryClass::even_sin_pi: return 2 * r + 2;
  }
  return 0;
}

std::string MathieuEigenpair::label() const {
  return (is_cosine(symmetry_class) ? "a" : "b") + std::to_string(order);
}

Tridiagonal block_matrix(SymmetryClass c, double mu, int size) {
  Tridiagonal t;
  t.diag.resize(size);
  t.off.assign(size > 0 ? size - 1 : 0, 0.5 * mu);
  for (int r = 0; r < size; ++r) {
    const double m = block_frequency(c, r);
    t.diag[r] = m * m;
  }
  switch (c) {
    case SymmetryClass::even_cos_pi:
      if (size > 1) t.off[0] = mu / std::numbers::sqrt2;
      break;
    case SymmetryClass::odd_cos_2pi: t.diag[0] += 0.5 * mu; break;
    case SymmetryClass::odd_sin_2pi: t.diag[0] -= 0.5 * mu; break;
    case SymmetryClass::even_sin_pi: break;
  }
  return t;
}

int sturm_count(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  if (n == 0) return 0;
  const double pivmin = std::numeric_limits<double>::min() * 1e4;
  int count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = (t.diag[i] - x) - t.off[i - 1] * t.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<MathieuEigenpair> characteristic_values(double mu, int count, double tol, bool eigenvectors) {
  check_mu(mu, tol);
  if (count < 1) throw DomainError("characteristic_values: count must be >= 1");
  // lambda_l(0) = ceil(l/2)^2 and |lambda_l(mu) - lambda_l(0)| <= |mu|.
  const double top = std::ceil(0.5 * (count - 1));
  const double bound = top * top + 2.0 * std::abs(mu);
  std::array<int, 4> wanted{};
  for (SymmetryClass c : kAllClasses) wanted[class_index(c)] = candidates_below(c, bound);
  auto pairs = solve_blocks(mu, wanted, count, tol, eigenvectors);
  pairs.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].l = static_cast<int>(i);
  return pairs;
}

std::vector<MathieuEigenpair> characteristic_values_below(double mu, double lambda_max, double tol,
                                                          bool eigenvectors) {
  check_mu(mu, tol);
  if (!std::isfinite(lambda_max)) throw DomainError("characteristic_values_below: bound must be finite");
  const double bound = lambda_max + std::abs(mu);
  std::array<int, 4> wanted{};
  int total = 0;
  for (SymmetryClass c : kAllClasses) {
    wanted[class_index(c)] = candidates_below(c, bound);
    total += wanted[class_index(c)];
  }
  if (total == 0) return {};
  auto pairs = solve_blocks(mu, wanted, total, tol, eigenvectors);
  std::erase_if(pairs, [&](const MathieuEigenpair& p) { return p.lambda > lambda_max; });
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].l = static_cast<int>(i);
  return pairs;
}

double eigenfunction_eval(const MathieuEigenpair& pair, double x) {
  if (!std::isfinite(x)) throw DomainError("eigenfunction_eval: x must be finite");
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  const bool cosine = is_cosine(pair.symmetry_class);
  double sum = 0.0;
  for (std::size_t r = 0; r < pair.fourier_coeffs.size(); ++r) {
    const int m = block_frequency(pair.symmetry_class, static_cast<int>(r));
    double basis;
    if (m == 0) {
      basis = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    } else {
      basis = (cosine ? std::cos(m * x) : std::sin(m * x)) * inv_sqrt_pi;
    }
    sum += pair.fourier_coeffs[r] * basis;
  }
  return sum;
}

std::string_view to_string(ChainPattern p) {
  switch (p) {
    case ChainPattern::alternating: return "alternating";
    case ChainPattern::paired: return "paired";
    case ChainPattern::other: return "other";
  }
  return "?";
}

std::vector<std::string> pattern_chain(ChainPattern p, int count) {
  std::vector<std::string> chain;
  if (count <= 0 || p == ChainPattern::other) return chain;
  chain.push_back("a0");
  for (int m = 1; static_cast<int>(chain.size()) < count; ++m) {
    const std::string a = "a" + std::to_string(m);
    const std::string b = "b" + std::to_string(m);
    const bool a_first = p == ChainPattern::paired && m % 2 == 1;
    chain.push_back(a_first ? a : b);
    chain.push_back(a_first ? b : a);
  }
  chain.resize(static_cast<std::size_t>(count));
  return chain;
}

InterlacingReport interlacing_report(double mu, int count) {
  if (mu == 0.0) throw DomainError("interlacing_report: spectrum is degenerate at mu = 0");
  InterlacingReport report;
  report.mu = mu;
  for (const auto& p : characteristic_values(mu, count, 1e-10, false)) {
    report.chain.push_back(p.label());
    report.values.push_back(p.lambda);
  }
  if (report.chain == pattern_chain(ChainPattern::alternating, count)) {
    report.pattern = ChainPattern::alternating;
  } else if (report.chain == pattern_chain(ChainPattern::paired, count)) {
    report.pattern = ChainPattern::paired;
  }
  return report;
}

}  // namespace bianchi::mathieu
