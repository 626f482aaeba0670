#include "bianchi/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bianchi/errors.hpp"

namespace bianchi::lattice {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat2 inverse(const Mat2& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Mat2 multiply(const Mat2& x, const Mat2& y) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return out;
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

// Row interval of the ellipse a k1^2 + b k1 k2 + c k2^2 <= K at fixed k1.
bool row_interval(const QuadraticForm& q, std::int64_t k1, double K, std::int64_t& lo, std::int64_t& hi) {
  const double x = static_cast<double>(k1);
  const double disc = 4.0 * q.c * K - (4.0 * q.a * q.c - q.b * q.b) * x * x;
  if (disc < 0.0) {
    // Still probe the centre row point in case rounding pushed disc below 0.
    const double centre = -q.b * x / (2.0 * q.c);
    lo = static_cast<std::int64_t>(std::floor(centre)) - 1;
    hi = lo + 2;
    return disc > -1e-9 * std::max(1.0, K);
  }
  const double root = std::sqrt(disc);
  lo = static_cast<std::int64_t>(std::floor((-q.b * x - root) / (2.0 * q.c))) - 1;
  hi = static_cast<std::int64_t>(std::ceil((-q.b * x + root) / (2.0 * q.c))) + 1;
  return true;
}

std::int64_t row_radius(const QuadraticForm& q, double K) {
  // |k|^2 <= K / lambda_min bounds the first coordinate.
  return static_cast<std::int64_t>(std::floor(std::sqrt(K / q.min_eigenvalue()))) + 1;
}

void check_budget(const QuadraticForm& q, double K, std::int64_t budget) {
  const double area = std::numbers::pi * K / std::sqrt(q.a * q.c - 0.25 * q.b * q.b);
  const double box = 2.0 * static_cast<double>(row_radius(q, K)) + 1.0;
  if (area + 4.0 * box > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "lattice enumeration for Q <= " << K << " exceeds budget of " << budget << " points";
    throw ResourceError(msg.str());
  }
}

template <typename Visit>
void walk_ellipse(const QuadraticForm& q, double K, bool nonnegative_k1, Visit&& visit) {
  const std::int64_t r = row_radius(q, K);
  for (std::int64_t k1 = nonnegative_k1 ? 0 : -r; k1 <= r; ++k1) {
    std::int64_t lo = 0, hi = 0;
    if (!row_interval(q, k1, K, lo, hi)) continue;
    for (std::int64_t k2 = lo; k2 <= hi; ++k2) visit(IVec2{k1, k2});
  }
}

}  // namespace

Mat2 rotation(int n) {
  const double angle = kTwoPi / n;
  double c = std::cos(angle), s = std::sin(angle);
  // Exact entries for the crystallographic orders.
  switch (n) {
    case 1: c = 1.0; s = 0.0; break;
    case 2: c = -1.0; s = 0.0; break;
    case 3: c = -0.5; s = std::numbers::sqrt3 / 2.0; break;
    case 4: c = 0.0; s = 1.0; break;
    case 6: c = 0.5; s = std::numbers::sqrt3 / 2.0; break;
    default: break;
  }
  return {{{c, -s}, {s, c}}};
}

bool is_crystallographic_order(int n) { return n == 1 || n == 2 || n == 3 || n == 4 || n == 6; }

Lattice2D::Lattice2D(Vec2 e1, Vec2 e2, int symmetry_order) : e1_(e1), e2_(e2), order_(symmetry_order) {
  if (!std::isfinite(e1[0]) || !std::isfinite(e1[1]) || !std::isfinite(e2[0]) || !std::isfinite(e2[1]) ||
      std::abs(determinant()) < 1e-12) {
    throw DegenerateLatticeError("lattice basis is degenerate (|det| < 1e-12)");
  }
  if (!is_crystallographic_order(order_)) {
    throw SymmetryError("symmetry order must be one of 1, 2, 3, 4, 6");
  }
  if (!invariant_under(order_)) {
    throw SymmetryError("lattice is not invariant under the rotation of order " + std::to_string(order_));
  }
}

Lattice2D Lattice2D::square(int symmetry_order) {
  return Lattice2D({kTwoPi, 0.0}, {0.0, kTwoPi}, symmetry_order);
}

Lattice2D Lattice2D::hexagonal(int symmetry_order) {
  // E = 2 pi Omega^{-1} with dual rows w1 = (1, 0), w2 = (1/2, sqrt3/2).
  const double r3 = std::numbers::sqrt3;
  return Lattice2D({kTwoPi, -kTwoPi / r3}, {0.0, 2.0 * kTwoPi / r3}, symmetry_order);
}

double Lattice2D::determinant() const noexcept { return e1_[0] * e2_[1] - e1_[1] * e2_[0]; }

bool Lattice2D::invariant_under(int n) const {
  if (n == 1 || n == 2) return true;
  const Mat2 basis{{{e1_[0], e2_[0]}, {e1_[1], e2_[1]}}};
  const Mat2 coords = multiply(inverse(basis), multiply(rotation(n), basis));
  for (const auto& row : coords)
    for (double x : row)
      if (!near_integer(x, 1e-10)) return false;
  return true;
}

Vec2 DualBasis::apply_transpose(const IVec2& k) const noexcept {
  const double k1 = static_cast<double>(k[0]);
  const double k2 = static_cast<double>(k[1]);
  return {k1 * omega[0][0] + k2 * omega[1][0], k1 * omega[0][1] + k2 * omega[1][1]};
}

DualBasis dual_basis(const Lattice2D& lat) {
  const Mat2 basis{{{lat.e1()[0], lat.e2()[0]}, {lat.e1()[1], lat.e2()[1]}}};
  if (std::abs(lat.determinant()) < 1e-12) throw DegenerateLatticeError("degenerate lattice basis");
  Mat2 inv = inverse(basis);
  DualBasis dual;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) dual.omega[i][j] = kTwoPi * inv[i][j];
  return dual;
}

QuadraticForm QuadraticForm::from_dual(const DualBasis& dual) {
  const auto& w = dual.omega;
  return {w[0][0] * w[0][0] + w[0][1] * w[0][1], 2.0 * (w[0][0] * w[1][0] + w[0][1] * w[1][1]),
          w[1][0] * w[1][0] + w[1][1] * w[1][1]};
}

bool QuadraticForm::is_integral() const noexcept {
  return near_integer(a, 1e-12) && near_integer(b, 1e-12) && near_integer(c, 1e-12);
}

double QuadraticForm::min_eigenvalue() const noexcept {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), 0.5 * b);
  return mean - radius;
}

double qform_value(const QuadraticForm& q, const IVec2& k) {
  if (q.is_integral()) return static_cast<double>(qform_value_integral(q, k));
  const double k1 = static_cast<double>(k[0]);
  const double k2 = static_cast<double>(k[1]);
  return q.a * k1 * k1 + q.b * k1 * k2 + q.c * k2 * k2;
}

std::int64_t qform_value_integral(const QuadraticForm& q, const IVec2& k) {
  const auto a = static_cast<std::int64_t>(std::llround(q.a));
  const auto b = static_cast<std::int64_t>(std::llround(q.b));
  const auto c = static_cast<std::int64_t>(std::llround(q.c));
  return a * k[0] * k[0] + b * k[0] * k[1] + c * k[1] * k[1];
}

RepresentationCount representation_count_bruteforce(const QuadraticForm& q, double K,
                                                    std::int64_t point_budget) {
  if (!q.positive_definite()) throw DomainError("quadratic form must be positive definite");
  if (!(K >= 0.0)) throw DomainError("representation count needs K >= 0");
  check_budget(q, K, point_budget);
  RepresentationCount out{K, 0};
  if (q.is_integral()) {
    if (!near_integer(K, 0.0)) return out;
    const auto target = static_cast<std::int64_t>(K);
    walk_ellipse(q, K, false, [&](const IVec2& k) {
      if (qform_value_integral(q, k) == target) ++out.N;
    });
  } else {
    const double eps = 1e-9 * std::max(1.0, K);
    walk_ellipse(q, K + eps, false, [&](const IVec2& k) {
      if (std::abs(qform_value(q, k) - K) <= eps) ++out.N;
    });
  }
  return out;
}

std::string_view to_string(FormKind kind) { return kind == FormKind::square ? "square" : "hexagonal"; }

FormKind parse_form_kind(std::string_view name) {
  if (name == "square") return FormKind::square;
  if (name == "hexagonal") return FormKind::hexagonal;
  throw DomainError("unknown form kind '" + std::string(name) + "' (expected square or hexagonal)");
}

QuadraticForm form_of(FormKind kind) {
  return kind == FormKind::square ? QuadraticForm::square() : QuadraticForm::hexagonal();
}

RepresentationCount representation_count_divisor(FormKind kind, std::int64_t K) {
  if (K < 1) throw DomainError("divisor formula needs K >= 1; N(0) = 1 by convention");
  if (K > 100'000'000) throw ResourceError("divisor formula budget is K <= 1e8");
  const std::int64_t modulus = kind == FormKind::square ? 4 : 3;
  const std::int64_t minus_residue = kind == FormKind::square ? 3 : 2;
  std::int64_t plus = 0, minus = 0;
  auto tally = [&](std::int64_t d) {
    const std::int64_t r = d % modulus;
    if (r == 1) ++plus;
    if (r == minus_residue) ++minus;
  };
  for (std::int64_t d = 1; d * d <= K; ++d) {
    if (K % d != 0) continue;
    tally(d);
    if (d * d != K) tally(K / d);
  }
  const std::int64_t weight = kind == FormKind::square ? 4 : 6;
  return {static_cast<double>(K), weight * (plus - minus)};
}

Density representable_density(FormKind kind, std::int64_t N) {
  if (N < 2) throw DomainError("representable_density needs N >= 2");
  const QuadraticForm q = form_of(kind);
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(N) + 1, 0);
  // Q(k) = Q(-k): the half plane k1 >= 0 already reaches every value.
  walk_ellipse(q, static_cast<double>(N), true, [&](const IVec2& k) {
    const std::int64_t v = qform_value_integral(q, k);
    if (v >= 1 && v <= N) hit[static_cast<std::size_t>(v)] = 1;
  });
  Density d;
  for (std::int64_t v = 1; v <= N; ++v) d.count += hit[static_cast<std::size_t>(v)];
  const double n = static_cast<double>(N);
  d.normalized = static_cast<double>(d.count) * std::sqrt(std::log(n)) / n;
  return d;
}

IMat2 index_rotation(const DualBasis& dual, int n) {
  if (!is_crystallographic_order(n)) throw SymmetryError("symmetry order must be one of 1, 2, 3, 4, 6");
  // W = Omega^T has the dual vectors as columns; M = W^{-1} R W.
  const Mat2 w{{{dual.omega[0][0], dual.omega[1][0]}, {dual.omega[0][1], dual.omega[1][1]}}};
  const Mat2 m = multiply(inverse(w), multiply(rotation(n), w));
  IMat2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!near_integer(m[i][j], 1e-9)) {
        throw SymmetryError("dual lattice is not invariant under the rotation of order " + std::to_string(n));
      }
      out[i][j] = std::llround(m[i][j]);
    }
  }
  return out;
}

IVec2 apply(const IMat2& m, const IVec2& k) noexcept {
  return {m[0][0] * k[0] + m[0][1] * k[1], m[1][0] * k[0] + m[1][1] * k[1]};
}

std::size_t OrbitShell::vector_count() const noexcept {
  std::size_t total = 0;
  for (const auto& o : orbits) total += o.members.size();
  return total;
}

std::vector<IVec2> enumerate_vectors(const QuadraticForm& q, double K_max, std::int64_t point_budget) {
  if (!q.positive_definite()) throw DomainError("quadratic form must be positive definite");
  check_budget(q, K_max, point_budget);
  const bool integral = q.is_integral();
  const double limit = integral ? std::floor(K_max + 1e-9) : K_max * (1.0 + 1e-12);
  std::vector<std::pair<double, IVec2>> tagged;
  walk_ellipse(q, limit, false, [&](const IVec2& k) {
    if (k[0] == 0 && k[1] == 0) return;
    const double v = qform_value(q, k);
    if (v <= limit) tagged.emplace_back(v, k);
  });
  std::sort(tagged.begin(), tagged.end());
  std::vector<IVec2> out;
  out.reserve(tagged.size());
  for (const auto& [v, k] : tagged) out.push_back(k);
  return out;
}

std::vector<OrbitShell> orbit_decomposition(const DualBasis& dual, int n, double K_max,
                                            std::int64_t point_budget) {
  const IMat2 m = index_rotation(dual, n);
  const QuadraticForm q = QuadraticForm::from_dual(dual);
  const bool integral = q.is_integral();
  const std::vector<IVec2> vectors = enumerate_vectors(q, K_max, point_budget);

  auto same_value = [&](double x, double y) {
    return integral ? x == y : std::abs(x - y) <= 1e-11 * std::max(1.0, std::abs(x));
  };

  std::vector<OrbitShell> shells;
  std::size_t begin = 0;
  while (begin < vectors.size()) {
    const double K = qform_value(q, vectors[begin]);
    std::size_t end = begin + 1;
    while (end < vectors.size() && same_value(qform_value(q, vectors[end]), K)) ++end;

    std::vector<IVec2> members(vectors.begin() + static_cast<std::ptrdiff_t>(begin),
                               vectors.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(members.begin(), members.end());
    std::vector<bool> seen(members.size(), false);
    OrbitShell shell;
    shell.K = K;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (seen[i]) continue;
      Orbit orbit;
      IVec2 k = members[i];
      do {
        const auto it = std::lower_bound(members.begin(), members.end(), k);
        if (it == members.end() || *it != k) {
          throw SymmetryError("quadratic form is not invariant under the index rotation of order " +
                              std::to_string(n));
        }
        seen[static_cast<std::size_t>(it - members.begin())] = true;
        orbit.members.push_back(k);
        k = lattice::apply(m, k);
      } while (k != members[i] && orbit.members.size() <= static_cast<std::size_t>(n));
      if (k != members[i]) throw SymmetryError("index rotation does not have the claimed order");
      orbit.representative = *std::min_element(orbit.members.begin(), orbit.members.end());
      shell.orbits.push_back(std::move(orbit));
    }
    std::sort(shell.orbits.begin(), shell.orbits.end(),
              [](const Orbit& x, const Orbit& y) { return x.representative < y.representative; });
    shells.push_back(std::move(shell));
    begin = end;
  }
  return shells;
}

Lattice2D parse_lattice(std::string_view spec, int symmetry_order) {
  if (spec == "square") return Lattice2D::square(symmetry_order);
  if (spec == "hexagonal") return Lattice2D::hexagonal(symmetry_order);
  constexpr std::string_view prefix = "generic:";
  if (spec.substr(0, prefix.size()) == prefix) {
    std::array<double, 4> v{};
    std::string_view rest = spec.substr(prefix.size());
    for (int i = 0; i < 4; ++i) {
      const auto comma = rest.find(',');
      const std::string token(rest.substr(0, comma));
      std::size_t used = 0;
      try {
        v[static_cast<std::size_t>(i)] = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != token.size() || (i < 3 && comma == std::string_view::npos) ||
          (i == 3 && comma != std::string_view::npos)) {
        throw DomainError("malformed lattice spec '" + std::string(spec) + "' (expected generic:a,b,c,d)");
      }
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return Lattice2D({v[0], v[1]}, {v[2], v[3]}, symmetry_order);
  }
  throw DomainError("unknown lattice '" + std::string(spec) + "' (expected square, hexagonal or generic:a,b,c,d)");
}

}  // namespace bianchi::lattice
