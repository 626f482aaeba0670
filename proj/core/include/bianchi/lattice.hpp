#pragma once

// Planar lattices L in R^2(q1, q2), their dual bases, the dual quadratic form
// Q(k) = |k1 w1 + k2 w2|^2 and the arithmetic of its values.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bianchi::lattice {

using Vec2 = std::array<double, 2>;
using IVec2 = std::array<std::int64_t, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using IMat2 = std::array<std::array<std::int64_t, 2>, 2>;

/// Rotation by 2 pi / n; R_3, R_4 and R_6 are exactly the crystallographic
/// generators, R_1 = I and R_2 = -I.
Mat2 rotation(int n);

bool is_crystallographic_order(int n);

class Lattice2D {
 public:
  /// Validates the basis and the claimed symmetry order. Throws
  /// DegenerateLatticeError or SymmetryError.
  Lattice2D(Vec2 e1, Vec2 e2, int symmetry_order = 1);

  /// L = 2 pi Z^2, dual form k1^2 + k2^2.
  static Lattice2D square(int symmetry_order = 4);
  /// Hexagonal lattice scaled so the dual form is k1^2 + k1 k2 + k2^2.
  static Lattice2D hexagonal(int symmetry_order = 6);

  const Vec2& e1() const noexcept { return e1_; }
  const Vec2& e2() const noexcept { return e2_; }
  int symmetry_order() const noexcept { return order_; }
  double determinant() const noexcept;

  /// Same basis, different claimed order (validated).
  Lattice2D with_symmetry(int n) const { return Lattice2D(e1_, e2_, n); }

  /// Whether R_n maps the lattice into itself (to 1e-10 in lattice coordinates).
  bool invariant_under(int n) const;

 private:
  Vec2 e1_;
  Vec2 e2_;
  int order_;
};

/// Rows w1, w2 with (w_i, e_j) = 2 pi delta_ij.
struct DualBasis {
  Mat2 omega{};

  /// Omega^T k = k1 w1 + k2 w2.
  Vec2 apply_transpose(const IVec2& k) const noexcept;
};

DualBasis dual_basis(const Lattice2D& lat);

struct QuadraticForm {
  double a = 1.0;  ///< Q(k) = a k1^2 + b k1 k2 + c k2^2
  double b = 0.0;
  double c = 1.0;

  static QuadraticForm from_dual(const DualBasis& dual);
  static QuadraticForm square() { return {1.0, 0.0, 1.0}; }
  static QuadraticForm hexagonal() { return {1.0, 1.0, 1.0}; }

  bool positive_definite() const noexcept { return a > 0.0 && 4.0 * a * c - b * b > 0.0; }
  /// All three coefficients within 1e-12 of integers.
  bool is_integral() const noexcept;
  double min_eigenvalue() const noexcept;
};

double qform_value(const QuadraticForm& q, const IVec2& k);

/// Exact value for integral forms (coefficients rounded).
std::int64_t qform_value_integral(const QuadraticForm& q, const IVec2& k);

struct RepresentationCount {
  double K = 0.0;
  std::int64_t N = 0;
};

/// Counts k in Z^2 with Q(k) = K by walking every lattice point of the
/// ellipse Q <= K. Integral forms compare exactly; others within 1e-9 relative.
RepresentationCount representation_count_bruteforce(const QuadraticForm& q, double K,
                                                    std::int64_t point_budget = 100'000'000);

enum class FormKind { square, hexagonal };

std::string_view to_string(FormKind kind);
FormKind parse_form_kind(std::string_view name);
QuadraticForm form_of(FormKind kind);

/// Jacobi: 4 (d_1(K) - d_3(K)) for the square form, 6 (d_1(K) - d_2(K)) for
/// the hexagonal one, divisors counted by residue mod 4 resp. mod 3.
/// Throws DomainError for K < 1 (N(0) = 1 is the caller's convention).
RepresentationCount representation_count_divisor(FormKind kind, std::int64_t K);

struct Density {
  std::int64_t count = 0;  ///< #{1 <= K <= N : N(K) > 0}
  double normalized = 0.0; ///< count sqrt(log N) / N
};

/// Sieve over lattice points. Throws DomainError for N < 2.
Density representable_density(FormKind kind, std::int64_t N);

/// Integer matrix M with Omega^T M k = R_n Omega^T k; throws SymmetryError
/// when the dual lattice is not R_n-invariant.
IMat2 index_rotation(const DualBasis& dual, int n);

IVec2 apply(const IMat2& m, const IVec2& k) noexcept;

struct Orbit {
  IVec2 representative{};  ///< lexicographically smallest member
  std::vector<IVec2> members;
};

struct OrbitShell {
  double K = 0.0;  ///< common value of Q on the shell
  std::vector<Orbit> orbits;
  std::size_t vector_count() const noexcept;
};

/// All nonzero k with Q(k) <= K_max, grouped into shells of equal Q and split
/// into Z_n orbits under the index rotation. Shells are sorted by K.
std::vector<OrbitShell> orbit_decomposition(const DualBasis& dual, int n, double K_max,
                                            std::int64_t point_budget = 100'000'000);

/// Nonzero integer vectors with Q(k) <= K_max, sorted by (Q, k).
std::vector<IVec2> enumerate_vectors(const QuadraticForm& q, double K_max,
                                     std::int64_t point_budget = 100'000'000);

/// "square", "hexagonal" or "generic:a,b,c,d" (e1 = (a,b), e2 = (c,d)).
Lattice2D parse_lattice(std::string_view spec, int symmetry_order);

}  // namespace bianchi::lattice
