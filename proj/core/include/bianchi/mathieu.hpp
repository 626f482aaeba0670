#pragma once

// Periodic spectrum of the Mathieu operator L = -d^2/dx^2 + mu cos 2x on the
// circle R / 2 pi Z.
//
// The problem splits into four parity blocks invariant under L, each a real
// symmetric tridiagonal matrix in an orthonormal trigonometric basis:
//
//   even_cos_pi   1/sqrt(2pi), cos 2jx / sqrt(pi)     eigenvalues a_0, a_2, ...
//   odd_cos_2pi   cos (2j+1)x / sqrt(pi)              eigenvalues a_1, a_3, ...
//   odd_sin_2pi   sin (2j+1)x / sqrt(pi)              eigenvalues b_1, b_3, ...
//   even_sin_pi   sin (2j+2)x / sqrt(pi)              eigenvalues b_2, b_4, ...
//
// Eigenvalues are found by Sturm-sequence bisection; the truncation is
// doubled until every reported value moves by less than the tolerance.

#include <string>
#include <string_view>
#include <vector>

namespace bianchi::mathieu {

enum class SymmetryClass { even_cos_pi, odd_cos_2pi, odd_sin_2pi, even_sin_pi };

inline constexpr SymmetryClass kAllClasses[] = {
    SymmetryClass::even_cos_pi, SymmetryClass::odd_cos_2pi, SymmetryClass::odd_sin_2pi,
    SymmetryClass::even_sin_pi};

std::string_view to_string(SymmetryClass c);
bool is_cosine(SymmetryClass c);
/// Frequency of the r-th basis function of a block; also the order m of its
/// r-th eigenvalue (a_m or b_m).
int block_frequency(SymmetryClass c, int r);

struct MathieuEigenpair {
  int l = 0;  ///< global index in the ascending spectrum
  double lambda = 0.0;
  SymmetryClass symmetry_class = SymmetryClass::even_cos_pi;
  int order = 0;  ///< m of a_m / b_m
  double mu = 0.0;
  /// Coefficients in the block's orthonormal basis (unit Euclidean norm, so
  /// unit L^2(0, 2pi) norm). Empty when eigenvectors were not requested.
  std::vector<double> fourier_coeffs;

  /// "a3", "b1", ...
  std::string label() const;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  ///< size diag.size() - 1
};

Tridiagonal block_matrix(SymmetryClass c, double mu, int size);

/// Number of eigenvalues of t strictly below x.
int sturm_count(const Tridiagonal& t, double x);

/// Lowest `count` periodic eigenvalues, ascending.
/// Throws DomainError for non-finite mu, count < 1 or tol <= 0, and
/// ConvergenceError when the truncation cap (4096) is reached first.
std::vector<MathieuEigenpair> characteristic_values(double mu, int count, double tol = 1e-10,
                                                    bool eigenvectors = true);

/// All periodic eigenvalues <= lambda_max, ascending. Same error contract.
std::vector<MathieuEigenpair> characteristic_values_below(double mu, double lambda_max,
                                                          double tol = 1e-10,
                                                          bool eigenvectors = false);

/// phi_l(x) summed from its Fourier coefficients.
double eigenfunction_eval(const MathieuEigenpair& pair, double x);

enum class ChainPattern {
  alternating,  ///< a0 < b1 < a1 < b2 < a2 < b3 < a3 ...
  paired,       ///< a0 < a1 < b1 < b2 < a2 < a3 < b3 ...
  other
};

std::string_view to_string(ChainPattern p);

struct InterlacingReport {
  double mu = 0.0;
  std::vector<std::string> chain;
  std::vector<double> values;
  ChainPattern pattern = ChainPattern::other;
};

/// Label chain of the sorted spectrum. Throws DomainError for mu == 0.
InterlacingReport interlacing_report(double mu, int count);

/// The first `count` labels of the given pattern.
std::vector<std::string> pattern_chain(ChainPattern p, int count);

}  // namespace bianchi::mathieu
