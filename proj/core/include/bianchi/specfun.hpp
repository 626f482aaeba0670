#pragma once

// Complete elliptic integral of the first kind and Jacobi elliptic functions
// for a real modulus 0 <= k < 1.

namespace bianchi::specfun {

class EllipticModulus {
 public:
  /// Throws DomainError unless 0 <= k < 1.
  explicit EllipticModulus(double k);

  double k() const noexcept { return k_; }
  double m() const noexcept { return k_ * k_; }
  /// k' = sqrt(1 - k^2), computed without cancellation.
  double complementary() const noexcept;

 private:
  double k_;
};

/// Quarter period K(k) by the arithmetic-geometric mean.
double complete_elliptic_K(double k);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn evaluated together by the AGM with descending Landen
/// (Gauss) back-substitution. The argument is reduced modulo 4K first.
JacobiTriple jacobi_sn_cn_dn(double x, double k);

/// Carlson's symmetric integral R_F(x, y, z), duplication algorithm.
double carlson_rf(double x, double y, double z);

/// Incomplete integral of the first kind F(phi | k) for any real amplitude,
/// using F(phi + j*pi) = F(phi) + 2jK.
double incomplete_elliptic_F(double phi, double k);

/// Jacobi amplitude am(u, k), continuous and unbounded in u.
double jacobi_amplitude(double u, double k);

}  // namespace bianchi::specfun
