#pragma once

// Coefficient-array polynomial helpers. Coefficients are stored in ascending
// order: a(0) + a(1) z + ... + a(m) z^m.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace popuc {

template <typename Scalar>
using CoeffVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Coeffs = CoeffVector<double>;
using Complex = std::complex<double>;

/// Horner evaluation.
template <typename Derived>
typename Derived::Scalar horner(const Eigen::MatrixBase<Derived>& a, const typename Derived::Scalar& z) {
  using S = typename Derived::Scalar;
  S acc(0);
  for (Eigen::Index k = a.size() - 1; k >= 0; --k) acc = acc * z + a(k);
  return acc;
}

/// p(z) and p'(z) in one pass.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> horner_with_derivative(
    const Eigen::MatrixBase<Derived>& a, const typename Derived::Scalar& z) {
  using S = typename Derived::Scalar;
  S p(0), dp(0);
  for (Eigen::Index k = a.size() - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + a(k);
  }
  return {p, dp};
}

/// Reversed polynomial of formal degree m = size-1: b_k = conj(a_{m-k}).
template <typename Derived>
auto reversed_coeffs(const Eigen::MatrixBase<Derived>& a) {
  return a.reverse().conjugate().eval();
}

/// Quotient of p(z) / (z - r) by synthetic division; the remainder p(r) is
/// discarded.
template <typename Derived>
auto deflate(const Eigen::MatrixBase<Derived>& p, const typename Derived::Scalar& r) {
  using S = typename Derived::Scalar;
  const Eigen::Index m = p.size() - 1;
  if (m < 1) throw std::invalid_argument("deflate: polynomial must have degree >= 1");
  Eigen::Matrix<S, Eigen::Dynamic, 1> q(m);
  S acc = p(m);
  for (Eigen::Index k = m - 1; k >= 0; --k) {
    q(k) = acc;
    acc = p(k) + r * acc;
  }
  return q;
}

/// z * p(z).
template <typename Derived>
auto shift_up(const Eigen::MatrixBase<Derived>& p) {
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, 1> out(p.size() + 1);
  out(0) = S(0);
  out.tail(p.size()) = p;
  return out;
}

/// Sum of two coefficient vectors of possibly different length.
template <typename DerivedA, typename DerivedB>
auto poly_add(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using S = typename DerivedA::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, 1> out = Eigen::Matrix<S, Eigen::Dynamic, 1>::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += b;
  return out;
}

template <typename Derived>
typename Derived::RealScalar max_abs_coeff(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? typename Derived::RealScalar(0) : a.cwiseAbs().maxCoeff();
}

/// Monic polynomial: leading coefficient exactly 1.
class MonicPoly {
 public:
  MonicPoly() : c_(Coeffs::Ones(1)) {}
  /// Throws std::invalid_argument unless the last coefficient is exactly 1.
  explicit MonicPoly(Coeffs coeffs);
  /// Rescales so that the leading coefficient is 1.
  static MonicPoly normalized(const Coeffs& coeffs);
  static MonicPoly monomial(int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Coeffs& coeffs() const { return c_; }
  Complex operator()(Complex z) const { return horner(c_, z); }
  Complex operator[](int k) const { return c_(k); }

 private:
  Coeffs c_;
};

/// Q*(z) = z^m conj(Q(1/conj z)); generally not monic.
Coeffs reversed(const MonicPoly& q);

}  // namespace popuc
