#include "popuc/opuc.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <string>

#include "popuc/error.hpp"

namespace popuc {

MonicPoly::MonicPoly(Coeffs coeffs) : c_(std::move(coeffs)) {
  if (c_.size() == 0 || c_(c_.size() - 1) != Complex(1.0, 0.0))
    throw ValidationError("MonicPoly: leading coefficient must be exactly 1");
}

MonicPoly MonicPoly::normalized(const Coeffs& coeffs) {
  if (coeffs.size() == 0 || coeffs(coeffs.size() - 1) == Complex(0.0))
    throw ValidationError("MonicPoly::normalized: zero leading coefficient");
  Coeffs c = coeffs / coeffs(coeffs.size() - 1);
  c(c.size() - 1) = 1.0;
  return MonicPoly(std::move(c));
}

MonicPoly MonicPoly::monomial(int degree) {
  Coeffs c = Coeffs::Zero(degree + 1);
  c(degree) = 1.0;
  return MonicPoly(std::move(c));
}

Coeffs reversed(const MonicPoly& q) { return reversed_coeffs(q.coeffs()); }

void check_inner_product_order(Eigen::Index p_size, Eigen::Index q_size, const MomentSequence& ms) {
  const Eigen::Index needed = std::max(p_size, q_size) - 1;
  if (needed > ms.order())
    throw ValidationError("inner product needs moments of order " + std::to_string(needed) +
                          ", have " + std::to_string(ms.order()));
}

Complex inner_product(const MonicPoly& p, const MonicPoly& q, const MomentSequence& ms) {
  return inner_product(p.coeffs(), q.coeffs(), ms);
}

OpucFamily gram_opuc(const MomentSequence& ms, int n) {
  if (n < 0) throw ValidationError("OPUC degree must be nonnegative");
  if (ms.order() < n)
    throw ValidationError("gram_opuc(" + std::to_string(n) + ") needs moments up to order " + std::to_string(n));
  const double c0 = ms.total_mass();
  if (!(c0 > 0.0)) throw DegenerateMeasureError("total mass vanishes", 0);

  OpucFamily fam;
  fam.q.push_back(MonicPoly::monomial(0));
  fam.kappa.push_back(c0);

  for (int k = 1; k <= n; ++k) {
    Eigen::MatrixXcd T(k, k);
    Eigen::VectorXcd rhs(k);
    for (int m = 0; m < k; ++m) {
      for (int j = 0; j < k; ++j) T(m, j) = ms(m - j);
      rhs(m) = -ms(m - k);
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(T);
    Coeffs a(k + 1);
    a.head(k) = lu.solve(rhs);
    a(k) = 1.0;
    MonicPoly qk(std::move(a));
    // <Q_k, Q_k> = <Q_k, z^k> by orthogonality; this is the last pivot of T_{k+1}.
    Complex pivot = 0.0;
    for (int j = 0; j <= k; ++j) pivot += qk[j] * ms(k - j);
    const double kappa = pivot.real();
    if (!(kappa > kDegeneracyThreshold * c0)) {
      throw DegenerateMeasureError("moment matrix is singular at degree " + std::to_string(k) +
                                       " (finite support exhausted)",
                                   k);
    }
    fam.alpha.push_back(-std::conj(qk[0]));
    fam.q.push_back(std::move(qk));
    fam.kappa.push_back(kappa);
  }
  return fam;
}

}  // namespace popuc
