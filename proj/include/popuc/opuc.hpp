#pragma once

#include <vector>

#include "popuc/measure.hpp"
#include "popuc/poly.hpp"

namespace popuc {

/// Monic OPUC Q_0..Q_n with squared norms and Verblunsky coefficients.
struct OpucFamily {
  std::vector<MonicPoly> q;
  std::vector<double> kappa;   ///< <Q_k, Q_k>
  std::vector<Complex> alpha;  ///< alpha_k = -conj(Q_{k+1}(0)), k < n

  int degree() const { return static_cast<int>(q.size()) - 1; }
  const MonicPoly& top() const { return q.back(); }
};

/// Relative pivot below which the moment matrix counts as singular.
constexpr double kDegeneracyThreshold = 1e-12;

/// Solves the dense Toeplitz system [c_{m-j}] a = -[c_{m-k}] for every k <= n.
/// Throws DegenerateMeasureError once <Q_k, Q_k> <= 1e-12 c_0.
OpucFamily gram_opuc(const MomentSequence& ms, int n);

/// sum_{j,k} p_j conj(q_k) c_{k-j}. Throws ValidationError when
/// deg p + deg q exceeds the moment order.
template <typename DerivedP, typename DerivedQ>
Complex inner_product(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                      const MomentSequence& ms);

Complex inner_product(const MonicPoly& p, const MonicPoly& q, const MomentSequence& ms);

void check_inner_product_order(Eigen::Index p_size, Eigen::Index q_size, const MomentSequence& ms);

template <typename DerivedP, typename DerivedQ>
Complex inner_product(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                      const MomentSequence& ms) {
  check_inner_product_order(p.size(), q.size(), ms);
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p(j) == Complex(0.0)) continue;
    Complex row = 0.0;
    for (Eigen::Index k = 0; k < q.size(); ++k) row += std::conj(q(k)) * ms(static_cast<int>(k - j));
    acc += p(j) * row;
  }
  return acc;
}

}  // namespace popuc
