#include "toric/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace toric {

GramMatrix2 h_to_gram(const HPoint& h) {
  if (!(h.X > 0.0)) throw Error(ErrorCode::Domain, "H point requires X > 0");
  const auto m = h_to_gram<double>(h);
  return {m[0][0], m[0][1], m[1][1]};
}

HPoint gram_to_h(const GramMatrix2& n) {
  const double scale = std::max({std::abs(n.g11), std::abs(n.g12), std::abs(n.g22), 1.0});
  if (!(n.g22 > 0.0) || std::abs(n.det() - 1.0) > 1e-12 * scale * scale)
    throw Error(ErrorCode::Normalization, "Gram matrix is not unit-determinant positive definite");
  return {1.0 / n.g22, n.g12 / n.g22};
}

void check_phi_parameters(double sigma, double tau) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParameter, "sigma must be positive");
  if (!(tau < 1.0)) throw Error(ErrorCode::InvalidParameter, "tau must be below 1");
}

double tangency_parameters(double tau) {
  if (!(tau < 1.0)) throw Error(ErrorCode::InvalidParameter, "tau must be below 1");
  return 1.0 - 1.0 / (1.0 - tau);
}

}  // namespace toric
