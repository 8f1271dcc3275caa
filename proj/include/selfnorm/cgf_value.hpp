#pragma once

namespace selfnorm {

/// K(s,t) = ln E exp(sX + tX^2) with gradient and Hessian at one tilt point.
///
/// K_s, K_t are the tilted means of X and X^2; K_ss, K_st, K_tt form the
/// tilted covariance matrix of (X, X^2).
struct CgfValue {
  double K = 0.0;
  double K_s = 0.0;
  double K_t = 0.0;
  double K_ss = 0.0;
  double K_st = 0.0;
  double K_tt = 0.0;
  /// det of the Hessian, K_ss K_tt - K_st^2, formed from central moments so the
  /// location terms cancel exactly.
  double delta_det = 0.0;
  double quadrature_error = 0.0;
};

}  // namespace selfnorm
