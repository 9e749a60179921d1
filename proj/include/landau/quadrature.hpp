#pragma once

#include "landau/core.hpp"

namespace landau {

struct GaussRule {
  Vec nodes;
  Vec weights;
};

// ∫ f(x) e^{-x²} dx on ℝ.
GaussRule gauss_hermite(int n);
// ∫ f(x) dx on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);
// ∫ f(x) x^alpha e^{-x} dx on [0, ∞).
GaussRule gauss_laguerre(int n, double alpha);

// Tensor rule in dimension d; nodes are columns.
struct TensorRule {
  Mat nodes;
  Vec weights;
};

// Probability rule for the standard normal density (2π)^{-d/2} e^{-|w|²/2}.
TensorRule maxwellian_rule(int dim, int n);
// Probability rule for π^{-d/2} e^{-|x|²}.
TensorRule unit_gaussian_rule(int dim, int n);

}  // namespace landau
