#pragma once

// Costly-state-verification contract with lognormal idiosyncratic returns,
// ln(omega) ~ N(-sigma^2/2, sigma^2) so that E[omega] = 1.

#include <cmath>
#include <numbers>

#include "spillover/error.hpp"

namespace spillover::dsge {

struct BggTerms {
  double F = 0;       // default probability P(omega < omega_bar)
  double G = 0;       // E[omega; omega < omega_bar]
  double Gamma = 0;   // lender's gross share before monitoring costs
  double dF = 0, dG = 0, dGamma = 0;  // derivatives in omega_bar

  /// Lender's net share Gamma - mu G.
  double net(double mu) const { return Gamma - mu * G; }
  double dnet(double mu) const { return dGamma - mu * dG; }
};

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

inline BggTerms bgg_contract(double omega_bar, double sigma) {
  if (!(omega_bar > 0.0) || !(sigma > 0.0)) throw DataError("bgg_contract needs omega_bar > 0 and sigma > 0");
  const double z = (std::log(omega_bar) + 0.5 * sigma * sigma) / sigma;
  BggTerms b;
  b.F = std_normal_cdf(z);
  b.G = std_normal_cdf(z - sigma);
  b.Gamma = b.G + omega_bar * (1.0 - b.F);
  b.dF = std_normal_pdf(z) / (omega_bar * sigma);
  b.dG = omega_bar * b.dF;
  b.dGamma = 1.0 - b.F;
  return b;
}

}  // namespace spillover::dsge
