#pragma once

#include <array>
#include <string>
#include <string_view>

#include "spillover/error.hpp"

namespace spillover::dsge {

/// Calibration of the small open economy. Defaults are the baseline
/// calibration; the seven estimated parameters start at the Chile
/// sign-restriction estimates. Entries without a published value are marked.
struct DsgeParams {
  // Households and firms
  double beta = 0.9902;
  double phi_labor = 2.0;  // inverse Frisch elasticity
  double gamma_ups = 100.0;
  double epsilon = 6.0;
  double eta_c = 1.05;
  double nu_i = 0.25;
  double omega_c = 0.30;  // import share in consumption
  double gamma_i = 0.70;  // domestic share in investment
  double alpha = 0.40;
  double delta = 0.02;
  double theta = 0.75;
  double eta_f = 1.50;
  double kappa = 2.188;

  // Exporters (not published)
  double theta_x = 0.75;
  double eta_x = 1.5;
  double gamma_x = 0.75;
  double epsilon_x = 6.0;

  // Entrepreneurs and banks. phi_debt is the peso share of bank funding.
  double phi_debt = 0.50;
  double mu = 0.25;
  double gamma_e = 0.90;  // survival rate, 1 - transfer share
  double sigma = 0.22;
  double w_e = 0.0145;  // entrepreneurial transfer (not published)

  // Policy
  double pi_bar = 1.0025;
  double r_pi = 1.5;
  double r_y = 0.005;
  double r_s = 0.02;
  double rho_r = 0.75;
  double sigma_r = 0.0025;  // domestic policy shock (not published)
  double rho_fx = 0.102;
  double theta_rstar = 0.041;
  double vartheta = 0.0;      // smoothing of the reserve target (not published)
  double upsilon_cb = 0.5;    // target ratio (not published)

  // Foreign block: row 1 = (a11, a12) loads lagged (y*, R*) into y*.
  double a11 = 0.942;
  double a12 = -0.908;
  double a21 = 0.015;
  double a22 = 0.955;
  double sigma_ystar = 0.01;
  double sigma_rstar = 0.0014;
  double c21 = 0.0;

  // Targets and trends
  double upsilon = 0.30;  // household dollar-deposit share target (not published)
  double g = 0.0;
  double yf_bar = 1.0;
  double s_bar = 1.0;
  double psi = 1.0;        // nominal depreciation trend
  double rstar_bar = 0.0;  // <= 0 means pi_f / beta

  double pi_f() const { return pi_bar / psi; }
  double rstar_ss() const { return rstar_bar > 0.0 ? rstar_bar : pi_f() / beta; }

  void validate() const;
};

struct ParamEntry {
  std::string_view name;
  double DsgeParams::*member;
};

inline constexpr std::array kParamTable{
    ParamEntry{"beta", &DsgeParams::beta},
    ParamEntry{"phi_labor", &DsgeParams::phi_labor},
    ParamEntry{"gamma_ups", &DsgeParams::gamma_ups},
    ParamEntry{"epsilon", &DsgeParams::epsilon},
    ParamEntry{"eta_c", &DsgeParams::eta_c},
    ParamEntry{"nu_i", &DsgeParams::nu_i},
    ParamEntry{"omega_c", &DsgeParams::omega_c},
    ParamEntry{"gamma_i", &DsgeParams::gamma_i},
    ParamEntry{"alpha", &DsgeParams::alpha},
    ParamEntry{"delta", &DsgeParams::delta},
    ParamEntry{"theta", &DsgeParams::theta},
    ParamEntry{"eta_f", &DsgeParams::eta_f},
    ParamEntry{"kappa", &DsgeParams::kappa},
    ParamEntry{"theta_x", &DsgeParams::theta_x},
    ParamEntry{"eta_x", &DsgeParams::eta_x},
    ParamEntry{"gamma_x", &DsgeParams::gamma_x},
    ParamEntry{"epsilon_x", &DsgeParams::epsilon_x},
    ParamEntry{"phi_debt", &DsgeParams::phi_debt},
    ParamEntry{"mu", &DsgeParams::mu},
    ParamEntry{"gamma_e", &DsgeParams::gamma_e},
    ParamEntry{"sigma", &DsgeParams::sigma},
    ParamEntry{"w_e", &DsgeParams::w_e},
    ParamEntry{"pi_bar", &DsgeParams::pi_bar},
    ParamEntry{"r_pi", &DsgeParams::r_pi},
    ParamEntry{"r_y", &DsgeParams::r_y},
    ParamEntry{"r_s", &DsgeParams::r_s},
    ParamEntry{"rho_r", &DsgeParams::rho_r},
    ParamEntry{"sigma_r", &DsgeParams::sigma_r},
    ParamEntry{"rho_fx", &DsgeParams::rho_fx},
    ParamEntry{"theta_rstar", &DsgeParams::theta_rstar},
    ParamEntry{"vartheta", &DsgeParams::vartheta},
    ParamEntry{"upsilon_cb", &DsgeParams::upsilon_cb},
    ParamEntry{"a11", &DsgeParams::a11},
    ParamEntry{"a12", &DsgeParams::a12},
    ParamEntry{"a21", &DsgeParams::a21},
    ParamEntry{"a22", &DsgeParams::a22},
    ParamEntry{"sigma_ystar", &DsgeParams::sigma_ystar},
    ParamEntry{"sigma_rstar", &DsgeParams::sigma_rstar},
    ParamEntry{"c21", &DsgeParams::c21},
    ParamEntry{"upsilon", &DsgeParams::upsilon},
    ParamEntry{"g", &DsgeParams::g},
    ParamEntry{"yf_bar", &DsgeParams::yf_bar},
    ParamEntry{"s_bar", &DsgeParams::s_bar},
    ParamEntry{"psi", &DsgeParams::psi},
    ParamEntry{"rstar_bar", &DsgeParams::rstar_bar},
};

inline double& param_ref(DsgeParams& p, std::string_view name) {
  for (const auto& e : kParamTable)
    if (e.name == name) return p.*(e.member);
  throw DataError("unknown model parameter '" + std::string(name) + "'");
}

inline double param_value(const DsgeParams& p, std::string_view name) {
  return param_ref(const_cast<DsgeParams&>(p), name);
}

inline void DsgeParams::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("invalid calibration: ") + what);
  };
  need(beta > 0 && beta < 1, "beta must lie in (0,1)");
  need(delta > 0 && delta <= 1, "delta must lie in (0,1]");
  need(theta >= 0 && theta < 1, "theta must lie in [0,1)");
  need(theta_x >= 0 && theta_x < 1, "theta_x must lie in [0,1)");
  need(epsilon > 1 && epsilon_x > 1, "demand elasticities epsilon, epsilon_x must exceed 1");
  need(sigma > 0, "sigma must be positive");
  need(mu >= 0 && mu < 1, "mu must lie in [0,1)");
  need(omega_c > 0 && omega_c < 1, "omega_c must lie in (0,1)");
  need(gamma_i > 0 && gamma_i < 1, "gamma_i must lie in (0,1)");
  need(gamma_x > 0 && gamma_x < 1, "gamma_x must lie in (0,1)");
  need(alpha > 0 && alpha < 1, "alpha must lie in (0,1)");
  need(gamma_e > 0 && gamma_e < 1, "gamma_e must lie in (0,1)");
  need(phi_debt >= 0 && phi_debt <= 1, "phi_debt must lie in [0,1]");
  need(kappa >= 0, "kappa must be non-negative");
  need(vartheta >= 0 && vartheta < 1, "vartheta must lie in [0,1)");
  need(upsilon > 0 && upsilon < 1, "upsilon must lie in (0,1)");
  need(upsilon_cb > 0, "upsilon_cb must be positive");
  need(eta_c > 0 && eta_c != 1 && nu_i > 0 && nu_i != 1 && eta_x > 0 && eta_x != 1,
       "CES elasticities must be positive and different from 1");
  need(pi_bar > 0 && psi > 0 && yf_bar > 0 && s_bar > 0, "trend targets must be positive");
  need(sigma_rstar >= 0 && sigma_ystar >= 0 && sigma_r >= 0, "shock scales must be non-negative");
  need(w_e >= 0, "w_e must be non-negative");
  need(g >= 0, "g must be non-negative");
}

}  // namespace spillover::dsge
