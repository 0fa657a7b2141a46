#pragma once

// Expected collective signal from a PPP of transmitters, split into the
// nearest transmitter's contribution and everyone else's.
//
// All integrals run from r_r to infinity regardless of the scenario's
// placement radius; see truncation_tail() for the part a finite R omits.

#include "molcomm/core.hpp"
#include "molcomm/curve.hpp"
#include "molcomm/numerics.hpp"

namespace molcomm::expectation {

enum class Method { ClosedForm, Quadrature };

struct ExpectationBreakdown {
  double e_nearest = 0.0;
  double e_interferers = 0.0;
  double e_all = 0.0;
  Method method = Method::Quadrature;
};

struct EngineOptions {
  numerics::QuadratureOptions quadrature{1e-9, 1e-12, 4000};
  unsigned threads = 0;
};

// --- fully absorbing receiver ---------------------------------------------

/// N_tx * int_{r_r}^inf F_FA(x, t) f_nearest(x) dx
double e_nearest_fa(const Scenario& s, double t, const EngineOptions& opts = {});

/// N_tx (4 pi lambda_a)^2 int_{r_r}^inf [int_x^inf F_FA(r, t) r^2 dr] x^2 exp(-lambda_a V(x)) dx
/// with V(x) = (4/3) pi (x^3 - r_r^3).
double e_interferers_fa(const Scenario& s, double t, const EngineOptions& opts = {});

/// Closed form 4 N_tx sqrt(pi) lambda_a r_r [D sqrt(pi) t + 2 r_r sqrt(D t)].
double e_all_fa_closed(const Scenario& s, double t);

/// Closed-form net absorption over [t, t + t_ss].
double e_all_fa_net(const Scenario& s, double t, double t_ss);

// --- passive receiver -------------------------------------------------------

double e_nearest_ps(const Scenario& s, double t, const EngineOptions& opts = {});
double e_interferers_ps(const Scenario& s, double t, const EngineOptions& opts = {});

/// 4 pi N_tx lambda_a int_{r_r}^inf F_PS(r, t) r^2 dr
double e_all_ps(const Scenario& s, double t, const EngineOptions& opts = {});

/// e_all_ps(t + t_ss) - e_all_ps(t)
double e_all_ps_net(const Scenario& s, double t, double t_ss, const EngineOptions& opts = {});

// --- receiver-generic helpers ---------------------------------------------

/// Campbell integral 4 pi N_tx lambda_a int_{r_r}^inf F(x, t) x^2 dx for the
/// scenario's receiver kind. For the absorbing receiver this is the
/// quadrature counterpart of e_all_fa_closed.
double e_all_by_quadrature(const Scenario& s, double t, const EngineOptions& opts = {});

/// Part of the Campbell integral from transmitters beyond `big_r`:
/// 4 pi N_tx lambda_a int_R^inf F(x, t) x^2 dx. Zero for infinite R.
double truncation_tail(const Scenario& s, double big_r, double t, const EngineOptions& opts = {});

/// Nearest / interferer / total at time t for the scenario's receiver.
ExpectationBreakdown breakdown(const Scenario& s, double t, const EngineOptions& opts = {});

/// Level and net-change curve over the scenario's sampling grid. Net changes
/// of the absorbing total use the closed-form interval expression; the others
/// are differences of levels.
SignalCurve analytic_curve(const Scenario& s, Component component, const EngineOptions& opts = {});

}  // namespace molcomm::expectation
