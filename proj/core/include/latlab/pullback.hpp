#pragma once

#include <string>

#include "latlab/integrator.hpp"

namespace latlab {

/// Estimate of the invariant-section value at anchor time s, produced by
/// integrating forward from s - T. The contraction of the pull-back map makes
/// the estimate accurate to error_bound = e^{-(lambda+alpha) T} * R0 where R0
/// bounds the distance from the seed state to the section.
struct PullbackResult {
    double anchor_time = 0.0;
    double horizon = 0.0;
    LatticeWindow state;
    double error_bound = 0.0;
    std::string provenance;
};

/// Certified overestimate of ||v0 - section||: the section lies inside the
/// absorbing ball of radius M/(lambda+alpha), so ||v0|| + M/(lambda+alpha) + 1
/// works for any v0.
double pullback_radius_bound(const SemiflowParams& params, const MonotoneScalarFunction& f,
                             const ForcingModel& g, const LatticeWindow& v0);

/// Start at v0 at time s - T on the original forcing timeline, integrate to s,
/// return the terminal state. T = 0 returns v0 with error_bound = R0.
PullbackResult pullback_solution(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, double s, double horizon,
                                 const LatticeWindow& v0, const IntegratorConfig& config);

/// Smallest T with e^{-(lambda+alpha) T} R0 <= tol: max(0, ln(R0/tol)/(lambda+alpha)).
double horizon_for_tolerance(const SemiflowParams& params, double alpha, double tol, double r0);

/// The almost periodic solution sampled on [s0, s1]: one pull-back to s0 with
/// a horizon chosen for ap_tol, then a single forward sweep (invariance makes
/// the sweep exact up to integration error, so no per-sample pull-backs).
TrajectorySample ap_trajectory(const SemiflowParams& params, const MonotoneScalarFunction& f,
                               const ForcingModel& g, double s0, double s1, double sample_step,
                               double ap_tol, const IntegratorConfig& config);

/// Same, at explicit sample times within [s0, s1].
TrajectorySample ap_trajectory(const SemiflowParams& params, const MonotoneScalarFunction& f,
                               const ForcingModel& g, double s0, double s1,
                               const std::vector<double>& sample_times, double ap_tol,
                               const IntegratorConfig& config);

/// || phi(delta, state_s, f^s) - state_{s+delta} || for two pull-back results
/// anchored on the same forcing timeline; small defect corroborates that both
/// sit on one invariant section.
double section_consistency_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, const PullbackResult& at_s,
                                 const PullbackResult& at_s_plus_delta,
                                 const IntegratorConfig& config);

} // namespace latlab
