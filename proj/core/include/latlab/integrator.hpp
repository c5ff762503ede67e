#pragma once

#include <string>
#include <vector>

#include "latlab/forcing.hpp"
#include "latlab/nonlinearity.hpp"
#include "latlab/window.hpp"

namespace latlab {

/// Coefficients of u' = nu * Lap(u) - lambda * u + F(u) + f(t).
struct SemiflowParams {
    double nu = 1.0;     ///< diffusive coupling, >= 0
    double lambda = 1.0; ///< linear decay; integration requires > 0

    void validate() const;
    double rate(const MonotoneScalarFunction& f) const { return lambda + f.alpha(); }
};

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 1.0;     ///< user cap; the stability cap may be tighter
    double initial_step = 1e-3;
    long window_halfwidth = 32;

    void validate() const;
};

/// Sampled trajectory: strictly increasing times, one state per time, all
/// states on the same truncation window.
struct TrajectorySample {
    std::vector<double> times;
    std::vector<LatticeWindow> states;
    std::string provenance;

    double final_time() const { return times.back(); }
    const LatticeWindow& final_state() const { return states.back(); }
    std::vector<double> norms() const;
};

/// nu*Lap(u) - lambda*u + F(u) + g(t), clipped to u's own window (sites the
/// window does not store stay pinned at zero).
LatticeWindow rhs(const SemiflowParams& params, const MonotoneScalarFunction& f,
                  const ForcingModel& g, double t, const LatticeWindow& u);

/// Integrate from v0 at t0 to t1 on the fixed window [-W, W],
/// W = config.window_halfwidth, recording dense-output states at the given
/// sample times (must be nondecreasing within [t0, t1]; empty means
/// endpoints only).
///
/// Embedded Dormand-Prince 5(4) pair, PI step control, 4th-order dense output.
/// The step size is additionally capped at 1/(4 nu + lambda + Lip_B) where
/// B = 2 (M / (lambda + alpha) + ||v0||); a run whose state leaves [-B, B]
/// componentwise aborts with NumericalError since the Lipschitz budget no
/// longer certifies the step cap.
TrajectorySample integrate(const SemiflowParams& params, const MonotoneScalarFunction& f,
                           const ForcingModel& g, const LatticeWindow& v0, double t0,
                           double t1, const IntegratorConfig& config,
                           const std::vector<double>& sample_times);

/// Uniform sampling every sample_step (0 = endpoints only).
TrajectorySample integrate(const SemiflowParams& params, const MonotoneScalarFunction& f,
                           const ForcingModel& g, const LatticeWindow& v0, double t0,
                           double t1, const IntegratorConfig& config,
                           double sample_step = 0.0);

/// Advance several states under the same equation with ONE shared adaptive
/// step sequence (error-controlled over the stacked system). Block b lives on
/// window [-halfwidths[b], halfwidths[b]]. Differences between blocks then
/// measure the flow, not discretization jitter: two independent adaptive runs
/// differ by integration noise that swamps quantities like e^{-2t}||v2-v1||.
std::vector<TrajectorySample> integrate_joint(
    const SemiflowParams& params, const MonotoneScalarFunction& f, const ForcingModel& g,
    const std::vector<LatticeWindow>& v0s, const std::vector<long>& halfwidths, double t0,
    double t1, const IntegratorConfig& config, const std::vector<double>& sample_times);

/// || phi(t+tau, v0, g) - phi(t, phi(tau, v0, g), g^tau) ||, the defect of the
/// cocycle composition law measured through two independent integrations.
double cocycle_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                     const ForcingModel& g, const LatticeWindow& v0, double t, double tau,
                     const IntegratorConfig& config);

/// Truncation-error probe: advance the same data on windows n and 2n (shared
/// steps) and return the final-state gap. v0 must be supported in [-n, n].
double window_convergence_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                const ForcingModel& g, const LatticeWindow& v0, double t1,
                                const IntegratorConfig& config, long halfwidth_n);

} // namespace latlab
