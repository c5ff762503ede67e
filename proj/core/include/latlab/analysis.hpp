#pragma once

#include <optional>
#include <vector>

#include "latlab/integrator.hpp"

namespace latlab {

/// Least-squares slope of log(norms) against times. Samples after the first
/// one whose norm drops to <= floor are discarded (integrator noise floor);
/// throws ConfigError if fewer than two samples survive or a surviving norm
/// is not positive.
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms,
                      double floor);

/// Convenience: norms of state differences are the usual input.
double fit_decay_rate(const TrajectorySample& norm_series, double floor);

struct AbsorbingReport {
    std::optional<double> entered_at; ///< first sample time with ||u|| <= radius
    bool stays = false;               ///< all later samples <= radius * (1 + 1e-6)
};

AbsorbingReport absorbing_ball_check(const TrajectorySample& traj, double radius);

/// Scan result: every tau on the grid whose sup-defect over the overlapped
/// samples is < epsilon, the defect per accepted tau, and the largest gap
/// between consecutive accepted tau (range endpoints 0 and tau_max included).
struct AlmostPeriodReport {
    double epsilon = 0.0;
    double tau_max = 0.0;
    double grid_step = 0.0;
    double scan_begin = 0.0, scan_end = 0.0;
    std::vector<double> taus;
    std::vector<double> sup_defects;
    double max_gap = 0.0;
};

/// Sampled Bohr criterion: tau = k * grid accepted iff
/// max_j ||u(t_j + tau) - u(t_j)|| < epsilon over the overlap. The trajectory
/// must be uniformly sampled and at least 4 * tau_max long. all_defects, when
/// given, receives (tau, defect) for every scanned tau. threads > 1 splits the
/// tau grid; results are identical for any thread count.
AlmostPeriodReport almost_period_scan(const TrajectorySample& traj, double epsilon,
                                      double tau_max,
                                      std::vector<std::pair<double, double>>* all_defects = nullptr,
                                      unsigned threads = 1);

/// sup over L in L_grid of min(max_{t <= L} ||f1(t) - f2(t)||, 1/L) with the
/// sample start anchored at t = 0 (one-sided convention for simulated data).
/// Trajectories must share their time grid.
double bebutov_distance(const TrajectorySample& a, const TrajectorySample& b,
                        const std::vector<double>& l_grid);

/// Default L grid: every positive time offset present in the data.
double bebutov_distance(const TrajectorySample& a, const TrajectorySample& b);

/// Final gap ||phi(t_end, v1, g) - phi(t_end, v2, g)|| via one joint
/// integration (shared step sequence). Requires v1 != v2.
double attractor_singleton_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, const LatticeWindow& v1,
                                 const LatticeWindow& v2, double t_end,
                                 const IntegratorConfig& config);

} // namespace latlab
