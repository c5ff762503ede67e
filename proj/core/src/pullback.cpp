#include "latlab/pullback.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/errors.hpp"

namespace latlab {

double pullback_radius_bound(const SemiflowParams& params, const MonotoneScalarFunction& f,
                             const ForcingModel& g, const LatticeWindow& v0) {
    double rate = params.rate(f);
    if (!(rate > 0.0)) throw ConfigError("pullback: lambda + alpha must be > 0");
    return norm(v0) + g.sup_norm() / rate + 1.0;
}

PullbackResult pullback_solution(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, double s, double horizon,
                                 const LatticeWindow& v0, const IntegratorConfig& config) {
    if (horizon < 0.0) throw ConfigError("pullback: horizon must be >= 0");
    double r0 = pullback_radius_bound(params, f, g, v0);
    double rate = params.rate(f);

    PullbackResult out;
    out.anchor_time = s;
    out.horizon = horizon;
    out.error_bound = std::exp(-rate * horizon) * r0;
    if (horizon == 0.0) {
        out.state = v0;
        out.provenance = "pullback T=0";
        return out;
    }
    TrajectorySample run = integrate(params, f, g, v0, s - horizon, s, config);
    out.state = run.final_state();
    out.provenance = run.provenance;
    return out;
}

double horizon_for_tolerance(const SemiflowParams& params, double alpha, double tol, double r0) {
    if (!(tol > 0.0)) throw ConfigError("horizon_for_tolerance: tol must be > 0");
    if (!(r0 > 0.0)) throw ConfigError("horizon_for_tolerance: R0 must be > 0");
    double rate = params.lambda + alpha;
    if (!(rate > 0.0)) throw ConfigError("horizon_for_tolerance: lambda + alpha must be > 0");
    return std::max(0.0, std::log(r0 / tol) / rate);
}

TrajectorySample ap_trajectory(const SemiflowParams& params, const MonotoneScalarFunction& f,
                               const ForcingModel& g, double s0, double s1,
                               const std::vector<double>& sample_times, double ap_tol,
                               const IntegratorConfig& config) {
    if (!(s1 > s0)) throw ConfigError("ap_trajectory: need s1 > s0");
    LatticeWindow seed = LatticeWindow::zeros(0, 1);
    double r0 = pullback_radius_bound(params, f, g, seed);
    double horizon = horizon_for_tolerance(params, f.alpha(), ap_tol, r0);
    PullbackResult anchor = pullback_solution(params, f, g, s0, horizon, seed, config);
    return integrate(params, f, g, anchor.state, s0, s1, config, sample_times);
}

TrajectorySample ap_trajectory(const SemiflowParams& params, const MonotoneScalarFunction& f,
                               const ForcingModel& g, double s0, double s1, double sample_step,
                               double ap_tol, const IntegratorConfig& config) {
    std::vector<double> samples;
    if (sample_step > 0.0) {
        long count = static_cast<long>(std::floor((s1 - s0) / sample_step + 1e-9));
        for (long k = 0; k <= count; ++k)
            samples.push_back(s0 + static_cast<double>(k) * sample_step);
        if (samples.back() < s1 - 1e-12 * std::max(1.0, std::abs(s1))) samples.push_back(s1);
    }
    return ap_trajectory(params, f, g, s0, s1, samples, ap_tol, config);
}

double section_consistency_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, const PullbackResult& at_s,
                                 const PullbackResult& at_s_plus_delta,
                                 const IntegratorConfig& config) {
    double delta = at_s_plus_delta.anchor_time - at_s.anchor_time;
    if (delta < 0.0) throw ConfigError("section_consistency_check: anchors out of order");
    if (delta == 0.0) return norm(subtract(at_s.state, at_s_plus_delta.state));
    TrajectorySample forward =
        integrate(params, f, g, at_s.state, at_s.anchor_time, at_s_plus_delta.anchor_time, config);
    return norm(subtract(forward.final_state(), at_s_plus_delta.state));
}

} // namespace latlab
