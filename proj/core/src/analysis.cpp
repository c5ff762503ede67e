#include "latlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "latlab/errors.hpp"

namespace latlab {

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms,
                      double floor) {
    if (times.size() != norms.size()) throw ConfigError("fit_decay_rate: length mismatch");
    std::size_t n = 0;
    while (n < norms.size() && norms[n] > floor) ++n;
    if (n < 2) throw ConfigError("fit_decay_rate: empty fit range after truncation");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(norms[i] > 0.0)) throw ConfigError("fit_decay_rate: nonpositive norm in fit range");
    }
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tbar += times[i];
        ybar += std::log(norms[i]);
    }
    tbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dt = times[i] - tbar;
        sxy += dt * (std::log(norms[i]) - ybar);
        sxx += dt * dt;
    }
    if (sxx == 0.0) throw ConfigError("fit_decay_rate: degenerate time grid");
    return sxy / sxx;
}

double fit_decay_rate(const TrajectorySample& norm_series, double floor) {
    return fit_decay_rate(norm_series.times, norm_series.norms(), floor);
}

AbsorbingReport absorbing_ball_check(const TrajectorySample& traj, double radius) {
    AbsorbingReport report;
    std::vector<double> norms = traj.norms();
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] <= radius) {
            report.entered_at = traj.times[i];
            report.stays = true;
            for (std::size_t j = i + 1; j < norms.size(); ++j) {
                if (norms[j] > radius * (1.0 + 1e-6)) {
                    report.stays = false;
                    break;
                }
            }
            break;
        }
    }
    return report;
}

namespace {

void require_uniform_grid(const TrajectorySample& traj, double& step) {
    if (traj.times.size() < 2) throw ConfigError("scan: need at least two samples");
    step = traj.times[1] - traj.times[0];
    if (!(step > 0.0)) throw ConfigError("scan: times must be strictly increasing");
    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        double d = traj.times[i + 1] - traj.times[i];
        if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw ConfigError("scan: trajectory must be uniformly sampled");
    }
}

} // namespace

AlmostPeriodReport almost_period_scan(const TrajectorySample& traj, double epsilon,
                                      double tau_max,
                                      std::vector<std::pair<double, double>>* all_defects,
                                      unsigned threads) {
    if (!(epsilon > 0.0)) throw ConfigError("almost_period_scan: epsilon must be > 0");
    if (!(tau_max > 0.0)) throw ConfigError("almost_period_scan: tau_max must be > 0");
    double step = 0.0;
    require_uniform_grid(traj, step);
    const double total = traj.times.back() - traj.times.front();
    if (total < 4.0 * tau_max)
        throw ConfigError("almost_period_scan: trajectory too short for requested tau_max "
                          "(need length >= 4 * tau_max)");

    const std::size_t nsamp = traj.states.size();
    const long kmax = static_cast<long>(std::floor(tau_max / step + 1e-9));
    std::vector<double> defects(static_cast<std::size_t>(kmax) + 1, 0.0);

    // flatten to one contiguous (sample x site) buffer; the tau loop then runs
    // on raw doubles instead of allocating a difference window per comparison
    long lo = traj.states.front().first_site(), hi = traj.states.front().last_site();
    for (const auto& s : traj.states) {
        lo = std::min(lo, s.first_site());
        hi = std::max(hi, s.last_site());
    }
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> flat(nsamp * width, 0.0);
    for (std::size_t j = 0; j < nsamp; ++j)
        for (long i = lo; i <= hi; ++i)
            flat[j * width + static_cast<std::size_t>(i - lo)] = traj.states[j].at_site(i);

    auto scan_range = [&](long klo, long khi) {
        for (long k = klo; k < khi; ++k) {
            double sup2 = 0.0;
            const std::size_t shift = static_cast<std::size_t>(k) * width;
            for (std::size_t j = 0; j + static_cast<std::size_t>(k) < nsamp; ++j) {
                const double* a = &flat[j * width + shift];
                const double* b = &flat[j * width];
                double acc = 0.0;
                for (std::size_t i = 0; i < width; ++i) {
                    double d = a[i] - b[i];
                    acc += d * d;
                }
                sup2 = std::max(sup2, acc);
            }
            defects[static_cast<std::size_t>(k)] = std::sqrt(sup2);
        }
    };

    if (threads <= 1 || kmax < 64) {
        scan_range(0, kmax + 1);
    } else {
        unsigned nt = std::min<unsigned>(threads, 64);
        std::vector<std::thread> pool;
        long chunk = (kmax + 1 + static_cast<long>(nt) - 1) / static_cast<long>(nt);
        for (unsigned w = 0; w < nt; ++w) {
            long lo = static_cast<long>(w) * chunk;
            long hi = std::min<long>(lo + chunk, kmax + 1);
            if (lo >= hi) break;
            pool.emplace_back(scan_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    AlmostPeriodReport report;
    report.epsilon = epsilon;
    report.tau_max = tau_max;
    report.grid_step = step;
    report.scan_begin = traj.times.front();
    report.scan_end = traj.times.back();
    for (long k = 0; k <= kmax; ++k) {
        double tau = static_cast<double>(k) * step;
        double d = defects[static_cast<std::size_t>(k)];
        if (all_defects) all_defects->emplace_back(tau, d);
        if (d < epsilon) {
            report.taus.push_back(tau);
            report.sup_defects.push_back(d);
        }
    }

    double gap = 0.0, prev = 0.0;
    for (double tau : report.taus) {
        gap = std::max(gap, tau - prev);
        prev = tau;
    }
    gap = std::max(gap, tau_max - prev);
    report.max_gap = gap;
    return report;
}

namespace {

void require_same_grid(const TrajectorySample& a, const TrajectorySample& b) {
    if (a.times.size() != b.times.size())
        throw ConfigError("bebutov_distance: trajectories must share the sample grid");
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i])))
            throw ConfigError("bebutov_distance: trajectories must share the sample grid");
    }
}

} // namespace

double bebutov_distance(const TrajectorySample& a, const TrajectorySample& b,
                        const std::vector<double>& l_grid) {
    require_same_grid(a, b);
    const double t0 = a.times.front();
    std::vector<double> offsets(a.times.size());
    std::vector<double> prefix(a.times.size());
    double run = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        offsets[i] = a.times[i] - t0;
        run = std::max(run, norm(subtract(a.states[i], b.states[i])));
        prefix[i] = run;
    }
    double best = 0.0;
    for (double l : l_grid) {
        if (!(l > 0.0)) throw ConfigError("bebutov_distance: L values must be > 0");
        // largest sample offset <= L
        auto it = std::upper_bound(offsets.begin(), offsets.end(), l + 1e-12);
        double pm = (it == offsets.begin()) ? prefix.front() : prefix[static_cast<std::size_t>(it - offsets.begin() - 1)];
        best = std::max(best, std::min(pm, 1.0 / l));
    }
    return best;
}

double bebutov_distance(const TrajectorySample& a, const TrajectorySample& b) {
    require_same_grid(a, b);
    std::vector<double> grid;
    const double t0 = a.times.front();
    for (std::size_t i = 1; i < a.times.size(); ++i) grid.push_back(a.times[i] - t0);
    if (grid.empty()) grid.push_back(1.0);
    return bebutov_distance(a, b, grid);
}

double attractor_singleton_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                 const ForcingModel& g, const LatticeWindow& v1,
                                 const LatticeWindow& v2, double t_end,
                                 const IntegratorConfig& config) {
    if (v1 == v2)
        throw ConfigError("attractor_singleton_check: initial states must differ");
    auto runs = integrate_joint(params, f, g, {v1, v2},
                                {config.window_halfwidth, config.window_halfwidth}, 0.0, t_end,
                                config, {});
    return norm(subtract(runs[0].final_state(), runs[1].final_state()));
}

} // namespace latlab
