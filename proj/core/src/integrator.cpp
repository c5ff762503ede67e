#include "latlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "latlab/errors.hpp"

namespace latlab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense-output weights (4th-order interpolant).
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

// Lattice equation on a stack of fixed truncation windows sharing one clock.
struct FlatSystem {
    const SemiflowParams& params;
    const MonotoneScalarFunction& f;
    const ForcingModel& g;
    std::vector<long> halfwidths;
    std::vector<std::size_t> begin; // block offsets into the flat vector
    std::size_t dim = 0;

    FlatSystem(const SemiflowParams& p, const MonotoneScalarFunction& fn,
               const ForcingModel& gm, std::vector<long> hws)
        : params(p), f(fn), g(gm), halfwidths(std::move(hws)) {
        begin.reserve(halfwidths.size() + 1);
        for (long hw : halfwidths) {
            if (hw < 0) throw ConfigError("integrator: window halfwidth must be >= 0");
            begin.push_back(dim);
            dim += static_cast<std::size_t>(2 * hw + 1);
        }
        begin.push_back(dim);
    }

    void eval(double t, const std::vector<double>& y, std::vector<double>& dy) const {
        for (std::size_t b = 0; b < halfwidths.size(); ++b) {
            const long w = halfwidths[b];
            const std::size_t s = begin[b];
            const std::size_t n = static_cast<std::size_t>(2 * w + 1);
            std::span<const double> u(&y[s], n);
            std::span<double> d(&dy[s], n);
            f.apply(u, d);
            const double nu = params.nu, lambda = params.lambda;
            for (std::size_t j = 0; j < n; ++j) {
                double left = (j > 0) ? u[j - 1] : 0.0;
                double right = (j + 1 < n) ? u[j + 1] : 0.0;
                d[j] += nu * (left - 2.0 * u[j] + right) - lambda * u[j];
            }
            g.add_eval(t, -w, w, d);
        }
    }

    LatticeWindow block_window(const std::vector<double>& y, std::size_t b) const {
        const long w = halfwidths[b];
        std::vector<double> vals(y.begin() + static_cast<long>(begin[b]),
                                 y.begin() + static_cast<long>(begin[b + 1]));
        return LatticeWindow(-w, std::move(vals));
    }
};

double max_abs(const std::vector<double>& y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const std::vector<double>& y) {
    for (double v : y) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

struct DenseStep {
    double t = 0.0, h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;

    void build(double t0, double h0, const std::vector<double>& y,
               const std::vector<double>& ynew, const std::vector<double>& k1,
               const std::vector<double>& k3, const std::vector<double>& k4,
               const std::vector<double>& k5, const std::vector<double>& k6,
               const std::vector<double>& k7) {
        t = t0;
        h = h0;
        std::size_t n = y.size();
        r1.resize(n); r2.resize(n); r3.resize(n); r4.resize(n); r5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ydiff = ynew[i] - y[i];
            double bspl = h * k1[i] - ydiff;
            r1[i] = y[i];
            r2[i] = ydiff;
            r3[i] = bspl;
            r4[i] = ydiff - h * k7[i] - bspl;
            r5[i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                         kD6 * k6[i] + kD7 * k7[i]);
        }
    }

    void eval(double s, std::vector<double>& out) const {
        double theta = (s - t) / h;
        theta = std::clamp(theta, 0.0, 1.0);
        double theta1 = 1.0 - theta;
        std::size_t n = r1.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }
};

std::string run_provenance(const SemiflowParams& p, const MonotoneScalarFunction& f,
                           const ForcingModel& g) {
    std::ostringstream os;
    os << "nu=" << p.nu << ";lambda=" << p.lambda << ";F=" << f.descriptor()
       << ";M=" << g.sup_norm();
    return os.str();
}

// Advances the flat system, emitting dense-output samples through `emit`.
void drive(const FlatSystem& sys, const IntegratorConfig& cfg, double state_bound,
           double hmax, double t0, double t1, std::vector<double> y,
           const std::vector<double>& sample_times,
           const std::function<void(double, const std::vector<double>&)>& emit) {
    std::size_t si = 0;
    auto emit_pending_at_start = [&](double t) {
        while (si < sample_times.size() && sample_times[si] <= t + 1e-14 * std::max(1.0, std::abs(t))) {
            emit(sample_times[si], y);
            ++si;
        }
    };
    emit_pending_at_start(t0);
    if (t1 <= t0) {
        while (si < sample_times.size()) { emit(sample_times[si], y); ++si; }
        return;
    }

    const std::size_t n = sys.dim;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), interp;
    DenseStep dense;

    double t = t0;
    double h = std::min({cfg.initial_step, hmax, t1 - t0});
    double facold = 1e-4;
    const double safe = 0.9, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    bool last = false, rejected = false;
    long accepted = 0, total = 0;

    sys.eval(t, y, k1);

    while (!last) {
        if (++total > 20'000'000)
            throw NumericalError("integrate: step budget exhausted (t = " + std::to_string(t) + ")");
        double hmin = 1e-14 * std::max(1.0, std::abs(t));
        if (h < hmin)
            throw NumericalError("integrate: step size underflow at t = " + std::to_string(t) +
                                 " (stiffness beyond the explicit-method budget)");
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        sys.eval(t + kC2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        sys.eval(t + kC3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        sys.eval(t + kC4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        sys.eval(t + kC5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                                  kA65 * k5[i]);
        sys.eval(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                  kA76 * k6[i]);
        sys.eval(t + h, ynew, k7);

        double err2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                            kE6 * k6[i] + kE7 * k7[i]);
            double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double q = e / sc;
            err2 += q * q;
        }
        double err = std::sqrt(err2 / static_cast<double>(n));

        if (!std::isfinite(err) || !all_finite(ynew)) {
            h *= 0.5;
            last = false;
            rejected = true;
            continue;
        }

        double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            // accept
            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(0.2, std::min(5.0, safe / fac)); // step ratio kept in [1/5, 5]

            dense.build(t, h, y, ynew, k1, k3, k4, k5, k6, k7);
            double t_new = t + h;
            while (si < sample_times.size() && sample_times[si] <= t_new + 1e-9 * h) {
                double s = sample_times[si];
                if (s >= t_new - 1e-9 * h) {
                    emit(s, ynew);
                } else {
                    dense.eval(s, interp);
                    emit(s, interp);
                }
                ++si;
            }

            y.swap(ynew);
            k1.swap(k7); // FSAL
            t = t_new;
            ++accepted;

            if (state_bound > 0.0 && max_abs(y) > state_bound) {
                std::ostringstream os;
                os << "integrate: state exceeded the certified Lipschitz radius B = "
                   << state_bound << " at t = " << t
                   << " (max |u_i| = " << max_abs(y)
                   << "); declared nonlinearity constants no longer apply";
                throw NumericalError(os.str());
            }

            double hnew = h * fac;
            if (rejected) hnew = std::min(hnew, h); // no growth right after a rejection
            rejected = false;
            h = std::min(hnew, hmax);
        } else {
            // reject, shrink
            double hnew = h / std::min(5.0, fac11 / safe);
            rejected = true;
            last = false;
            h = hnew;
        }
    }

    // fp dust can leave trailing samples within one ulp of t1
    while (si < sample_times.size()) {
        emit(sample_times[si], y);
        ++si;
    }
}

std::vector<double> uniform_samples(double t0, double t1, double step) {
    if (step <= 0.0) {
        if (t1 > t0) return {t0, t1};
        return {t0};
    }
    std::vector<double> out;
    long count = static_cast<long>(std::floor((t1 - t0) / step + 1e-9));
    out.reserve(static_cast<std::size_t>(count + 2));
    for (long k = 0; k <= count; ++k) out.push_back(t0 + static_cast<double>(k) * step);
    if (out.back() < t1 - 1e-12 * std::max(1.0, std::abs(t1))) out.push_back(t1);
    return out;
}

void check_samples(double t0, double t1, const std::vector<double>& samples) {
    double prev = t0;
    for (double s : samples) {
        if (s < t0 - 1e-12 || s > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
            throw ConfigError("integrate: sample time outside [t0, t1]");
        if (s < prev) throw ConfigError("integrate: sample times must be nondecreasing");
        prev = s;
    }
}

} // namespace

void SemiflowParams::validate() const {
    if (!std::isfinite(nu) || nu < 0.0)
        throw ConfigError("SemiflowParams: nu must be finite and >= 0");
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw ConfigError("SemiflowParams: lambda must be finite and >= 0");
}

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw ConfigError("IntegratorConfig: tolerances must be > 0");
    if (!(max_step > 0.0) || !std::isfinite(max_step))
        throw ConfigError("IntegratorConfig: max_step must be positive and finite");
    if (!(initial_step > 0.0)) throw ConfigError("IntegratorConfig: initial_step must be > 0");
    if (window_halfwidth < 0) throw ConfigError("IntegratorConfig: window_halfwidth must be >= 0");
}

std::vector<double> TrajectorySample::norms() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(norm(s));
    return out;
}

LatticeWindow rhs(const SemiflowParams& params, const MonotoneScalarFunction& f,
                  const ForcingModel& g, double t, const LatticeWindow& u) {
    params.validate();
    LatticeWindow drift = axpy(params.nu, laplacian(u), axpy(-params.lambda, u, nemytskii(f, u)));
    LatticeWindow clipped = clip_to(drift, u.first_site(), u.last_site());
    std::vector<double> vals = clipped.values();
    g.add_eval(t, u.first_site(), u.last_site(), vals);
    for (double v : vals) {
        if (!std::isfinite(v)) throw NumericalError("rhs: non-finite value");
    }
    return LatticeWindow(u.offset(), std::move(vals));
}

std::vector<TrajectorySample> integrate_joint(
    const SemiflowParams& params, const MonotoneScalarFunction& f, const ForcingModel& g,
    const std::vector<LatticeWindow>& v0s, const std::vector<long>& halfwidths, double t0,
    double t1, const IntegratorConfig& config, const std::vector<double>& sample_times) {
    params.validate();
    config.validate();
    if (v0s.empty() || v0s.size() != halfwidths.size())
        throw ConfigError("integrate_joint: need one initial state per block");
    if (!(params.lambda > 0.0))
        throw ConfigError("integrate: lambda must be > 0 (the decay term drives every estimate)");
    if (t1 < t0) throw ConfigError("integrate: t1 must be >= t0");

    std::vector<double> samples = sample_times;
    if (samples.empty()) samples = uniform_samples(t0, t1, 0.0);
    check_samples(t0, t1, samples);

    FlatSystem sys(params, f, g, halfwidths);

    // Lipschitz budget: trajectories stay in the absorbing ball scaled from
    // the initial data, so excursions past B invalidate the declared step cap.
    const double rate = params.rate(f);
    double v0_norm = 0.0;
    for (const auto& v : v0s) v0_norm = std::max(v0_norm, norm(v));
    const double bound = 2.0 * (g.sup_norm() / rate + v0_norm);
    const double lip = f.lip_on(bound);
    const double stability_cap = 1.0 / (4.0 * params.nu + params.lambda + lip);
    const double hmax = std::min(config.max_step, stability_cap);

    std::vector<double> y(sys.dim, 0.0);
    for (std::size_t b = 0; b < v0s.size(); ++b) {
        const long w = halfwidths[b];
        for (long i = v0s[b].first_site(); i <= v0s[b].last_site(); ++i) {
            if ((i < -w || i > w) && v0s[b].at_site(i) != 0.0)
                throw ConfigError("integrate: initial state has support outside the window");
        }
        for (long i = -w; i <= w; ++i)
            y[sys.begin[b] + static_cast<std::size_t>(i + w)] = v0s[b].at_site(i);
    }

    std::vector<TrajectorySample> out(v0s.size());
    std::string prov = run_provenance(params, f, g);
    for (auto& tr : out) tr.provenance = prov;

    drive(sys, config, bound, hmax, t0, t1, std::move(y), samples,
          [&](double s, const std::vector<double>& state) {
              for (std::size_t b = 0; b < out.size(); ++b) {
                  if (!out[b].times.empty() && s <= out[b].times.back()) continue;
                  out[b].times.push_back(s);
                  out[b].states.push_back(sys.block_window(state, b));
              }
          });
    return out;
}

TrajectorySample integrate(const SemiflowParams& params, const MonotoneScalarFunction& f,
                           const ForcingModel& g, const LatticeWindow& v0, double t0,
                           double t1, const IntegratorConfig& config,
                           const std::vector<double>& sample_times) {
    auto out = integrate_joint(params, f, g, {v0}, {config.window_halfwidth}, t0, t1, config,
                               sample_times);
    return std::move(out.front());
}

TrajectorySample integrate(const SemiflowParams& params, const MonotoneScalarFunction& f,
                           const ForcingModel& g, const LatticeWindow& v0, double t0,
                           double t1, const IntegratorConfig& config, double sample_step) {
    return integrate(params, f, g, v0, t0, t1, config, uniform_samples(t0, t1, sample_step));
}

double cocycle_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                     const ForcingModel& g, const LatticeWindow& v0, double t, double tau,
                     const IntegratorConfig& config) {
    if (t < 0.0 || tau < 0.0) throw ConfigError("cocycle_check: t and tau must be >= 0");
    TrajectorySample direct = integrate(params, f, g, v0, 0.0, t + tau, config);
    TrajectorySample inner = integrate(params, f, g, v0, 0.0, tau, config);
    auto shifted = g.shifted(tau);
    TrajectorySample outer = integrate(params, f, *shifted, inner.final_state(), 0.0, t, config);
    return norm(subtract(direct.final_state(), outer.final_state()));
}

double window_convergence_check(const SemiflowParams& params, const MonotoneScalarFunction& f,
                                const ForcingModel& g, const LatticeWindow& v0, double t1,
                                const IntegratorConfig& config, long halfwidth_n) {
    if (halfwidth_n < 0) throw ConfigError("window_convergence_check: halfwidth must be >= 0");
    LatticeWindow trimmed = v0.trimmed();
    if ((trimmed.first_site() < -halfwidth_n || trimmed.last_site() > halfwidth_n) &&
        trimmed.max_abs() > 0.0)
        throw ConfigError("window_convergence_check: v0 must be supported in the smaller window");
    auto runs = integrate_joint(params, f, g, {v0, v0}, {halfwidth_n, 2 * halfwidth_n}, 0.0, t1,
                                config, {});
    return norm(subtract(runs[0].final_state(), runs[1].final_state()));
}

} // namespace latlab
