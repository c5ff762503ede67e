#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "latlab/window.hpp"

namespace latlab {

/// Time-dependent square-summable forcing with a certified sup-norm bound,
/// certified tail bounds, and an exact time-shift group.
class ForcingModel {
public:
    virtual ~ForcingModel() = default;

    /// f(t) on the model's own active window.
    virtual LatticeWindow eval(double t) const = 0;

    /// f(t) restricted to sites [lo, hi]; sites outside the active window are 0.
    virtual LatticeWindow eval_window(double t, long lo, long hi) const = 0;

    /// Accumulate f_i(t) into out[i - lo] for i in [lo, hi]; integrator hot path.
    virtual void add_eval(double t, long lo, long hi, std::span<double> out) const = 0;

    /// Certified bound M with sup_t ||f(t)|| <= M.
    virtual double sup_norm() const = 0;

    /// Mass outside [-n, n]: sum over |i| > n of a_i^2 (full family, including
    /// any sites the truncation dropped).
    virtual double tail_bound(long n) const = 0;

    /// The shifted model f^h with f^h(t) = f(t + h).
    virtual std::unique_ptr<ForcingModel> shifted(double h) const = 0;

    /// Smallest n >= 0 with tail_bound(n) < epsilon^2 / 8.
    long choose_window(double epsilon) const;
};

struct ForcingSite {
    long site = 0;
    double omega = 0.0; ///< angular frequency, must be nonzero
    double amp = 0.0;
};

/// Quasi-periodic forcing f_i(t) = a_i sin(omega_i (t + phase)) on a finite
/// active window; the default "dyadic" amplitude rule is a_i = 2^{-|i|}, for
/// which the tail mass has the closed form (2/3) 4^{-n} and the sup-norm bound
/// is sqrt(5/3).
class QuasiPeriodicForcing final : public ForcingModel {
public:
    enum class AmpRule { Dyadic, Explicit };

    /// Dyadic amplitudes on |i| <= halfwidth with per-site frequencies.
    static QuasiPeriodicForcing dyadic(long halfwidth,
                                       const std::function<double(long)>& omega_rule);

    /// Dyadic amplitudes with omega_i = base + delta * |i|.
    static QuasiPeriodicForcing dyadic_affine(long halfwidth, double base, double delta);

    /// Only the listed sites are active; each carries an explicit amplitude.
    static QuasiPeriodicForcing explicit_sites(std::vector<ForcingSite> sites);

    static QuasiPeriodicForcing single_site(long site, double omega, double amp);

    /// No forcing at all (M = 0).
    static QuasiPeriodicForcing none();

    LatticeWindow eval(double t) const override;
    LatticeWindow eval_window(double t, long lo, long hi) const override;
    void add_eval(double t, long lo, long hi, std::span<double> out) const override;
    double sup_norm() const override;
    double tail_bound(long n) const override;
    std::unique_ptr<ForcingModel> shifted(double h) const override;

    /// Value-semantics shift; shift(h1).shift(h2) equals shift(h1 + h2) exactly.
    QuasiPeriodicForcing shift(double h) const;

    double phase() const { return phase_; }
    long active_halfwidth() const { return active_halfwidth_; }
    AmpRule amp_rule() const { return amp_rule_; }
    const std::vector<ForcingSite>& sites() const { return sites_; }

private:
    QuasiPeriodicForcing(AmpRule rule, std::vector<ForcingSite> sites, long halfwidth,
                         double phase);

    AmpRule amp_rule_;
    std::vector<ForcingSite> sites_; ///< sorted by site, unique
    long active_halfwidth_;
    double phase_;
};

/// Per-component tolerance eps / sqrt(2 (2n + 1)): a common translation number
/// of the 2n+1 central scalar components at this accuracy is an eps-translation
/// number of the full forcing.
double translation_number_bound(long n, double epsilon);

} // namespace latlab
