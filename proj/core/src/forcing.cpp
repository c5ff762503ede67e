#include "latlab/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/errors.hpp"

namespace latlab {

long ForcingModel::choose_window(double epsilon) const {
    if (!(epsilon > 0.0)) throw ConfigError("choose_window: epsilon must be > 0");
    double target = epsilon * epsilon / 8.0;
    long n = 0;
    while (!(tail_bound(n) < target)) {
        ++n;
        if (n > 4096) throw ConfigError("choose_window: tail does not reach epsilon^2/8");
    }
    return n;
}

QuasiPeriodicForcing::QuasiPeriodicForcing(AmpRule rule, std::vector<ForcingSite> sites,
                                           long halfwidth, double phase)
    : amp_rule_(rule), sites_(std::move(sites)), active_halfwidth_(halfwidth), phase_(phase) {
    std::sort(sites_.begin(), sites_.end(),
              [](const ForcingSite& a, const ForcingSite& b) { return a.site < b.site; });
    for (std::size_t k = 0; k < sites_.size(); ++k) {
        const auto& s = sites_[k];
        if (s.omega == 0.0 || !std::isfinite(s.omega))
            throw ConfigError("forcing: omega must be nonzero and finite");
        if (!std::isfinite(s.amp)) throw ConfigError("forcing: non-finite amplitude");
        if (k > 0 && sites_[k - 1].site == s.site)
            throw ConfigError("forcing: duplicate site");
    }
    if (!std::isfinite(phase_)) throw ConfigError("forcing: non-finite phase");
}

QuasiPeriodicForcing QuasiPeriodicForcing::dyadic(
    long halfwidth, const std::function<double(long)>& omega_rule) {
    if (halfwidth < 0) throw ConfigError("forcing: active halfwidth must be >= 0");
    std::vector<ForcingSite> sites;
    sites.reserve(static_cast<std::size_t>(2 * halfwidth + 1));
    for (long i = -halfwidth; i <= halfwidth; ++i) {
        sites.push_back({i, omega_rule(i), std::ldexp(1.0, -static_cast<int>(std::labs(i)))});
    }
    return QuasiPeriodicForcing(AmpRule::Dyadic, std::move(sites), halfwidth, 0.0);
}

QuasiPeriodicForcing QuasiPeriodicForcing::dyadic_affine(long halfwidth, double base,
                                                         double delta) {
    return dyadic(halfwidth,
                  [base, delta](long i) { return base + delta * static_cast<double>(std::labs(i)); });
}

QuasiPeriodicForcing QuasiPeriodicForcing::explicit_sites(std::vector<ForcingSite> sites) {
    long hw = 0;
    for (const auto& s : sites) hw = std::max(hw, std::labs(s.site));
    return QuasiPeriodicForcing(AmpRule::Explicit, std::move(sites), hw, 0.0);
}

QuasiPeriodicForcing QuasiPeriodicForcing::single_site(long site, double omega, double amp) {
    return explicit_sites({ForcingSite{site, omega, amp}});
}

QuasiPeriodicForcing QuasiPeriodicForcing::none() {
    return QuasiPeriodicForcing(AmpRule::Explicit, {}, 0, 0.0);
}

LatticeWindow QuasiPeriodicForcing::eval(double t) const {
    return eval_window(t, -active_halfwidth_, active_halfwidth_);
}

LatticeWindow QuasiPeriodicForcing::eval_window(double t, long lo, long hi) const {
    if (hi < lo) throw ConfigError("forcing: empty evaluation window");
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    add_eval(t, lo, hi, out);
    return LatticeWindow(lo, std::move(out));
}

void QuasiPeriodicForcing::add_eval(double t, long lo, long hi, std::span<double> out) const {
    double s = t + phase_;
    for (const auto& site : sites_) {
        if (site.site < lo || site.site > hi) continue;
        out[static_cast<std::size_t>(site.site - lo)] += site.amp * std::sin(site.omega * s);
    }
}

double QuasiPeriodicForcing::sup_norm() const {
    if (amp_rule_ == AmpRule::Dyadic) {
        // sum over all i of 4^{-|i|} = 1 + 2 * (1/4)/(1 - 1/4) = 5/3; bound for
        // the full family, so it also bounds the truncation.
        return std::sqrt(5.0 / 3.0);
    }
    double acc = 0.0;
    for (const auto& s : sites_) acc += s.amp * s.amp;
    return std::sqrt(acc);
}

double QuasiPeriodicForcing::tail_bound(long n) const {
    if (n < 0) throw ConfigError("tail_bound: n must be >= 0");
    if (amp_rule_ == AmpRule::Dyadic) {
        // 2 * sum_{i > n} 4^{-i} = (2/3) 4^{-n}
        return (2.0 / 3.0) * std::ldexp(1.0, -2 * static_cast<int>(n));
    }
    double acc = 0.0;
    for (const auto& s : sites_) {
        if (std::labs(s.site) > n) acc += s.amp * s.amp;
    }
    return acc;
}

std::unique_ptr<ForcingModel> QuasiPeriodicForcing::shifted(double h) const {
    return std::make_unique<QuasiPeriodicForcing>(shift(h));
}

QuasiPeriodicForcing QuasiPeriodicForcing::shift(double h) const {
    QuasiPeriodicForcing out(*this);
    out.phase_ = phase_ + h;
    return out;
}

double translation_number_bound(long n, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("translation_number_bound: epsilon must be > 0");
    if (n < 0) throw ConfigError("translation_number_bound: n must be >= 0");
    return epsilon / std::sqrt(2.0 * (2.0 * static_cast<double>(n) + 1.0));
}

} // namespace latlab
