#include "latlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/errors.hpp"
#include "latlab/rng.hpp"

namespace latlab {

namespace {

double poly_eval(const std::vector<double>& odd_coeffs, double x) {
    // F(x) = x * (c0 + c1 s + c2 s^2 + ...), s = x^2, Horner in s.
    double s = x * x;
    double acc = 0.0;
    for (auto it = odd_coeffs.rbegin(); it != odd_coeffs.rend(); ++it) acc = acc * s + *it;
    return x * acc;
}

double poly_derivative(const std::vector<double>& odd_coeffs, double x) {
    // F'(x) = sum (2k+1) c_k x^{2k}
    double s = x * x;
    double acc = 0.0;
    double p = 1.0;
    for (std::size_t k = 0; k < odd_coeffs.size(); ++k) {
        acc += static_cast<double>(2 * k + 1) * odd_coeffs[k] * p;
        p *= s;
    }
    return acc;
}

} // namespace

MonotoneScalarFunction::MonotoneScalarFunction(std::string descriptor,
                                               std::function<double(double)> eval,
                                               double alpha,
                                               std::function<double(double)> lip_on)
    : kind_(Kind::Custom),
      descriptor_(std::move(descriptor)),
      eval_(std::move(eval)),
      alpha_(alpha),
      lip_on_(std::move(lip_on)) {
    if (!eval_) throw ConfigError("MonotoneScalarFunction: missing eval");
    if (!(alpha_ >= 0.0) || !std::isfinite(alpha_))
        throw ConfigError("MonotoneScalarFunction: alpha must be finite and >= 0");
    if (eval_(0.0) != 0.0)
        throw ConfigError("MonotoneScalarFunction '" + descriptor_ + "': F(0) must be 0");
}

MonotoneScalarFunction MonotoneScalarFunction::cubic() {
    MonotoneScalarFunction f;
    f.kind_ = Kind::Cubic;
    f.descriptor_ = "cubic";
    f.alpha_ = 1.0;
    f.lip_on_ = [](double b) { return 1.0 + 3.0 * b * b; };
    return f;
}

MonotoneScalarFunction MonotoneScalarFunction::linear(double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw ConfigError("linear nonlinearity: c must be finite and >= 0");
    MonotoneScalarFunction f;
    f.kind_ = Kind::Linear;
    f.linear_c_ = c;
    f.descriptor_ = "linear";
    f.alpha_ = c;
    f.lip_on_ = [c](double) { return c; };
    return f;
}

MonotoneScalarFunction MonotoneScalarFunction::odd_polynomial(std::vector<double> odd_coeffs,
                                                              double check_radius) {
    if (odd_coeffs.empty()) throw ConfigError("odd_polynomial: empty coefficient list");
    for (double c : odd_coeffs) {
        if (!std::isfinite(c)) throw ConfigError("odd_polynomial: non-finite coefficient");
    }
    if (!(check_radius > 0.0)) throw ConfigError("odd_polynomial: check_radius must be > 0");

    // Load-time derivative check on a grid: F' <= 0 everywhere sampled, and the
    // largest F' value gives alpha, the largest |F'| gives the Lipschitz bound.
    const int kGrid = 4096;
    double max_deriv = -1e300, max_abs_deriv = 0.0;
    for (int k = 0; k <= kGrid; ++k) {
        double x = -check_radius + 2.0 * check_radius * k / kGrid;
        double d = poly_derivative(odd_coeffs, x);
        max_deriv = std::max(max_deriv, d);
        max_abs_deriv = std::max(max_abs_deriv, std::abs(d));
    }
    if (max_deriv > 0.0)
        throw ConfigError("odd_polynomial: derivative positive inside check radius; "
                          "not monotone decreasing");

    MonotoneScalarFunction f;
    f.kind_ = Kind::Poly;
    f.odd_coeffs_ = std::move(odd_coeffs);
    f.descriptor_ = "custom";
    f.alpha_ = std::max(0.0, -max_deriv);
    double safety = 1.1 * max_abs_deriv;
    auto coeffs = f.odd_coeffs_;
    f.lip_on_ = [coeffs, safety, check_radius](double b) {
        if (b <= check_radius) return safety;
        // outside the checked radius, rebuild the estimate on demand
        double m = 0.0;
        const int kGrid = 4096;
        for (int k = 0; k <= kGrid; ++k) {
            double x = -b + 2.0 * b * k / kGrid;
            m = std::max(m, std::abs(poly_derivative(coeffs, x)));
        }
        return 1.1 * m;
    };
    return f;
}

double MonotoneScalarFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::Cubic: return -x * (1.0 + x * x);
        case Kind::Linear: return -linear_c_ * x;
        case Kind::Poly: return poly_eval(odd_coeffs_, x);
        case Kind::Custom: return eval_(x);
    }
    return 0.0;
}

void MonotoneScalarFunction::apply(std::span<const double> in, std::span<double> out) const {
    switch (kind_) {
        case Kind::Cubic:
            for (std::size_t i = 0; i < in.size(); ++i) {
                double x = in[i];
                out[i] = -x * (1.0 + x * x);
            }
            break;
        case Kind::Linear:
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = -linear_c_ * in[i];
            break;
        case Kind::Poly:
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = poly_eval(odd_coeffs_, in[i]);
            break;
        case Kind::Custom:
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = eval_(in[i]);
            break;
    }
}

LatticeWindow nemytskii(const MonotoneScalarFunction& f, const LatticeWindow& u) {
    std::vector<double> out(u.size());
    f.apply(u.values(), out);
    for (double v : out) {
        if (!std::isfinite(v))
            throw NumericalError("nemytskii: F produced a non-finite value; input outside "
                                 "the valid range of '" + f.descriptor() + "'");
    }
    return LatticeWindow(u.offset(), std::move(out));
}

double verify_monotonicity(const MonotoneScalarFunction& f, double radius,
                           std::size_t samples, std::uint64_t seed) {
    if (!(radius > 0.0)) throw ConfigError("verify_monotonicity: radius must be > 0");
    if (samples < 2) throw ConfigError("verify_monotonicity: need at least 2 samples");
    CounterRng rng(seed);
    double worst = -1e300;
    for (std::size_t k = 0; k < samples; ++k) {
        double x1 = rng.uniform(-radius, radius);
        double x2 = rng.uniform(-radius, radius);
        double d = x1 - x2;
        if (d == 0.0) continue; // degenerate pair
        double ratio = (d * (f(x1) - f(x2))) / (d * d);
        worst = std::max(worst, ratio);
    }
    return worst;
}

SectorBound verify_sector_bound(const MonotoneScalarFunction& f, double radius,
                                std::size_t samples, std::uint64_t seed) {
    if (!(radius > 0.0)) throw ConfigError("verify_sector_bound: radius must be > 0");
    CounterRng rng(seed);
    double beta = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        double s = rng.uniform(-radius, radius);
        beta = std::max(beta, s * f(s) + f.alpha() * s * s);
    }
    return SectorBound{f.alpha(), beta};
}

} // namespace latlab
