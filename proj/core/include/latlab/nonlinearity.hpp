#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latlab/window.hpp"

namespace latlab {

/// Scalar nonlinearity F with F(0) = 0, a one-sided monotonicity constant
/// alpha >= 0 ((x1-x2)(F(x1)-F(x2)) <= -alpha (x1-x2)^2) and a
/// radius-dependent Lipschitz bound lip_on(B) valid on [-B, B].
///
/// Construction checks F(0) = 0; alpha and lip_on are declared constants,
/// falsifiable by verify_monotonicity / verify_sector_bound but not provable
/// from samples.
class MonotoneScalarFunction {
public:
    MonotoneScalarFunction(std::string descriptor,
                           std::function<double(double)> eval,
                           double alpha,
                           std::function<double(double)> lip_on);

    /// F(u) = -u (1 + u^2); alpha = 1 (F' = -1 - 3u^2 <= -1), Lip_B = 1 + 3B^2.
    static MonotoneScalarFunction cubic();

    /// F(u) = -c u with c >= 0; alpha = c, Lip_B = c.
    static MonotoneScalarFunction linear(double c);

    /// F(u) = 0; the unforced-drift case.
    static MonotoneScalarFunction zero() { return linear(0.0); }

    /// Odd polynomial F(u) = c[0] u + c[1] u^3 + c[2] u^5 + ...
    /// Rejected unless F'(u) <= 0 on a grid over [-check_radius, check_radius];
    /// alpha = -max F' over the grid, lip = 1.1 * max |F'| (numerical estimate
    /// with a 10% safety factor).
    static MonotoneScalarFunction odd_polynomial(std::vector<double> odd_coeffs,
                                                 double check_radius = 4.0);

    double operator()(double x) const;

    /// Componentwise evaluation; the hot path for the integrator.
    void apply(std::span<const double> in, std::span<double> out) const;

    double alpha() const { return alpha_; }
    double lip_on(double radius) const { return lip_on_(radius); }
    const std::string& descriptor() const { return descriptor_; }

private:
    enum class Kind { Cubic, Linear, Poly, Custom };

    MonotoneScalarFunction() = default;

    Kind kind_ = Kind::Custom;
    double linear_c_ = 0.0;
    std::vector<double> odd_coeffs_;
    std::string descriptor_;
    std::function<double(double)> eval_;
    double alpha_ = 0.0;
    std::function<double(double)> lip_on_;
};

/// Componentwise lift of F to the lattice: output has the input's window
/// (F(0) = 0 keeps zero-extension intact). Throws NumericalError if F blows
/// up on some component.
LatticeWindow nemytskii(const MonotoneScalarFunction& f, const LatticeWindow& u);

/// Max over sampled pairs x1 != x2 in [-radius, radius] of
/// (x1-x2)(F(x1)-F(x2)) / (x1-x2)^2. The claimed alpha is corroborated iff
/// the result is <= -alpha + 1e-9.
double verify_monotonicity(const MonotoneScalarFunction& f, double radius,
                           std::size_t samples, std::uint64_t seed);

struct SectorBound {
    double alpha_hat; ///< declared monotonicity constant used for the fit
    double beta_hat;  ///< smallest b >= 0 with s F(s) <= -alpha s^2 + b over samples
};

SectorBound verify_sector_bound(const MonotoneScalarFunction& f, double radius,
                                std::size_t samples, std::uint64_t seed);

} // namespace latlab
