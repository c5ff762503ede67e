#pragma once

#include <cstddef>
#include <vector>

namespace latlab {

/// Finite window of a two-sided square-summable sequence. Sites outside the
/// stored range are implicitly zero, so a window stands for a full sequence
/// and two windows with different extents can still represent the same one.
class LatticeWindow {
public:
    /// Single site 0 holding 0 (the zero sequence in its smallest window).
    LatticeWindow();

    /// Window covering sites [offset, offset + values.size()).
    /// Throws ConfigError if values is empty or contains a non-finite entry.
    LatticeWindow(long offset, std::vector<double> values);

    static LatticeWindow zeros(long offset, std::size_t count);
    /// Unit sequence e_site: 1 at `site`, 0 elsewhere.
    static LatticeWindow unit(long site);

    long offset() const { return offset_; }
    std::size_t size() const { return values_.size(); }
    long first_site() const { return offset_; }
    long last_site() const { return offset_ + static_cast<long>(values_.size()) - 1; }

    /// Value at lattice site i, zero outside the stored window.
    double at_site(long i) const {
        long k = i - offset_;
        if (k < 0 || k >= static_cast<long>(values_.size())) return 0.0;
        return values_[static_cast<std::size_t>(k)];
    }

    const std::vector<double>& values() const { return values_; }

    /// Site-by-site equality after zero-extension (buffer layout irrelevant).
    bool equals(const LatticeWindow& other, double tol = 0.0) const;

    /// Largest |u_i| over the window.
    double max_abs() const;

    /// Smallest window holding all nonzero sites (keeps one site if all zero).
    LatticeWindow trimmed() const;

private:
    long offset_;
    std::vector<double> values_;
};

bool operator==(const LatticeWindow& a, const LatticeWindow& b);

/// Sum of u_i * v_i over the union of supports, accumulated in ascending site
/// order (fixed reduction order keeps results reproducible).
/// Throws NumericalError if the result is not finite.
double inner_product(const LatticeWindow& u, const LatticeWindow& v);

double norm(const LatticeWindow& u);

/// Second difference u_{i-1} - 2 u_i + u_{i+1}; output widens one site each way.
LatticeWindow laplacian(const LatticeWindow& u);

/// Forward difference (D+ u)_i = u_{i+1} - u_i.
LatticeWindow dplus(const LatticeWindow& u);

/// (D- u)_i = u_{i-1} - u_i, the adjoint of dplus:
/// inner_product(dminus(u), v) == inner_product(u, dplus(v)).
/// With this sign, laplacian = -dplus(dminus(.)) = -dminus(dplus(.)).
LatticeWindow dminus(const LatticeWindow& u);

/// a*u + v over the union of supports.
LatticeWindow axpy(double a, const LatticeWindow& u, const LatticeWindow& v);

LatticeWindow scale(double a, const LatticeWindow& u);

LatticeWindow subtract(const LatticeWindow& u, const LatticeWindow& v);

/// Restriction to sites [lo, hi]; everything outside is dropped (pinned to 0).
/// Used by the fixed-window integrator.
LatticeWindow clip_to(const LatticeWindow& u, long lo, long hi);

/// Norm of the part of u outside [-n, n].
double tail_norm(const LatticeWindow& u, long n);

} // namespace latlab
