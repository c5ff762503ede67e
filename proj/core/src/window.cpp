#include "latlab/window.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/errors.hpp"

namespace latlab {

namespace {

void check_finite(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("LatticeWindow: non-finite value");
    }
}

} // namespace

LatticeWindow::LatticeWindow() : offset_(0), values_(1, 0.0) {}

LatticeWindow::LatticeWindow(long offset, std::vector<double> values)
    : offset_(offset), values_(std::move(values)) {
    if (values_.empty()) throw ConfigError("LatticeWindow: window length must be >= 1");
    check_finite(values_);
}

LatticeWindow LatticeWindow::zeros(long offset, std::size_t count) {
    if (count == 0) throw ConfigError("LatticeWindow: window length must be >= 1");
    return LatticeWindow(offset, std::vector<double>(count, 0.0));
}

LatticeWindow LatticeWindow::unit(long site) {
    return LatticeWindow(site, std::vector<double>{1.0});
}

bool LatticeWindow::equals(const LatticeWindow& other, double tol) const {
    long lo = std::min(first_site(), other.first_site());
    long hi = std::max(last_site(), other.last_site());
    for (long i = lo; i <= hi; ++i) {
        if (std::abs(at_site(i) - other.at_site(i)) > tol) return false;
    }
    return true;
}

double LatticeWindow::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

LatticeWindow LatticeWindow::trimmed() const {
    long lo = first_site(), hi = last_site();
    while (lo < hi && at_site(lo) == 0.0) ++lo;
    while (hi > lo && at_site(hi) == 0.0) --hi;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) out.push_back(at_site(i));
    return LatticeWindow(lo, std::move(out));
}

bool operator==(const LatticeWindow& a, const LatticeWindow& b) { return a.equals(b); }

double inner_product(const LatticeWindow& u, const LatticeWindow& v) {
    long lo = std::max(u.first_site(), v.first_site());
    long hi = std::min(u.last_site(), v.last_site());
    double acc = 0.0;
    for (long i = lo; i <= hi; ++i) acc += u.at_site(i) * v.at_site(i);
    if (!std::isfinite(acc)) throw NumericalError("inner_product: non-finite result");
    return acc;
}

double norm(const LatticeWindow& u) { return std::sqrt(inner_product(u, u)); }

LatticeWindow laplacian(const LatticeWindow& u) {
    long lo = u.first_site() - 1, hi = u.last_site() + 1;
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) {
        out[static_cast<std::size_t>(i - lo)] =
            u.at_site(i - 1) - 2.0 * u.at_site(i) + u.at_site(i + 1);
    }
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow dplus(const LatticeWindow& u) {
    long lo = u.first_site() - 1, hi = u.last_site();
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) {
        out[static_cast<std::size_t>(i - lo)] = u.at_site(i + 1) - u.at_site(i);
    }
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow dminus(const LatticeWindow& u) {
    long lo = u.first_site(), hi = u.last_site() + 1;
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) {
        out[static_cast<std::size_t>(i - lo)] = u.at_site(i - 1) - u.at_site(i);
    }
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow axpy(double a, const LatticeWindow& u, const LatticeWindow& v) {
    long lo = std::min(u.first_site(), v.first_site());
    long hi = std::max(u.last_site(), v.last_site());
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) {
        out[static_cast<std::size_t>(i - lo)] = a * u.at_site(i) + v.at_site(i);
    }
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow scale(double a, const LatticeWindow& u) {
    std::vector<double> out(u.values());
    for (double& x : out) x *= a;
    return LatticeWindow(u.offset(), std::move(out));
}

LatticeWindow subtract(const LatticeWindow& u, const LatticeWindow& v) {
    return axpy(-1.0, v, u);
}

LatticeWindow clip_to(const LatticeWindow& u, long lo, long hi) {
    if (hi < lo) throw ConfigError("clip_to: empty site range");
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) out[static_cast<std::size_t>(i - lo)] = u.at_site(i);
    return LatticeWindow(lo, std::move(out));
}

double tail_norm(const LatticeWindow& u, long n) {
    double acc = 0.0;
    for (long i = u.first_site(); i <= u.last_site(); ++i) {
        if (std::labs(i) > n) {
            double x = u.at_site(i);
            acc += x * x;
        }
    }
    return std::sqrt(acc);
}

} // namespace latlab
