#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace starcalc {

/// Compact interval [lo, hi] on which all kernels live.
struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw std::invalid_argument("Interval: need finite lo < hi");
    }

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

/// n Chebyshev (second kind) points on the interval, ascending.
/// Used as the fixed probe grid for sup-norm and deviation checks.
inline std::vector<double> cheb_points(const Interval& dom, int n) {
    if (n < 1) throw std::invalid_argument("cheb_points: n >= 1");
    std::vector<double> pts(n);
    if (n == 1) {
        pts[0] = dom.mid();
        return pts;
    }
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < n; ++j) {
        // cos runs from 1 down to -1; flip for ascending order
        double t = std::cos(pi * double(j) / double(n - 1));
        pts[n - 1 - j] = dom.mid() + 0.5 * dom.length() * t;
    }
    pts.front() = dom.lo;
    pts.back() = dom.hi;
    return pts;
}

}  // namespace starcalc
