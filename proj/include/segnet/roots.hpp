#pragma once

// Bracketing root finders used by the equilibrium and calibration solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "segnet/error.hpp"

namespace segnet::roots {

struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

struct RootOptions {
    double x_tol = 1e-12;
    /// Stop once |f| falls below this (absolute, caller scales it).
    double f_tol = 1e-14;
    int max_iter = 200;
};

/// Bisection on a sign-changing bracket, followed by a guarded secant polish.
/// Bisection alone carries the convergence guarantee; the secant steps are
/// accepted only while they stay inside the current bracket and shrink |f|.
template <class F>
double bisect(F&& f, Bracket b, const RootOptions& opt = {}) {
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;
    if (std::signbit(b.f_lo) == std::signbit(b.f_hi))
        throw NoRoot("bracket has no sign change");

    double lo = b.lo, hi = b.hi, flo = b.f_lo, fhi = b.f_hi;
    for (int it = 0; it < opt.max_iter && (hi - lo) > opt.x_tol; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double fbest = std::min(std::abs(flo), std::abs(fhi));
    // secant polish
    double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
    for (int it = 0; it < 8 && fbest > opt.f_tol; ++it) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo && x2 <= hi)) break;
        const double f2 = f(x2);
        if (std::abs(f2) >= fbest) break;
        best = x2;
        fbest = std::abs(f2);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    return best;
}

template <class F>
double bisect(F&& f, double lo, double hi, const RootOptions& opt = {}) {
    const double flo = f(lo);
    const double fhi = f(hi);
    return bisect(f, Bracket{lo, hi, flo, fhi}, opt);
}

/// Sample points on [lo, hi]: a uniform grid of the given spacing, plus
/// geometric refinement toward both ends so that roots hugging a boundary
/// are still bracketed.
inline std::vector<double> scan_points(double lo, double hi, double spacing = 1e-3,
                                       int end_decades = 12) {
    std::vector<double> pts;
    const double width = hi - lo;
    const auto n = static_cast<long>(std::ceil(width / spacing));
    pts.reserve(static_cast<std::size_t>(n + 2 * end_decades + 2));
    for (long i = 0; i <= n; ++i) pts.push_back(lo + width * static_cast<double>(i) / n);
    for (int k = 3; k <= end_decades + 3; ++k) {
        const double d = width * std::pow(10.0, -k);
        pts.push_back(lo + d);
        pts.push_back(hi - d);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double x) { return x < lo || x > hi; }),
              pts.end());
    return pts;
}

/// Result of scanning a function for sign changes.
struct ScanResult {
    std::vector<double> exact_zeros;  ///< sample points where f == 0 exactly
    std::vector<Bracket> brackets;    ///< adjacent samples with a strict sign change
    double f_first = std::numeric_limits<double>::quiet_NaN();
    double f_last = std::numeric_limits<double>::quiet_NaN();
};

template <class F>
ScanResult scan_sign_changes(F&& f, const std::vector<double>& pts) {
    ScanResult out;
    if (pts.empty()) return out;
    double xp = pts.front();
    double fp = f(xp);
    out.f_first = fp;
    if (fp == 0.0) out.exact_zeros.push_back(xp);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double x = pts[i];
        const double fx = f(x);
        if (fx == 0.0) {
            out.exact_zeros.push_back(x);
        } else if (fp != 0.0 && std::signbit(fx) != std::signbit(fp)) {
            out.brackets.push_back({xp, x, fp, fx});
        }
        xp = x;
        fp = fx;
    }
    out.f_last = fp;
    return out;
}

/// Every root of f on [lo, hi] resolvable at the scan resolution, ascending.
template <class F>
std::vector<double> find_all_roots(F&& f, double lo, double hi, double spacing = 1e-3,
                                   const RootOptions& opt = {}) {
    const ScanResult scan = scan_sign_changes(f, scan_points(lo, hi, spacing));
    std::vector<double> out = scan.exact_zeros;
    for (const Bracket& b : scan.brackets) out.push_back(bisect(f, b, opt));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace segnet::roots
