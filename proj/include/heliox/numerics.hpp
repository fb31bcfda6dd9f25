#pragma once
// heliox/numerics.hpp - small 1-D numerical kernels: bracketing root finder,
// golden-section minimizer, grids and trapezoid quadrature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "heliox/errors.hpp"

namespace heliox::numerics {

/// Bisection on a sign-changing bracket. Stops when the bracket is narrower
/// than `rel_tol * max(|lo|,|hi|)` or f hits exactly zero.
template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-14, int max_iter = 400) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NumericalError("bisect: root not bracketed on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    }
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (std::abs(hi - lo) <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

/// Golden-section search for the minimum of a unimodal f on [a, b].
template <typename F>
double golden_section_minimize(F&& f, double a, double b, double rel_tol = 1e-12,
                               int max_iter = 500) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && std::abs(b - a) > rel_tol * (std::abs(c) + std::abs(d)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline std::vector<double> linspace(double start, double stop, std::size_t count) {
    if (count < 2) throw DomainError("linspace: count must be >= 2");
    std::vector<double> out(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    out.back() = stop;
    return out;
}

inline std::vector<double> logspace(double start, double stop, std::size_t count) {
    if (!(start > 0.0 && stop > 0.0)) throw DomainError("logspace: endpoints must be positive");
    auto exps = linspace(std::log10(start), std::log10(stop), count);
    for (auto& e : exps) e = std::pow(10.0, e);
    exps.front() = start;
    exps.back() = stop;
    return exps;
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("trapezoid: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

/// Composite Simpson rule of f on [a, b] with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n = 2000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace heliox::numerics
