#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/quadrature.hpp"

namespace lowzero {

// Even test function with compactly supported, piecewise polynomial Fourier transform.
struct TestFunction {
    Rational sigma;  // supp fhat lies in [-sigma, sigma]
    PiecewisePoly fhat;
    std::function<double(double)> phi_at;  // closed form; may be empty
    std::string label;
};

// phi(x) = (sin(pi s x) / (pi s x))^2, fhat(y) = 1/s - |y|/s^2 on |y| < s.
inline TestFunction fejer(Rational sigma) {
    sigma.canonicalize();
    if (sigma <= 0) throw DomainError("fejer test function needs sigma > 0");
    const Rational inv = 1 / sigma;
    const Rational inv2 = inv * inv;
    PiecewisePoly fhat({-sigma, 0, sigma}, {Poly{inv, inv2}, Poly{inv, -inv2}});
    const double s = sigma.get_d();
    auto phi = [s](double x) {
        const double t = std::numbers::pi * s * x;
        if (std::abs(t) < 1e-6) return 1.0 - t * t / 3.0;  // series, avoids 0/0
        const double r = std::sin(t) / t;
        return r * r;
    };
    return {sigma, std::move(fhat), phi, "fejer:" + to_string(sigma)};
}

// "fejer:<p/q>"
inline TestFunction parse_test_function(std::string_view spec) {
    constexpr std::string_view prefix = "fejer:";
    if (spec.substr(0, prefix.size()) != prefix)
        throw UsageError("unknown test function '" + std::string(spec) + "' (expected fejer:<p/q>)");
    const Rational sigma = parse_rational(spec.substr(prefix.size()));
    if (sigma <= 0) throw UsageError("test function support must be positive: " + std::string(spec));
    return fejer(sigma);
}

inline double fhat_at(const TestFunction& tf, double y) { return evaluate_double(tf.fhat, y); }

inline Rational phi_at_zero(const TestFunction& tf) { return total_integral(tf.fhat); }

inline Rational fhat_at_zero(const TestFunction& tf) { return evaluate(tf.fhat, 0); }

// Fourier transform of phi^m: m-fold self convolution of fhat.
inline PiecewisePoly phi_power_hat(const TestFunction& tf, unsigned m) {
    if (m == 0) throw DomainError("phi_power_hat needs m >= 1");
    return convolution_power(tf.fhat, m);
}

// phi(x) from the closed form if present, otherwise 2 * integral_0^sigma fhat(y) cos(2 pi x y) dy.
inline double phi_value_numeric(const TestFunction& tf, double x) {
    if (tf.phi_at) return tf.phi_at(x);
    std::vector<double> breaks;
    for (const auto& b : tf.fhat.breakpoints())
        if (b >= 0) breaks.push_back(b.get_d());
    if (breaks.empty() || breaks.front() > 0) breaks.insert(breaks.begin(), 0.0);
    auto integrand = [&](double y) { return evaluate_double(tf.fhat, y) * std::cos(2 * std::numbers::pi * x * y); };
    std::vector<double> fine;
    const double width = 0.25 / std::max(1.0, std::abs(x));
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / width));
        for (std::size_t k = 0; k < n; ++k) fine.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(n));
    }
    fine.push_back(breaks.back());
    return 2.0 * quad::integrate_breaks(integrand, fine, 1e-12);
}

// Structural checks: evenness, support inside [-sigma, sigma], phi(0) equal to the mass of fhat.
inline void check_test_function(const TestFunction& tf) {
    if (!(reflect(tf.fhat) == tf.fhat)) throw InvariantError(tf.label + ": fhat is not even");
    if (!tf.fhat.is_zero() && (tf.fhat.support_lo() < -tf.sigma || tf.fhat.support_hi() > tf.sigma))
        throw InvariantError(tf.label + ": fhat leaks outside [-sigma, sigma]");
    if (tf.phi_at) {
        const double mass = phi_at_zero(tf).get_d();
        if (std::abs(tf.phi_at(0.0) - mass) > 1e-10) throw InvariantError(tf.label + ": phi(0) differs from mass of fhat");
    }
}

}  // namespace lowzero
