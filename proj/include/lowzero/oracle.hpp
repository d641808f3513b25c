#pragma once

// Floating-point recomputation of the exact functionals by adaptive quadrature.
// Nothing here touches the exact convolution code; it is an independent check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lowzero/combinatorics.hpp"
#include "lowzero/errors.hpp"
#include "lowzero/quadrature.hpp"
#include "lowzero/testfn.hpp"

namespace lowzero::oracle {

enum class Functional { sigma_phi_sq, R_moment, X_xi, I_integral };

struct Descriptor {
    Functional kind = Functional::sigma_phi_sq;
    unsigned n = 0;      // moment order (R: m, X/I: n)
    unsigned index = 0;  // R: i, X: ell, I: alpha
    unsigned delta = 0;  // I only
};

class NumericOracle {
public:
    explicit NumericOracle(TestFunction tf) : tf_(std::move(tf)), sigma_(tf_.sigma.get_d()) {}

    double fhat(double y) const { return fhat_at(tf_, y); }
    double phi(double x) const { return phi_value_numeric(tf_, x); }

    double sigma_phi_sq() const {
        auto f = [&](double y) {
            const double v = fhat(y);
            return y * v * v;
        };
        return 4.0 * quad::integrate_breaks(f, positive_breaks(), 1e-12);
    }

    // integral of phi^k(x) sin(2 pi A x) / (2 pi x) over the real line.
    double sine_transform(unsigned k, double A) const {
        if (k == 0) throw DomainError("oscillatory oracle needs k >= 1");
        if (A == 0.0) return 0.0;
        if (k == 1) {
            // The x-side tail decays too slowly; on the Fourier side this is half the mass of fhat on [-A, A].
            const double reach = std::min(std::abs(A), sigma_);
            std::vector<double> b{0.0};
            for (double x : positive_breaks())
                if (x > 0.0 && x < reach) b.push_back(x);
            b.push_back(reach);
            return (A > 0 ? 1.0 : -1.0) * quad::integrate_breaks([&](double y) { return fhat(y); }, b, 1e-13);
        }
        auto f = [&](double x) {
            const double p = std::pow(phi(x), static_cast<int>(k));
            if (x == 0.0) return p * A;
            return p * std::sin(2 * std::numbers::pi * A * x) / (2 * std::numbers::pi * x);
        };
        // |phi| <= (pi sigma x)^{-2}, so the tail beyond X is at most
        // 2 (pi sigma)^{-2k} / (2 pi * 2k * X^{2k}).
        const double target = 1e-12;
        const double c = std::pow(std::numbers::pi * sigma_, -2.0 * k) / (2 * std::numbers::pi * k);
        double X = std::pow(c / target, 1.0 / (2.0 * k));
        X = std::clamp(X, 20.0, 4000.0);
        const double width = std::min(0.25, 0.25 / std::abs(A));
        return 2.0 * quad::integrate_panels(f, 0.0, X, width, 1e-11);
    }

    // V(m, l) by nesting l one-dimensional integrals over [-sigma, sigma].
    double V(unsigned m, unsigned ell) const {
        std::function<double(unsigned, double)> level = [&](unsigned depth, double shift) -> double {
            if (depth == ell) return sine_transform(m - ell, 1.0 + shift);
            auto f = [&](double y) { return fhat(y) * level(depth + 1, shift + std::abs(y)); };
            return quad::integrate_breaks(f, symmetric_breaks(), 1e-10);
        };
        return level(0, 0.0);
    }

    double R(unsigned m, unsigned i) const {
        const double phi0m = std::pow(phi(0.0), static_cast<int>(m));
        double sum = 0.0;
        for (unsigned ell = 0; ell < i; ++ell)
            sum += sign_pow(ell) * binomial(m, ell).get_d() * (V(m, ell) - 0.5 * phi0m);
        return sign_pow(m + 1) * std::ldexp(1.0, static_cast<int>(m) - 1) * sum;
    }

    // I(alpha, delta) with phi^{n-alpha-delta}; first alpha outer variables add |y|, the rest subtract.
    double I_integral(unsigned n, unsigned alpha, unsigned delta) const {
        const unsigned outer = alpha + delta;
        std::function<double(unsigned, double)> level = [&](unsigned depth, double shift) -> double {
            if (depth == outer) return sine_transform(n - outer, 1.0 + shift);
            const double s = depth < alpha ? 1.0 : -1.0;
            auto f = [&](double y) { return fhat(y) * level(depth + 1, shift + s * std::abs(y)); };
            return quad::integrate_breaks(f, symmetric_breaks(), 1e-10);
        };
        return level(0, 0.0);
    }

    // X(xi_l): integral over [0, sigma]^n of prod fhat(y_i) times 1{y_1+..+y_{n-l} - rest > 1}.
    // The last variable is integrated exactly over the interval where the indicator holds.
    double X_xi(unsigned n, unsigned ell) const {
        if (n == 0) return 0.0;
        auto sign_of = [&](unsigned j) { return j < n - ell ? 1.0 : -1.0; };
        std::function<double(unsigned, double)> level = [&](unsigned depth, double partial) -> double {
            const double s = sign_of(depth);
            if (depth + 1 == n) {
                // need partial + s*y > 1
                double lo = 0.0, hi = sigma_;
                if (s > 0) lo = std::max(lo, 1.0 - partial);
                else hi = std::min(hi, partial - 1.0);
                if (!(lo < hi)) return 0.0;
                return quad::integrate([&](double y) { return fhat(y); }, lo, hi, 1e-13);
            }
            // remaining variables can move the sum by at most this much
            double reach_up = 0.0;
            for (unsigned j = depth + 1; j < n; ++j)
                if (sign_of(j) > 0) reach_up += sigma_;
            auto f = [&](double y) {
                const double p = partial + s * y;
                if (p + reach_up <= 1.0) return 0.0;
                return fhat(y) * level(depth + 1, p);
            };
            std::vector<double> breaks{0.0, sigma_};
            const double kink = s * (1.0 - reach_up - partial);  // where the reachable region starts
            if (kink > 0.0 && kink < sigma_) breaks.insert(breaks.begin() + 1, kink);
            return quad::integrate_breaks(f, breaks, 1e-11);
        };
        return level(0, 0.0);
    }

    double evaluate(const Descriptor& d) const {
        switch (d.kind) {
            case Functional::sigma_phi_sq: return sigma_phi_sq();
            case Functional::R_moment: return R(d.n, d.index);
            case Functional::X_xi: return X_xi(d.n, d.index);
            case Functional::I_integral: return I_integral(d.n, d.index, d.delta);
        }
        throw DomainError("unknown oracle functional");
    }

private:
    std::vector<double> positive_breaks() const {
        std::vector<double> b;
        for (const auto& x : tf_.fhat.breakpoints())
            if (x >= 0) b.push_back(x.get_d());
        if (b.empty() || b.front() > 0.0) b.insert(b.begin(), 0.0);
        return b;
    }

    std::vector<double> symmetric_breaks() const {
        std::vector<double> b;
        for (const auto& x : tf_.fhat.breakpoints()) b.push_back(x.get_d());
        return b;
    }

    TestFunction tf_;
    double sigma_;
};

inline double oracle_numeric(const TestFunction& tf, const Descriptor& d) { return NumericOracle(tf).evaluate(d); }

}  // namespace lowzero::oracle
