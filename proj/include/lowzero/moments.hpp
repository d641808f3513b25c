#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "lowzero/combinatorics.hpp"
#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/testfn.hpp"

namespace lowzero {

// plus: SO(even) / positive sign family, minus: SO(odd) / negative sign family.
enum class Sign { plus, minus };

inline const char* to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

inline Sign parse_sign(std::string_view s) {
    if (s == "plus" || s == "+" || s == "even") return Sign::plus;
    if (s == "minus" || s == "-" || s == "odd") return Sign::minus;
    throw UsageError("unknown sign '" + std::string(s) + "' (expected plus or minus)");
}

struct MomentSpec {
    unsigned n = 2;
    unsigned a = 1;
    Sign sign = Sign::plus;
};

// Reason the triple (sigma, n, a) falls outside the admissible window, if it does.
// Boundary values sigma = 1/(n-a) and sigma = 2/n are accepted unless allow_boundary is false.
inline std::optional<std::string> validity_violation(const Rational& sigma, unsigned n, unsigned a,
                                                     bool allow_boundary = true) {
    if (n == 0) return "moment order n must be at least 1";
    const unsigned half_up = (n + 1) / 2;
    if (a < 1 || a > half_up)
        return "need 1 <= a <= ceil(n/2) = " + std::to_string(half_up) + ", got a = " + std::to_string(a);
    auto exceeds = [&](const Rational& bound) { return allow_boundary ? sigma > bound : sigma >= bound; };
    const Rational two_over_n = make_rational(2, n);
    if (exceeds(two_over_n))
        return "support sigma = " + to_string(sigma) + " violates sigma <= 2/n = " + to_string(two_over_n);
    if (a < n) {
        const Rational bound(1, n - a);
        if (exceeds(bound))
            return "support sigma = " + to_string(sigma) + " violates sigma <= 1/(n-a) = " + to_string(bound);
    }
    return std::nullopt;
}

// Smallest admissible a for (sigma, n); throws when sigma exceeds 2/n.
inline unsigned minimal_a(const Rational& sigma, unsigned n) {
    if (n == 0) throw DomainError("moment order n must be at least 1");
    for (unsigned a = 1; a <= (n + 1) / 2; ++a)
        if (!validity_violation(sigma, n, a)) return a;
    throw DomainError("unsupported support: sigma = " + to_string(sigma) + " exceeds 2/n = " +
                      to_string(make_rational(2, n)));
}

// Density of |Y| when Y has density p.
inline PiecewisePoly fold_absolute(const PiecewisePoly& p) {
    if (p.is_zero()) return {};
    PiecewisePoly out;
    if (p.support_hi() > 0) out = restrict(p, 0, p.support_hi());
    if (p.support_lo() < 0) out = add(out, reflect(restrict(p, p.support_lo(), 0)));
    return out;
}

// Exact closed-form quantities for one test function. Convolution powers are cached,
// so a calculator is cheap to query repeatedly but must not be shared between threads.
class MomentCalculator {
public:
    explicit MomentCalculator(TestFunction tf)
        : tf_(std::move(tf)),
          folded_(fold_absolute(tf_.fhat)),
          positive_half_(tf_.fhat.support_hi() > 0 ? restrict(tf_.fhat, 0, tf_.fhat.support_hi()) : PiecewisePoly{}),
          phi0_(total_integral(tf_.fhat)),
          fhat0_(evaluate(tf_.fhat, 0)) {}

    const TestFunction& test_function() const { return tf_; }
    const Rational& phi0() const { return phi0_; }
    const Rational& fhat0() const { return fhat0_; }

    // Fourier transform of phi^k.
    const PiecewisePoly& psi(unsigned k) {
        if (k == 0) throw DomainError("psi needs k >= 1");
        if (auto it = psi_.find(k); it != psi_.end()) return it->second;
        PiecewisePoly value = k == 1 ? tf_.fhat : convolve(psi(k - 1), tf_.fhat);
        return psi_.emplace(k, std::move(value)).first->second;
    }

    // Density of |x_1| + ... + |x_plus| - |x'_1| - ... - |x'_minus| under fhat weights.
    const PiecewisePoly& signed_fold(unsigned plus, unsigned minus) {
        return cached_power(folds_, folded_, plus, minus);
    }

    // Density of y_1 + ... + y_plus - y'_1 - ... - y'_minus with all y restricted to [0, inf).
    const PiecewisePoly& half_line_sum(unsigned plus, unsigned minus) {
        return cached_power(halves_, positive_half_, plus, minus);
    }

    Rational sigma_phi_sq() const {
        const PiecewisePoly sq = multiply(tf_.fhat, tf_.fhat);
        return 2 * total_integral(multiply_by_monomial(fold_absolute(sq), 1));
    }

    // T_k(A) = integral of phi^k(x) sin(2 pi A x) / (2 pi x), i.e. the signed integral of psi_k over [0, A].
    Rational sine_transform(unsigned k, const Rational& A) {
        const PiecewisePoly& p = psi(k);
        return A >= 0 ? definite_integral(p, 0, A) : -definite_integral(p, A, 0);
    }

    // s -> T_k(1 + s) on [lo, hi).
    PiecewisePoly shifted_sine_transform(unsigned k, const Rational& lo, const Rational& hi) {
        const PiecewisePoly& p = psi(k);
        const Rational at_zero = definite_integral(p, p.support_lo(), 0);
        PiecewisePoly cum = cumulative_on(p, 1 + lo, 1 + hi);
        cum = add(cum, PiecewisePoly::constant(1 + lo, 1 + hi, -at_zero));
        return translate(cum, -1);
    }

    // I(alpha, delta) for moment order n: phi^{n-alpha-delta} against the signed fold of the
    // remaining alpha + delta variables.
    Rational I_integral(unsigned n, unsigned alpha, unsigned delta) {
        if (alpha + delta >= n) throw DomainError("I_integral needs alpha + delta < n");
        const unsigned k = n - alpha - delta;
        if (alpha + delta == 0) return sine_transform(k, 1);
        const PiecewisePoly& rho = signed_fold(alpha, delta);
        if (rho.is_zero()) return 0;
        return total_integral(multiply(rho, shifted_sine_transform(k, rho.support_lo(), rho.support_hi())));
    }

    // V(m, l): T_{m-l}(1 + |x_1| + ... + |x_l|) averaged against fhat weights.
    Rational V(unsigned m, unsigned ell) { return I_integral(m, ell, 0); }

    Rational R(unsigned m, unsigned i) {
        if (i < 1 || i > m) throw DomainError("R(m, i) needs 1 <= i <= m, got m = " + std::to_string(m) +
                                              ", i = " + std::to_string(i));
        const Rational half_phi0_pow = pow(phi0_, m) / 2;
        Rational sum = 0;
        for (unsigned ell = 0; ell < i; ++ell) {
            const Rational term = Rational(binomial(m, ell)) * (V(m, ell) - half_phi0_pow);
            sum += sign_pow(ell) * term;
        }
        return sign_pow(m + 1) * pow2(m - 1) * sum;
    }

    Rational S(unsigned n, unsigned a) {
        if (auto why = validity_violation(tf_.sigma, n, a)) throw DomainError(*why);
        const Rational half_var = sigma_phi_sq() / 2;
        Rational sum = 0;
        for (unsigned ell = 0; 2 * ell <= a - 1; ++ell) {
            const Rational coeff(factorial(n) / (factorial(n - 2 * ell) * factorial(ell)));
            sum += coeff * R(n - 2 * ell, a - 2 * ell) * pow(half_var, ell);
        }
        return sum;
    }

    // 1_{n even} (n-1)!! sigma_phi^n, the Gaussian moment.
    Rational gaussian_moment(unsigned n) const {
        if (n % 2 == 1) return 0;
        return Rational(double_factorial(static_cast<long>(n) - 1)) * pow(sigma_phi_sq(), n / 2);
    }

    Rational predicted_moment(const MomentSpec& spec) {
        const Rational s = S(spec.n, spec.a);
        return gaussian_moment(spec.n) + (spec.sign == Sign::plus ? s : Rational(-s));
    }

    Rational predicted_moment(unsigned n, Sign sign) { return predicted_moment({n, minimal_a(tf_.sigma, n), sign}); }

    // fhat(0) + (1/2) integral of fhat over [-1, 1].
    Rational mean_value() const { return fhat0_ + definite_integral(tf_.fhat, -1, 1) / 2; }

    // X(xi_l): mass of y_1 + ... + y_{n-l} - y_{n-l+1} - ... - y_n > 1 over the positive orthant.
    Rational X_xi(unsigned n, unsigned ell) {
        if (ell > n) throw DomainError("X_xi needs ell <= n");
        if (n == 0) return 0;
        const PiecewisePoly& d = half_line_sum(n - ell, ell);
        if (d.is_zero() || d.support_hi() <= 1) return 0;
        return definite_integral(d, 1, d.support_hi());
    }

    // bar X(xi_l) by the sign-pattern expansion over X values.
    Rational bar_X_from_orthants(unsigned n, unsigned ell) {
        Rational sum = 0;
        for (unsigned i = 0; i + ell <= n; ++i) sum += Rational(binomial(n - ell, i)) * X_xi(n, i + ell);
        return pow2(ell + 1) * sum;
    }

    // bar X(xi_l) = phi(0)^n - 2 V(n, l).
    Rational bar_X_from_sine(unsigned n, unsigned ell) {
        if (ell >= n) throw DomainError("bar_X needs ell < n");
        return pow(phi0_, n) - 2 * V(n, ell);
    }

    Rational bar_X_xi(unsigned n, unsigned ell) {
        Rational a = bar_X_from_orthants(n, ell);
        Rational b = bar_X_from_sine(n, ell);
        if (a != b)
            throw InvariantError("bar X(xi_" + std::to_string(ell) + ") disagrees between routes: " + to_string(a) +
                                 " vs " + to_string(b));
        return a;
    }

    Rational Q_via_classes(unsigned n, unsigned a) {
        Rational sum = 0;
        for (unsigned ell = 0; ell < a; ++ell) sum += sign_pow(ell) * Rational(binomial(n, ell)) * X_xi(n, ell);
        return sign_pow(n) * pow2(n - 1) * sum;
    }

    Rational Q_via_bar(unsigned n, unsigned a) {
        Rational sum = 0;
        for (unsigned t = 0; t < a; ++t) sum += sign_pow(t) * Rational(binomial(n, t)) * bar_X_xi(n, t);
        return sign_pow(n) * pow2(n) / 4 * sum;
    }

    static Rational pow(const Rational& x, unsigned e) {
        Rational r = 1;
        for (unsigned i = 0; i < e; ++i) r *= x;
        return r;
    }

    static Rational pow2(unsigned e) {
        mpz_class r = 1;
        r <<= e;
        return Rational(r);
    }

private:
    using PowerCache = std::map<std::pair<unsigned, unsigned>, PiecewisePoly>;

    const PiecewisePoly& cached_power(PowerCache& cache, const PiecewisePoly& base, unsigned plus, unsigned minus) {
        if (plus + minus == 0) throw DomainError("empty convolution power");
        const auto key = std::make_pair(plus, minus);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        PiecewisePoly value;
        if (minus > 0) {
            const PiecewisePoly mirrored = reflect(base);
            value = plus + minus == 1 ? mirrored : convolve(cached_power(cache, base, plus, minus - 1), mirrored);
        } else {
            value = plus == 1 ? base : convolve(cached_power(cache, base, plus - 1, 0), base);
        }
        return cache.emplace(key, std::move(value)).first->second;
    }

    TestFunction tf_;
    PiecewisePoly folded_;
    PiecewisePoly positive_half_;
    Rational phi0_;
    Rational fhat0_;
    std::map<unsigned, PiecewisePoly> psi_;
    PowerCache folds_;
    PowerCache halves_;
};

// Free-function forms; each builds a fresh calculator.
inline Rational sigma_phi_sq(const TestFunction& tf) { return MomentCalculator(tf).sigma_phi_sq(); }
inline Rational sine_transform(const TestFunction& tf, unsigned k, const Rational& A) {
    return MomentCalculator(tf).sine_transform(k, A);
}
inline Rational R_moment(const TestFunction& tf, unsigned m, unsigned i) { return MomentCalculator(tf).R(m, i); }
inline Rational S_correction(const TestFunction& tf, unsigned n, unsigned a) { return MomentCalculator(tf).S(n, a); }
inline Rational predicted_centered_moment(const TestFunction& tf, const MomentSpec& spec) {
    return MomentCalculator(tf).predicted_moment(spec);
}
inline Rational mean_value(const TestFunction& tf) { return MomentCalculator(tf).mean_value(); }
inline Rational I_integral(const TestFunction& tf, unsigned n, unsigned alpha, unsigned delta) {
    return MomentCalculator(tf).I_integral(n, alpha, delta);
}
inline Rational X_xi(const TestFunction& tf, unsigned n, unsigned ell) { return MomentCalculator(tf).X_xi(n, ell); }
inline Rational bar_X_xi(const TestFunction& tf, unsigned n, unsigned ell) { return MomentCalculator(tf).bar_X_xi(n, ell); }
inline Rational Q_n_via_classes(const TestFunction& tf, unsigned n, unsigned a) {
    return MomentCalculator(tf).Q_via_classes(n, a);
}

}  // namespace lowzero
