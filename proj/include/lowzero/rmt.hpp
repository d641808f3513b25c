#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/moments.hpp"
#include "lowzero/testfn.hpp"

namespace lowzero::rmt {

using Matrix = Eigen::MatrixXd;

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

inline Parity parse_parity(std::string_view s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    throw UsageError("unknown parity '" + std::string(s) + "' (expected even or odd)");
}

// SO(even) pairs with the plus-sign family, SO(odd) with the minus-sign family.
inline Sign family_sign(Parity p) { return p == Parity::even ? Sign::plus : Sign::minus; }

struct EnsembleSpec {
    unsigned M = 2;
    Parity parity = Parity::even;
    std::size_t samples = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (M < 2) throw DomainError("matrix dimension must be at least 2");
        if ((M % 2 == 0) != (parity == Parity::even))
            throw DomainError("M = " + std::to_string(M) + " does not have parity " + to_string(parity));
        if (samples == 0) throw DomainError("need at least one sample");
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for sample `index`; results never depend on how samples are sharded.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

// Gaussian matrix -> QR -> fix column signs so diag(R) > 0 -> flip last column if det = -1.
inline Matrix sample_haar_so(unsigned M, std::mt19937_64& rng) {
    if (M < 1) throw DomainError("matrix dimension must be positive");
    std::normal_distribution<double> normal;
    Matrix g(M, M);
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    if (q.determinant() < 0) q.col(q.cols() - 1) *= -1.0;
    return q;
}

struct EigenangleSample {
    std::vector<double> angles;  // in (-pi, pi], conjugates listed separately
};

// Eigenvalue arguments from the real Schur form: 2x2 rotation blocks and +-1 entries.
inline EigenangleSample eigenangles(const Matrix& U) {
    Eigen::RealSchur<Matrix> schur(U, false);
    if (schur.info() != Eigen::Success) throw ToleranceError("real Schur decomposition did not converge");
    const Matrix& T = schur.matrixT();
    EigenangleSample out;
    const Eigen::Index m = T.rows();
    for (Eigen::Index i = 0; i < m;) {
        if (i + 1 < m && T(i + 1, i) != 0.0) {
            const double re = 0.5 * (T(i, i) + T(i + 1, i + 1));
            const double half_gap = 0.5 * (T(i, i) - T(i + 1, i + 1));
            const double im = std::sqrt(std::max(0.0, -(half_gap * half_gap + T(i, i + 1) * T(i + 1, i))));
            const double a = std::atan2(im, re);
            out.angles.push_back(a);
            out.angles.push_back(-a);
            i += 2;
        } else {
            out.angles.push_back(T(i, i) < 0 ? std::numbers::pi : 0.0);
            i += 1;
        }
    }
    return out;
}

// fhat(k/M) for k = 0..floor(sigma M).
inline std::vector<double> fourier_weights(const TestFunction& tf, unsigned M) {
    const Rational cut = tf.sigma * M;
    const auto K = static_cast<unsigned>(mpz_class(cut.get_num() / cut.get_den()).get_ui());
    std::vector<double> w(K + 1);
    for (unsigned k = 0; k <= K; ++k) w[k] = evaluate(tf.fhat, make_rational(k, M)).get_d();
    return w;
}

// F_M(theta) = (1/M)[fhat(0) + 2 sum_{k=1}^{K} fhat(k/M) cos(k theta)].
inline double f_m_value(const std::vector<double>& weights, unsigned M, double theta) {
    double s = weights.empty() ? 0.0 : weights[0];
    for (std::size_t k = 1; k < weights.size(); ++k) s += 2.0 * weights[k] * std::cos(static_cast<double>(k) * theta);
    return s / M;
}

inline double f_m_value(const TestFunction& tf, unsigned M, double theta) {
    if (M < 1) throw DomainError("M must be positive");
    return f_m_value(fourier_weights(tf, M), M, theta);
}

inline double z_value(const TestFunction& tf, unsigned M, const EigenangleSample& sample) {
    const auto w = fourier_weights(tf, M);
    double z = 0.0;
    for (double a : sample.angles) z += f_m_value(w, M, a);
    return z;
}

// Z from cos(theta_n), the eigenvalues of (U + U^T)/2, using cos(k theta) = T_k(cos theta).
inline double z_from_cosines(const std::vector<double>& weights, unsigned M, const Eigen::VectorXd& cosines) {
    if (weights.empty()) return 0.0;
    double total = weights[0] * static_cast<double>(cosines.size());
    for (Eigen::Index i = 0; i < cosines.size(); ++i) {
        const double c = cosines[i];
        double prev = 1.0, cur = c, acc = 0.0;
        for (std::size_t k = 1; k < weights.size(); ++k) {
            acc += weights[k] * cur;
            const double next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
        }
        total += 2.0 * acc;
    }
    return total / M;
}

inline Eigen::VectorXd rotation_cosines(const Matrix& U) {
    const Matrix sym = 0.5 * (U + U.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw ToleranceError("symmetric eigensolver did not converge");
    return eig.eigenvalues().cwiseMax(-1.0).cwiseMin(1.0);
}

// Mean of Tr U^k over Haar SO(M): 1_{k even} below M; from k = M on, 0 for even M and 1 for odd M.
inline int trace_power_mean(unsigned M, unsigned k) {
    if (k == 0) return static_cast<int>(M);
    if (k < M) return k % 2 == 0 ? 1 : 0;
    return M % 2 == 0 ? 0 : 1;
}

// Exact E[Z] over SO(M): fhat(0) + (2/M) sum_{k=1}^{K} fhat(k/M) E Tr U^k.
inline Rational finite_mean(const TestFunction& tf, unsigned M) {
    const Rational cut = tf.sigma * M;
    const auto K = static_cast<unsigned>(mpz_class(cut.get_num() / cut.get_den()).get_ui());
    Rational s = 0;
    for (unsigned k = 1; k <= K; ++k)
        if (trace_power_mean(M, k) != 0) s += trace_power_mean(M, k) * evaluate(tf.fhat, make_rational(k, M));
    Rational out = evaluate(tf.fhat, 0) + 2 * s / M;
    out.canonicalize();
    return out;
}

inline unsigned default_threads() {
    if (const char* env = std::getenv("LOWZERO_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Z values for every test function on a shared stream of matrices: result[f][i].
inline std::vector<std::vector<double>> sample_z(const std::vector<TestFunction>& tfs, const EnsembleSpec& spec,
                                                 unsigned threads = 0) {
    spec.validate();
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, spec.samples));
    std::vector<std::vector<double>> weights;
    for (const auto& tf : tfs) weights.push_back(fourier_weights(tf, spec.M));
    std::vector<std::vector<double>> out(tfs.size(), std::vector<double>(spec.samples));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto rng = sample_stream(spec.seed, i);
            const Eigen::VectorXd c = rotation_cosines(sample_haar_so(spec.M, rng));
            for (std::size_t f = 0; f < tfs.size(); ++f) out[f][i] = z_from_cosines(weights[f], spec.M, c);
        }
    };
    if (threads <= 1) {
        work(0, spec.samples);
        return out;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (spec.samples + threads - 1) / threads;
    for (std::size_t b = 0; b < spec.samples; b += chunk) pool.emplace_back(work, b, std::min(spec.samples, b + chunk));
    pool.clear();
    return out;
}

enum class Centering { finite_m, limit };

struct MomentReport {
    unsigned n = 0;
    double empirical = 0.0;
    double stderr_ = 0.0;
    std::optional<Rational> predicted;  // empty when sigma is outside the window for this n
    std::string unsupported_reason;
    double z_score = 0.0;
    std::size_t samples = 0;
    double tolerance = 0.0;  // max(4 stderr, allowance)
    bool within_4se = false;
    bool within_tolerance = false;
};

struct RmtOptions {
    unsigned n_max = 4;
    Centering centering = Centering::finite_m;
    double allowance_c = 2.0;  // finite-size allowance c/M in the moment gate
    double mean_allowance = 0.05;
    unsigned threads = 0;
};

namespace detail {

inline void score(MomentReport& r, double target, double allowance) {
    r.z_score = r.stderr_ > 0 ? (r.empirical - target) / r.stderr_ : 0.0;
    const double dev = std::abs(r.empirical - target);
    r.tolerance = std::max(4.0 * r.stderr_, allowance);
    r.within_4se = dev <= 4.0 * r.stderr_;
    r.within_tolerance = dev <= r.tolerance;
}

// Mean and standard error of values.
inline std::pair<double, double> mean_and_stderr(const std::vector<double>& v) {
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : v) {
        ++k;
        const double d = x - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (x - mean);
    }
    const double var = k > 1 ? m2 / static_cast<double>(k - 1) : 0.0;
    return {mean, k > 0 ? std::sqrt(var / static_cast<double>(k)) : 0.0};
}

}  // namespace detail

inline double centre(const TestFunction& tf, unsigned M, Centering c) {
    return (c == Centering::finite_m ? finite_mean(tf, M) : mean_value(tf)).get_d();
}

// Centered moments 2..n_max of precomputed Z values.
inline std::vector<MomentReport> moments_from_samples(const TestFunction& tf, const EnsembleSpec& spec,
                                                      const std::vector<double>& z, const RmtOptions& opt = {}) {
    const double mu = centre(tf, spec.M, opt.centering);
    MomentCalculator calc(tf);
    std::vector<MomentReport> out;
    for (unsigned n = 2; n <= opt.n_max; ++n) {
        std::vector<double> powers(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) powers[i] = std::pow(z[i] - mu, static_cast<int>(n));
        MomentReport r;
        r.n = n;
        r.samples = z.size();
        std::tie(r.empirical, r.stderr_) = detail::mean_and_stderr(powers);
        try {
            r.predicted = calc.predicted_moment(n, family_sign(spec.parity));
            detail::score(r, r.predicted->get_d(), opt.allowance_c / spec.M);
        } catch (const DomainError& e) {
            r.unsupported_reason = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<MomentReport> estimate_centered_moments(const TestFunction& tf, const EnsembleSpec& spec,
                                                           const RmtOptions& opt = {}) {
    const auto z = sample_z({tf}, spec, opt.threads);
    return moments_from_samples(tf, spec, z[0], opt);
}

// Empirical E[Z] against the limiting mean fhat(0) + (1/2) int_{-1}^{1} fhat.
inline MomentReport mean_from_samples(const TestFunction& tf, const std::vector<double>& z, const RmtOptions& opt = {}) {
    if (tf.sigma > 1) throw DomainError("mean check needs sigma <= 1");
    MomentReport r;
    r.n = 1;
    r.samples = z.size();
    std::tie(r.empirical, r.stderr_) = detail::mean_and_stderr(z);
    r.predicted = mean_value(tf);
    detail::score(r, r.predicted->get_d(), opt.mean_allowance);
    return r;
}

inline MomentReport empirical_mean_check(const TestFunction& tf, const EnsembleSpec& spec, const RmtOptions& opt = {}) {
    const auto z = sample_z({tf}, spec, opt.threads);
    return mean_from_samples(tf, z[0], opt);
}

}  // namespace lowzero::rmt
