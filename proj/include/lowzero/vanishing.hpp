#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/moments.hpp"
#include "lowzero/testfn.hpp"

namespace lowzero::vanishing {

// Earlier bounds for the proportion vanishing to order at least 5, quoted for comparison.
inline const Rational prior_bound_weak{1, 32};
inline const Rational prior_bound_strong{1, 49};

struct VanishingQuery {
    unsigned r = 5;  // order threshold
    unsigned n = 4;  // even moment order
    Rational sigma{1, 2};
    Sign sign = Sign::minus;
};

struct VanishingResult {
    VanishingQuery query;
    Rational moment;     // predicted centered n-th moment
    Rational threshold;  // r phi(0) - fhat(0) - phi(0)/2
    Rational bound;      // moment / threshold^n
    std::vector<std::string> assumptions;
};

inline std::optional<std::string> query_violation(const VanishingQuery& q) {
    if (q.r < 1) return "order threshold r must be at least 1";
    if (q.n == 0 || q.n % 2 == 1) return "moment order n = " + std::to_string(q.n) + " must be even and positive";
    if (q.sigma <= 0) return "support sigma must be positive";
    if (q.sigma > make_rational(2, q.n))
        return "support sigma = " + to_string(q.sigma) + " exceeds 2/n = " + to_string(make_rational(2, q.n));
    const TestFunction tf = fejer(q.sigma);
    const Rational phi0 = phi_at_zero(tf);
    const Rational t = q.r * phi0 - fhat_at_zero(tf) - phi0 / 2;
    if (t <= 0) return "threshold r - 1/sigma - 1/2 = " + to_string(t) + " is not positive";
    return std::nullopt;
}

// Markov bound: Pr(order >= r) * threshold^n <= E[(Z - mean)^n].
inline VanishingResult vanishing_bound(const VanishingQuery& q) {
    if (auto why = query_violation(q)) throw DomainError(*why);
    const TestFunction tf = fejer(q.sigma);
    MomentCalculator calc(tf);
    VanishingResult out{q, calc.predicted_moment(q.n, q.sign), 0, 0, {}};
    const Rational phi0 = phi_at_zero(tf);
    out.threshold = q.r * phi0 - fhat_at_zero(tf) - phi0 / 2;
    out.threshold.canonicalize();
    out.bound = out.moment / MomentCalculator::pow(out.threshold, q.n);
    out.bound.canonicalize();
    out.assumptions.push_back("test function fejer:" + to_string(q.sigma) + ", admissible a = " +
                              std::to_string(minimal_a(q.sigma, q.n)));
    if (q.n == 4 && q.r < 5)
        out.assumptions.push_back("r = " + std::to_string(q.r) +
                                  " < 5 with n = 4 lies outside the regime where the published bound was derived");
    if (q.sign == Sign::plus)
        out.assumptions.push_back("plus-sign family: same formula, no published value to validate against");
    return out;
}

struct SweepRow {
    unsigned n = 0;
    Rational sigma;
    std::optional<VanishingResult> result;
    std::string skip_reason;
};

struct SweepTable {
    unsigned r = 0;
    Sign sign = Sign::minus;
    std::vector<SweepRow> rows;
    std::optional<std::size_t> best;  // row index of the smallest bound
};

inline SweepTable bound_sweep(unsigned r, const std::vector<unsigned>& ns, const std::vector<Rational>& sigmas,
                              Sign sign) {
    SweepTable table{r, sign, {}, std::nullopt};
    for (unsigned n : ns) {
        for (const Rational& s : sigmas) {
            SweepRow row{n, s, std::nullopt, {}};
            const VanishingQuery q{r, n, s, sign};
            if (auto why = query_violation(q)) row.skip_reason = *why;
            else row.result = vanishing_bound(q);
            table.rows.push_back(std::move(row));
        }
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (!table.rows[i].result) continue;
        if (!table.best || table.rows[i].result->bound < table.rows[*table.best].result->bound) table.best = i;
    }
    return table;
}

}  // namespace lowzero::vanishing
