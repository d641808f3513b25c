#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lowzero/combinatorics.hpp"
#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/testfn.hpp"

namespace lowzero::sop {

using Mask = std::uint32_t;  // bit j-1 stands for index j

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline int popcount(Mask m) { return std::popcount(m); }

// (m, lambda_1..lambda_m, eps_1..eps_n); eps_j = -1 exactly when bit j-1 of negatives is set.
struct SystemOfParameters {
    int n = 0;
    std::vector<int> lambdas;
    Mask negatives = 0;

    int m() const { return static_cast<int>(lambdas.size()); }

    // lambda_1 + ... + lambda_ell
    int prefix(int ell) const {
        int s = 0;
        for (int k = 0; k < ell; ++k) s += lambdas[static_cast<std::size_t>(k)];
        return s;
    }

    void validate() const {
        if (lambdas.empty()) throw DomainError("system of parameters needs m >= 1");
        for (int l : lambdas)
            if (l < 1) throw DomainError("composition parts must be positive");
        if (prefix(m()) != n) throw DomainError("composition must sum to n");
        if ((negatives & ~full_mask(n)) != 0) throw DomainError("sign vector longer than n");
    }
};

inline int eta(const SystemOfParameters& S, int ell, int j) {
    if (ell < 1 || ell > S.m() || j < 1 || j > S.n)
        throw DomainError("eta(ell, j) out of range: ell = " + std::to_string(ell) + ", j = " + std::to_string(j));
    return j <= S.prefix(ell) ? 1 : -1;
}

inline int epsilon(const SystemOfParameters& S, int j) { return (S.negatives >> (j - 1)) & 1U ? -1 : 1; }

struct JEntry {
    int ell = 0;
    Mask set = 0;
    int zeta = 0;
};

// Indices ell whose sign pattern has at most a-1 entries of one sign; J_ell is that minority set.
inline std::vector<JEntry> j_sets(const SystemOfParameters& S, int a) {
    std::vector<JEntry> out;
    const Mask full = full_mask(S.n);
    for (int ell = 1; ell <= S.m(); ++ell) {
        const Mask plus = full_mask(S.prefix(ell)) ^ S.negatives;  // eta * eps = +1
        const Mask minus = full & ~plus;
        const bool case_plus = popcount(plus) <= a - 1;
        const bool case_minus = popcount(minus) <= a - 1;
        if (case_plus && case_minus) throw InvariantError("both sign cases hold; needs a <= ceil(n/2)");
        if (case_plus) out.push_back({ell, plus, +1});
        else if (case_minus) out.push_back({ell, minus, -1});
    }
    return out;
}

// Inclusion-minimal members of J(S), kept in ell order.
inline std::vector<JEntry> i_min_entries(const std::vector<JEntry>& js) {
    std::vector<JEntry> out;
    for (const auto& x : js) {
        const bool dominated = std::any_of(js.begin(), js.end(), [&](const JEntry& y) {
            return y.set != x.set && (y.set & x.set) == y.set;
        });
        if (!dominated) out.push_back(x);
    }
    return out;
}

inline std::vector<Mask> i_min(const SystemOfParameters& S, int a) {
    std::vector<Mask> out;
    for (const auto& e : i_min_entries(j_sets(S, a))) out.push_back(e.set);
    return out;
}

// ((-1)^{m+1} / m) * n! / (lambda_1! ... lambda_m!)
inline Rational a_weight(const SystemOfParameters& S) {
    mpz_class denom = 1;
    for (int l : S.lambdas) denom *= factorial(static_cast<unsigned long>(l));
    Rational w(factorial(static_cast<unsigned long>(S.n)), denom * S.m());
    w.canonicalize();
    return S.m() % 2 == 1 ? w : Rational(-w);
}

// Unordered t-tuple of subsets, stored sorted.
using IndexTuple = std::vector<Mask>;

struct TClass {
    std::vector<Mask> canonical;
    int t() const { return static_cast<int>(canonical.size()); }
    auto operator<=>(const TClass&) const = default;
};

// Canonical orbit representative under relabeling of {1..n}. The orbit of a tuple is
// determined by how many indices share each membership pattern, up to reordering the
// tuple; we label indices block by block in pattern order for every ordering of the
// tuple and keep the lexicographically smallest sorted result.
inline TClass class_canonical(IndexTuple tuple, int n) {
    const std::size_t t = tuple.size();
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Mask> best;
    bool have = false;
    std::vector<int> count(std::size_t{1} << t);
    do {
        std::fill(count.begin(), count.end(), 0);
        for (int j = 0; j < n; ++j) {
            std::size_t sig = 0;
            for (std::size_t k = 0; k < t; ++k)
                if ((tuple[order[k]] >> j) & 1U) sig |= std::size_t{1} << k;
            ++count[sig];
        }
        std::vector<Mask> masks(t, 0);
        int label = 0;
        // Patterns in descending order so shared indices get the smallest labels.
        for (std::size_t sig = count.size(); sig-- > 0;) {
            for (int c = 0; c < count[sig]; ++c, ++label)
                for (std::size_t k = 0; k < t; ++k)
                    if ((sig >> k) & 1U) masks[k] |= Mask{1} << label;
        }
        std::sort(masks.begin(), masks.end());
        if (!have || masks < best) {
            best = masks;
            have = true;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return {best};
}

// --- exact linear feasibility -------------------------------------------------

// sum_k coeffs[k] x_k  (> if strict, >= otherwise)  rhs
struct LinearConstraint {
    std::vector<Rational> coeffs;
    Rational rhs;
    bool strict = false;

    auto key() const { return std::make_tuple(coeffs, rhs, strict); }
};

namespace detail {

inline LinearConstraint normalized(LinearConstraint c) {
    Rational scale = 0;
    for (const auto& v : c.coeffs)
        if (v != 0) {
            scale = abs(v);
            break;
        }
    if (scale == 0) scale = abs(c.rhs) == 0 ? Rational(1) : Rational(abs(c.rhs));
    for (auto& v : c.coeffs) v /= scale;
    c.rhs /= scale;
    return c;
}

struct ConstraintLess {
    bool operator()(const LinearConstraint& a, const LinearConstraint& b) const {
        if (a.strict != b.strict) return a.strict < b.strict;
        if (a.rhs != b.rhs) return a.rhs < b.rhs;
        return a.coeffs < b.coeffs;
    }
};

}  // namespace detail

// Fourier-Motzkin elimination with strictness tracking.
inline bool fm_feasible(std::vector<LinearConstraint> cons, std::size_t nvars) {
    for (std::size_t v = 0; v < nvars; ++v) {
        std::vector<LinearConstraint> pos, neg;
        std::set<LinearConstraint, detail::ConstraintLess> next;
        for (auto& c : cons) {
            if (c.coeffs[v] > 0) pos.push_back(std::move(c));
            else if (c.coeffs[v] < 0) neg.push_back(std::move(c));
            else next.insert(detail::normalized(std::move(c)));
        }
        for (const auto& p : pos)
            for (const auto& q : neg) {
                const Rational wp = -q.coeffs[v];
                const Rational wq = p.coeffs[v];
                LinearConstraint r;
                r.coeffs.resize(nvars);
                for (std::size_t k = 0; k < nvars; ++k) r.coeffs[k] = wp * p.coeffs[k] + wq * q.coeffs[k];
                r.coeffs[v] = 0;
                r.rhs = wp * p.rhs + wq * q.rhs;
                r.strict = p.strict || q.strict;
                next.insert(detail::normalized(std::move(r)));
            }
        cons.assign(next.begin(), next.end());
    }
    for (const auto& c : cons) {
        if (c.strict ? !(0 > c.rhs) : !(0 >= c.rhs)) return false;
    }
    return true;
}

// Is there y in [0, 1/(n-a)]^n with sum_{j not in I} y_j - sum_{i in I} y_i > 1 for every I in the tuple?
// Indices sharing a membership pattern are interchangeable, so each pattern class is one
// aggregated variable ranging over [0, count / (n-a)].
inline bool tuple_feasible(const IndexTuple& tuple, int n, int a) {
    if (a >= n) throw DomainError("tuple_feasible needs a < n");
    const Rational u(1, n - a);
    std::map<std::size_t, int> group_size;
    for (int j = 0; j < n; ++j) {
        std::size_t sig = 0;
        for (std::size_t k = 0; k < tuple.size(); ++k)
            if ((tuple[k] >> j) & 1U) sig |= std::size_t{1} << k;
        ++group_size[sig];
    }
    std::vector<std::size_t> sigs;
    std::vector<int> sizes;
    for (auto [sig, c] : group_size) {
        sigs.push_back(sig);
        sizes.push_back(c);
    }
    const std::size_t nv = sigs.size();
    std::vector<LinearConstraint> cons;
    for (std::size_t g = 0; g < nv; ++g) {
        LinearConstraint lo{std::vector<Rational>(nv), 0, false};
        lo.coeffs[g] = 1;
        cons.push_back(lo);
        LinearConstraint hi{std::vector<Rational>(nv), -u * sizes[g], false};
        hi.coeffs[g] = -1;
        cons.push_back(hi);
    }
    for (std::size_t k = 0; k < tuple.size(); ++k) {
        LinearConstraint c{std::vector<Rational>(nv), 1, true};
        for (std::size_t g = 0; g < nv; ++g) c.coeffs[g] = ((sigs[g] >> k) & 1U) ? -1 : 1;
        cons.push_back(c);
    }
    return fm_feasible(std::move(cons), nv);
}

// Searches the 2^n corners of the box for a point meeting every strict inequality.
inline bool vertex_witness(const IndexTuple& tuple, int n, int a) {
    const Rational u(1, n - a);
    for (Mask v = 0; v <= full_mask(n); ++v) {
        bool ok = true;
        for (Mask I : tuple) {
            const int outside = popcount(v & ~I);
            const int inside = popcount(v & I);
            if (!(u * (outside - inside) > 1)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
        if (v == full_mask(n)) break;
    }
    return false;
}

// --- generating-function identities -------------------------------------------

inline Rational soshnikov_coeff(int n) {
    if (n < 1) throw DomainError("soshnikov_coeff needs n >= 1");
    Rational total = 0;
    for (const auto& lam : all_compositions(n)) {
        mpz_class denom = static_cast<long>(lam.size());
        for (int l : lam) denom *= factorial(static_cast<unsigned long>(l));
        Rational term(1, denom);
        total += lam.size() % 2 == 1 ? term : Rational(-term);
    }
    return total;
}

inline Rational exp_neg_coeff(int n) {
    if (n < 0) throw DomainError("exp_neg_coeff needs n >= 0");
    if (n == 0) return 1;
    Rational total = 0;
    for (const auto& lam : all_compositions(n)) {
        mpz_class denom = 1;
        for (int l : lam) denom *= factorial(static_cast<unsigned long>(l));
        Rational term(1, denom);
        total += lam.size() % 2 == 0 ? term : Rational(-term);
    }
    return total;
}

inline mpz_class g_combin(long n, long f, long c, long d) {
    return binomial(n, f) - binomial(n - c, f - c) - binomial(n - d, f - d) + binomial(n - c - d, f - c - d);
}

// Left side of the m >= 2 one-class identity.
inline Rational single_simp_sum(int n, int f) {
    Rational sum = 0;
    for (int c = 0; c <= n; ++c)
        for (int d = 0; c + d <= n; ++d) {
            Rational term(g_combin(n, f, c, d),
                          factorial(static_cast<unsigned long>(n - c - d)) * factorial(static_cast<unsigned long>(c)) *
                              factorial(static_cast<unsigned long>(d)));
            term.canonicalize();
            sum += sign_pow(c + d + 1) * term;
        }
    return 2 * Rational(factorial(static_cast<unsigned long>(n))) * sign_pow(n) * sum;
}

inline Rational single_simp_closed(int n, int f) {
    return 2 * Rational(binomial(n, f)) * (sign_pow(n + f + 1) - 1);
}

inline bool verify_single_simp(int n, int f) { return single_simp_sum(n, f) == single_simp_closed(n, f); }

inline mpz_class h_combin(long f, long g, long mu1, long mud) {
    return binomial(f, g) - binomial(f - mu1, g - mu1) - binomial(f - mud, g) + binomial(f - mu1 - mud, g - mu1);
}

// Sum over compositions mu of f of (-1)^d / prod mu! times the chosen term of H (0 = all of H, 1..4 = single terms).
inline Rational h_partial(int f, int g, int which) {
    Rational total = 0;
    for (const auto& mu : all_compositions(f)) {
        const long m1 = mu.front(), md = mu.back();
        mpz_class term;
        switch (which) {
            case 0: term = h_combin(f, g, m1, md); break;
            case 1: term = binomial(f, g); break;
            case 2: term = binomial(f - m1, g - m1); break;
            case 3: term = binomial(f - md, g); break;
            case 4: term = binomial(f - m1 - md, g - m1); break;
            default: throw DomainError("h_partial: which must be 0..4");
        }
        mpz_class denom = 1;
        for (int x : mu) denom *= factorial(static_cast<unsigned long>(x));
        Rational r(term, denom);
        r.canonicalize();
        total += mu.size() % 2 == 0 ? r : Rational(-r);
    }
    return total;
}

inline bool verify_h_vanishes(int f, int g) { return h_partial(f, g, 0) == 0; }

// Sum over i of (-1)^i C(n,i) (q^2/(1-q))^i (q/(1-q))^{n-i} against q^n.
inline bool symmetric_transform_check(int n, const Rational& q) {
    if (q == 0 || abs(q) >= 1) throw DomainError("symmetric_transform_check needs 0 < |q| < 1");
    const Rational a = q * q / (1 - q), b = q / (1 - q);
    Rational lhs = 0, qn = 1;
    for (int i = 0; i <= n; ++i) {
        Rational term = Rational(binomial(n, i));
        for (int k = 0; k < i; ++k) term *= a;
        for (int k = 0; k < n - i; ++k) term *= b;
        lhs += sign_pow(i) * term;
    }
    for (int k = 0; k < n; ++k) qn *= q;
    return lhs == qn;
}

// --- brute-force enumeration over systems of parameters -----------------------

struct Enumeration {
    int n = 0, a = 0, t_max = 0;
    std::map<TClass, Rational> class_sums;            // sum of T(S,C) A(S), all S
    std::map<int, Rational> one_class_multi_block;    // f -> same sum restricted to m >= 2
    long systems = 0;
    long sign_condition_failures = 0;   // j in J_ell  <=>  eta(ell,j) eps_j = zeta_ell
    long uniqueness_failures = 0;       // one subset under two (ell, zeta)
    long minimality_mismatches = 0;     // block criterion vs inclusion minimality
    long cyclic_convention_cases = 0;   // ell = m where the wrapped block decides minimality
    std::vector<std::string> mismatch_log;

    void merge(const Enumeration& o) {
        for (const auto& [c, v] : o.class_sums) class_sums[c] += v;
        for (const auto& [f, v] : o.one_class_multi_block) one_class_multi_block[f] += v;
        systems += o.systems;
        sign_condition_failures += o.sign_condition_failures;
        uniqueness_failures += o.uniqueness_failures;
        minimality_mismatches += o.minimality_mismatches;
        cyclic_convention_cases += o.cyclic_convention_cases;
        mismatch_log.insert(mismatch_log.end(), o.mismatch_log.begin(), o.mismatch_log.end());
    }
};

inline std::string describe(const SystemOfParameters& S) {
    std::string s = "m=" + std::to_string(S.m()) + " lambda=(";
    for (std::size_t i = 0; i < S.lambdas.size(); ++i) s += (i ? "," : "") + std::to_string(S.lambdas[i]);
    s += ") eps=";
    for (int j = 1; j <= S.n; ++j) s += epsilon(S, j) > 0 ? '+' : '-';
    return s;
}

namespace detail {

inline Mask block_mask(const SystemOfParameters& S, int ell) {  // [Lambda_{ell-1}+1, Lambda_ell]
    return full_mask(S.prefix(ell)) & ~full_mask(S.prefix(ell - 1));
}

inline void visit_system(const SystemOfParameters& S, int a, int t_max, Enumeration& acc) {
    ++acc.systems;
    const auto js = j_sets(S, a);
    for (const auto& e : js)
        for (int j = 1; j <= S.n; ++j) {
            const bool in = (e.set >> (j - 1)) & 1U;
            if (in != (eta(S, e.ell, j) * epsilon(S, j) == e.zeta)) ++acc.sign_condition_failures;
        }
    for (std::size_t x = 0; x < js.size(); ++x)
        for (std::size_t y = x + 1; y < js.size(); ++y)
            if (js[x].set == js[y].set) ++acc.uniqueness_failures;

    const auto mins = i_min_entries(js);
    if (S.m() >= 2) {
        for (const auto& e : js) {
            const int f = popcount(e.set);
            if (f < 1) continue;
            const int next = e.ell == S.m() ? 1 : e.ell + 1;
            const Mask own = block_mask(S, e.ell), following = block_mask(S, next);
            const bool by_blocks = (own & ~e.set) != 0 && (following & ~e.set) != 0;
            const bool by_inclusion =
                std::any_of(mins.begin(), mins.end(), [&](const JEntry& m) { return m.ell == e.ell; });
            if (e.ell == S.m() && (following & ~e.set) == 0) ++acc.cyclic_convention_cases;
            if (by_blocks != by_inclusion) {
                ++acc.minimality_mismatches;
                if (acc.mismatch_log.size() < 20)
                    acc.mismatch_log.push_back(describe(S) + " ell=" + std::to_string(e.ell));
            }
        }
    }

    const Rational w = a_weight(S);
    const int r = static_cast<int>(mins.size());
    std::vector<Mask> sets;
    for (const auto& e : mins) sets.push_back(e.set);
    // every t-subset of I(S)
    for (int t = 1; t <= std::min(t_max, r); ++t) {
        std::vector<int> idx(static_cast<std::size_t>(t));
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            IndexTuple tuple;
            for (int i : idx) tuple.push_back(sets[static_cast<std::size_t>(i)]);
            acc.class_sums[class_canonical(tuple, S.n)] += w;
            if (t == 1 && S.m() >= 2) acc.one_class_multi_block[popcount(tuple[0])] += w;
            int k = t - 1;
            while (k >= 0 && idx[static_cast<std::size_t>(k)] == r - t + k) --k;
            if (k < 0) break;
            ++idx[static_cast<std::size_t>(k)];
            for (int q = k + 1; q < t; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
}

}  // namespace detail

// Visits all systems of parameters with sign vectors in [eps_lo, eps_hi), m ascending then
// compositions in lexicographic order.
inline Enumeration enumerate_range(int n, int a, int t_max, Mask eps_lo, Mask eps_hi) {
    Enumeration acc;
    acc.n = n;
    acc.a = a;
    acc.t_max = t_max;
    for (const auto& lam : all_compositions(n))
        for (Mask eps = eps_lo; eps < eps_hi; ++eps)
            detail::visit_system(SystemOfParameters{n, lam, eps}, a, t_max, acc);
    return acc;
}

inline Enumeration enumerate_systems(int n, int a, int t_max = 3, int shards = 1, int cap = 8) {
    if (n < 1) throw DomainError("enumeration needs n >= 1");
    if (n > cap) throw ResourceError("enumeration over n = " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
    if (a < 1 || a > (n + 1) / 2) throw DomainError("enumeration needs 1 <= a <= ceil(n/2)");
    const Mask total = Mask{1} << n;
    shards = std::clamp(shards, 1, static_cast<int>(total));
    std::vector<std::future<Enumeration>> parts;
    for (int s = 0; s < shards; ++s) {
        const Mask lo = static_cast<Mask>(static_cast<std::uint64_t>(total) * static_cast<std::uint64_t>(s) / static_cast<std::uint64_t>(shards));
        const Mask hi = static_cast<Mask>(static_cast<std::uint64_t>(total) * static_cast<std::uint64_t>(s + 1) / static_cast<std::uint64_t>(shards));
        parts.push_back(std::async(shards == 1 ? std::launch::deferred : std::launch::async,
                                   [=] { return enumerate_range(n, a, t_max, lo, hi); }));
    }
    Enumeration out;
    out.n = n;
    out.a = a;
    out.t_max = t_max;
    for (auto& p : parts) out.merge(p.get());  // exact addition: order does not matter
    return out;
}

inline TClass one_class(int f, int n) {
    IndexTuple t{full_mask(f)};
    return class_canonical(t, n);
}

// Sum over S of T(S, C) A(S) for one class.
inline Rational sum_TA(const Enumeration& e, const TClass& c) {
    auto it = e.class_sums.find(c);
    return it == e.class_sums.end() ? Rational(0) : it->second;
}

inline Rational sum_TA(int n, int a, const TClass& c, int cap = 8) {
    return sum_TA(enumerate_systems(n, a, c.t(), 1, cap), c);
}

inline Rational one_class_closed_form(int n, int f) { return 2 * sign_pow(n + f + 1) * Rational(binomial(n, f)); }

struct LemmaVerdict {
    explicit LemmaVerdict(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    bool pass = true;
    long checked = 0;
    std::vector<std::string> counterexamples;
};

struct CombinatReport {
    int n = 0, a = 0, t_max = 0;
    std::vector<LemmaVerdict> verdicts;
    Rational f0_value;  // reported, not judged
    long valid_classes = 0;
    long cyclic_convention_cases = 0;
    bool all_pass() const {
        return std::all_of(verdicts.begin(), verdicts.end(), [](const LemmaVerdict& v) { return v.pass; });
    }
};

inline std::string mask_string(Mask m, int n) {
    std::string s = "{";
    bool first = true;
    for (int j = 0; j < n; ++j)
        if ((m >> j) & 1U) {
            s += (first ? "" : ",") + std::to_string(j + 1);
            first = false;
        }
    return s + "}";
}

inline std::string class_string(const TClass& c, int n) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.canonical.size(); ++i) s += (i ? "," : "") + mask_string(c.canonical[i], n);
    return s + ")";
}

inline CombinatReport verify_combinatorics(int n, int a, int t_max = 3, int shards = 1, int cap = 8) {
    const Enumeration e = enumerate_systems(n, a, t_max, shards, cap);
    CombinatReport rep;
    rep.n = n;
    rep.a = a;
    rep.t_max = t_max;
    rep.cyclic_convention_cases = e.cyclic_convention_cases;

    LemmaVerdict signs{"sign-condition"};
    signs.checked = e.systems;
    signs.pass = e.sign_condition_failures == 0;
    if (!signs.pass) signs.counterexamples.push_back(std::to_string(e.sign_condition_failures) + " index mismatches");
    rep.verdicts.push_back(signs);

    LemmaVerdict unique{"unique-ell"};
    unique.checked = e.systems;
    unique.pass = e.uniqueness_failures == 0;
    if (!unique.pass) unique.counterexamples.push_back(std::to_string(e.uniqueness_failures) + " repeated subsets");
    rep.verdicts.push_back(unique);

    LemmaVerdict blocks{"block-minimality"};
    blocks.checked = e.systems;
    blocks.pass = e.minimality_mismatches == 0;
    blocks.counterexamples = e.mismatch_log;
    rep.verdicts.push_back(blocks);

    LemmaVerdict one{"one-class-coefficient"};
    LemmaVerdict multi{"one-class-multi-block"};
    for (int f = 1; f <= a - 1; ++f) {
        const Rational got = sum_TA(e, one_class(f, n));
        const Rational want = one_class_closed_form(n, f);
        ++one.checked;
        if (got != want) {
            one.pass = false;
            one.counterexamples.push_back("f=" + std::to_string(f) + ": " + to_string(got) + " != " + to_string(want));
        }
        auto it = e.one_class_multi_block.find(f);
        const Rational part = it == e.one_class_multi_block.end() ? Rational(0) : it->second;
        ++multi.checked;
        if (part != single_simp_closed(n, f)) {
            multi.pass = false;
            multi.counterexamples.push_back("f=" + std::to_string(f) + ": " + to_string(part));
        }
    }
    rep.verdicts.push_back(one);
    rep.verdicts.push_back(multi);
    rep.f0_value = sum_TA(e, one_class(0, n));

    LemmaVerdict cancel{"multi-class-cancellation"};
    if (a < n) {
        for (const auto& [c, v] : e.class_sums) {
            if (c.t() < 2) continue;
            if (!tuple_feasible(c.canonical, n, a)) continue;
            ++rep.valid_classes;
            ++cancel.checked;
            if (v != 0) {
                cancel.pass = false;
                cancel.counterexamples.push_back(class_string(c, n) + " sums to " + to_string(v));
            }
        }
    }
    rep.verdicts.push_back(cancel);
    return rep;
}

// Coefficient identities: log(1 + (e^z - 1)) = z, 1/(1 + (e^z - 1)) = e^{-z}, the one-class
// multi-block sum, H = 0 summed over compositions, and the symmetric-function transform.
inline std::vector<LemmaVerdict> verify_generating_identities(int n_max = 12, int f_max = 10) {
    std::vector<LemmaVerdict> out;
    LemmaVerdict sosh{"soshnikov-coefficients"}, expo{"exp-neg-coefficients"};
    for (int n = 1; n <= n_max; ++n) {
        ++sosh.checked;
        const Rational want = n == 1 ? 1 : 0;
        if (soshnikov_coeff(n) != want) {
            sosh.pass = false;
            sosh.counterexamples.push_back("n=" + std::to_string(n) + ": " + to_string(soshnikov_coeff(n)));
        }
    }
    for (int n = 0; n <= n_max; ++n) {
        ++expo.checked;
        Rational want(sign_pow(n), factorial(static_cast<unsigned long>(n)));
        want.canonicalize();
        if (exp_neg_coeff(n) != want) {
            expo.pass = false;
            expo.counterexamples.push_back("n=" + std::to_string(n) + ": " + to_string(exp_neg_coeff(n)));
        }
    }
    LemmaVerdict simp{"single-simp"}, hvan{"h-vanishes"}, sym{"symmetric-transform"};
    for (int n = 1; n <= n_max; ++n)
        for (int f = 0; f < n && f <= f_max; ++f) {
            ++simp.checked;
            if (!verify_single_simp(n, f)) {
                simp.pass = false;
                simp.counterexamples.push_back("n=" + std::to_string(n) + " f=" + std::to_string(f));
            }
        }
    for (int f = 1; f <= f_max; ++f)
        for (int g = 0; g <= f; ++g) {
            ++hvan.checked;
            if (!verify_h_vanishes(f, g)) {
                hvan.pass = false;
                hvan.counterexamples.push_back("f=" + std::to_string(f) + " g=" + std::to_string(g));
            }
        }
    for (int n = 0; n <= n_max; ++n)
        for (const Rational& q : {Rational(1, 2), Rational(-1, 3), Rational(2, 7)}) {
            ++sym.checked;
            if (!symmetric_transform_check(n, q)) {
                sym.pass = false;
                sym.counterexamples.push_back("n=" + std::to_string(n) + " q=" + to_string(q));
            }
        }
    for (auto* v : {&sosh, &expo, &simp, &hvan, &sym}) out.push_back(std::move(*v));
    return out;
}

// --- Monte Carlo estimate of Q_n from the raw indicator kernel -----------------

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

// K(y) summed literally over every system of parameters; the constant part cancels on its own.
class IndicatorKernel {
public:
    explicit IndicatorKernel(int n) : n_(n) {
        for (const auto& lam : all_compositions(n)) {
            Block b;
            b.weight = a_weight(SystemOfParameters{n, lam, 0}).get_d();
            int acc = 0;
            for (int l : lam) {
                acc += l;
                b.prefix_ends.push_back(acc);
            }
            blocks_.push_back(std::move(b));
        }
    }

    double operator()(const std::vector<double>& y) const {
        std::vector<double> partial(static_cast<std::size_t>(n_) + 1);
        double total = 0.0;
        for (Mask eps = 0; eps <= full_mask(n_); ++eps) {
            partial[0] = 0.0;
            for (int j = 0; j < n_; ++j)
                partial[static_cast<std::size_t>(j) + 1] =
                    partial[static_cast<std::size_t>(j)] + (((eps >> j) & 1U) ? -y[static_cast<std::size_t>(j)] : y[static_cast<std::size_t>(j)]);
            const double whole = partial[static_cast<std::size_t>(n_)];
            for (const auto& b : blocks_) {
                bool inside = true;
                // sum_j eta(l,j) eps_j y_j = 2 * (prefix up to Lambda_l) - whole
                for (int end : b.prefix_ends)
                    if (std::abs(2.0 * partial[static_cast<std::size_t>(end)] - whole) > 1.0) {
                        inside = false;
                        break;
                    }
                if (inside) total += b.weight;
            }
            if (eps == full_mask(n_)) break;
        }
        return total;
    }

private:
    struct Block {
        double weight = 0.0;
        std::vector<int> prefix_ends;
    };
    int n_;
    std::vector<Block> blocks_;
};

// 2^{n-2} times the integral over [0, sigma]^n of prod fhat(y_i) K(y), by uniform sampling.
// The kernel does not depend on a; the parameter is kept so callers can pass the moment spec.
inline MonteCarloEstimate oracle_Qn_mc(const TestFunction& tf, int n, int /*a*/, long samples, std::uint64_t seed) {
    if (n < 1 || n > 4) throw DomainError("Monte Carlo kernel oracle supports 1 <= n <= 4");
    if (samples < 2) throw DomainError("need at least two samples");
    const IndicatorKernel kernel(n);
    const double sigma = tf.sigma.get_d();
    const double volume = std::pow(sigma, n) * std::ldexp(1.0, n - 2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, sigma);
    std::vector<double> y(static_cast<std::size_t>(n));
    double mean = 0.0, m2 = 0.0;
    for (long s = 0; s < samples; ++s) {
        double weight = volume;
        for (auto& v : y) {
            v = unif(rng);
            weight *= fhat_at(tf, v);
        }
        const double x = weight * kernel(y);
        const double delta = x - mean;  // Welford
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace lowzero::sop
