#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <initializer_list>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lowzero/errors.hpp"

namespace lowzero::arith {

using Complex = std::complex<double>;
using Int = std::int64_t;

inline constexpr Int factor_cap = 1'000'000;

// Prime factorization by trial division.
inline std::vector<std::pair<Int, int>> factorize(Int q) {
    if (q < 1) throw DomainError("factorize needs q >= 1");
    if (q > factor_cap) throw ResourceError("modulus " + std::to_string(q) + " above the trial-division cap");
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= q; ++p) {
        if (q % p) continue;
        int e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (q > 1) out.emplace_back(q, 1);
    return out;
}

inline Int ipow(Int b, int e) {
    Int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline Int euler_phi(Int q) {
    Int r = q;
    for (auto [p, e] : factorize(q)) r = r / p * (p - 1);
    return r;
}

inline int mobius(Int q) {
    int r = 1;
    for (auto [p, e] : factorize(q)) {
        if (e > 1) return 0;
        r = -r;
    }
    return r;
}

inline Int divisor_count(Int q) {
    Int r = 1;
    for (auto [p, e] : factorize(q)) r *= e + 1;
    return r;
}

inline std::vector<Int> divisors(Int q) {
    std::vector<Int> out{1};
    for (auto [p, e] : factorize(q)) {
        const std::size_t base = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Int mod(Int a, Int q) {
    Int r = a % q;
    return r < 0 ? r + q : r;
}

inline bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Multiplicative inverse of a modulo q; requires gcd(a, q) = 1.
inline Int inverse_mod(Int a, Int q) {
    Int old_r = mod(a, q), r = q, old_s = 1, s = 0;
    while (r != 0) {
        const Int quo = old_r / r;
        old_r -= quo * r;
        std::swap(old_r, r);
        old_s -= quo * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) throw DomainError("no inverse: gcd(" + std::to_string(a) + ", " + std::to_string(q) + ") != 1");
    return mod(old_s, q);
}

// e(k / N) = exp(2 pi i k / N), with k reduced first.
inline Complex unit_root(Int k, Int N) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(k, N)) / static_cast<double>(N);
    return {std::cos(angle), std::sin(angle)};
}

// (x, y^infinity): the largest divisor of x built from primes dividing y.
inline Int gcd_saturate(Int x, Int y) {
    if (x < 1 || y < 1) throw DomainError("gcd_saturate needs x, y >= 1");
    Int result = 1;
    Int g = std::gcd(x, y);
    while (g > 1) {
        result *= g;
        x /= g;
        g = std::gcd(x, g);
    }
    return result;
}

struct SumValue {
    Complex value;
    bool exact_integer = false;
};

// --- Ramanujan sums ----------------------------------------------------------

inline Int ramanujan_exponential(Int n, Int q) {
    Complex s = 0;
    for (Int a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) s += unit_root(a * mod(n, q), q);
    if (std::abs(s.imag()) > 1e-6) throw InvariantError("Ramanujan exponential sum not real");
    return static_cast<Int>(std::llround(s.real()));
}

inline Int ramanujan_divisor(Int n, Int q) {
    const Int g = std::gcd(mod(n, q) == 0 ? q : n, q);
    Int s = 0;
    for (Int d : divisors(g)) s += mobius(q / d) * d;
    return s;
}

inline Int ramanujan_von_sterneck(Int n, Int q) {
    const Int g = std::gcd(mod(n, q) == 0 ? q : n, q);
    const Int r = q / g;
    return mobius(r) * euler_phi(q) / euler_phi(r);
}

// Divisor-sum value; all three evaluations must agree.
inline Int ramanujan(Int n, Int q) {
    if (q < 1) throw DomainError("ramanujan needs q >= 1");
    const Int d = ramanujan_divisor(n, q);
    const Int e = ramanujan_exponential(n, q);
    const Int v = ramanujan_von_sterneck(n, q);
    if (d != e || d != v)
        throw InvariantError("Ramanujan sum R(" + std::to_string(n) + ", " + std::to_string(q) +
                             ") disagrees: divisor " + std::to_string(d) + ", exponential " + std::to_string(e) +
                             ", von Sterneck " + std::to_string(v));
    return d;
}

// --- Dirichlet characters -----------------------------------------------------

// chi(a) = e(exponent[a] / order) on units, 0 elsewhere. order = phi(q).
struct DirichletCharacter {
    Int q = 1;
    Int order = 1;
    std::vector<Int> exponent;  // -1 on non-units
    bool is_principal = true;
    bool is_primitive = true;

    Complex operator()(Int a) const {
        const Int k = exponent[static_cast<std::size_t>(mod(a, q))];
        return k < 0 ? Complex(0.0) : unit_root(k, order);
    }
    Complex conj(Int a) const { return std::conj((*this)(a)); }
};

namespace detail {

// One cyclic factor of the unit group: generator mod q_part and its order.
struct CyclicFactor {
    Int modulus;
    Int order;
    std::vector<Int> log;  // residue -> discrete log, -1 if not covered
};

inline Int primitive_root_prime_power(Int p, int e) {
    const Int pe = ipow(p, e);
    const Int phi = pe / p * (p - 1);
    const auto fs = factorize(phi);
    for (Int g = 2; g < pe; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [r, k] : fs) {
            Int x = 1;
            for (Int i = 0; i < phi / r; ++i) x = x * g % pe;
            if (x == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw InvariantError("no primitive root mod " + std::to_string(pe));
}

inline std::vector<CyclicFactor> unit_group_factors(Int p, int e) {
    const Int pe = ipow(p, e);
    std::vector<CyclicFactor> out;
    auto cyclic = [&](Int g, Int ord) {
        CyclicFactor c{pe, ord, std::vector<Int>(static_cast<std::size_t>(pe), -1)};
        Int x = 1;
        for (Int k = 0; k < ord; ++k) {
            c.log[static_cast<std::size_t>(x)] = k;
            x = x * g % pe;
        }
        return c;
    };
    if (p != 2) {
        out.push_back(cyclic(primitive_root_prime_power(p, e), pe / p * (p - 1)));
    } else if (e == 2) {
        out.push_back(cyclic(3, 2));
    } else if (e >= 3) {
        // units = {+1, -1} x <5>; logs assigned per residue
        const Int ord5 = pe / 4;
        CyclicFactor sign{pe, 2, std::vector<Int>(static_cast<std::size_t>(pe), -1)};
        CyclicFactor five{pe, ord5, std::vector<Int>(static_cast<std::size_t>(pe), -1)};
        Int x = 1;
        for (Int k = 0; k < ord5; ++k) {
            sign.log[static_cast<std::size_t>(x)] = 0;
            five.log[static_cast<std::size_t>(x)] = k;
            const Int neg = pe - x;
            sign.log[static_cast<std::size_t>(neg)] = 1;
            five.log[static_cast<std::size_t>(neg)] = k;
            x = x * 5 % pe;
        }
        out.push_back(std::move(sign));
        out.push_back(std::move(five));
    }
    return out;  // p = 2, e = 1: trivial group
}

inline std::vector<DirichletCharacter> build_characters(Int q) {
    const Int phi = euler_phi(q);
    std::vector<CyclicFactor> factors;
    for (auto [p, e] : factorize(q)) {
        auto fs = unit_group_factors(p, e);
        factors.insert(factors.end(), fs.begin(), fs.end());
    }
    // discrete-log vectors of every unit
    std::vector<std::vector<Int>> logs(static_cast<std::size_t>(q));
    for (Int a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        auto& v = logs[static_cast<std::size_t>(a)];
        for (const auto& f : factors) v.push_back(f.log[static_cast<std::size_t>(a % f.modulus)]);
    }
    std::vector<DirichletCharacter> out;
    std::vector<Int> choice(factors.size(), 0);
    while (true) {
        DirichletCharacter chi{q, phi, std::vector<Int>(static_cast<std::size_t>(q), -1), true};
        for (Int a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            Int k = 0;
            for (std::size_t i = 0; i < factors.size(); ++i)
                k += choice[i] * logs[static_cast<std::size_t>(a)][i] * (phi / factors[i].order);
            chi.exponent[static_cast<std::size_t>(a)] = mod(k, phi);
        }
        for (Int c : choice) chi.is_principal = chi.is_principal && c == 0;
        // primitive iff not trivial on the units congruent to 1 mod q/p for any prime p | q
        for (auto [p, e] : factorize(q)) {
            const Int d = q / p;
            bool induced = true;
            for (Int a = 1; a < q && induced; a += d)
                if (std::gcd(a, q) == 1 && chi.exponent[static_cast<std::size_t>(a)] != 0) induced = false;
            if (induced) chi.is_primitive = false;
        }
        out.push_back(std::move(chi));
        std::size_t i = 0;
        while (i < factors.size() && ++choice[i] == factors[i].order) choice[i++] = 0;
        if (i == factors.size()) break;
    }
    return out;
}

}  // namespace detail

// All phi(q) characters mod q, principal first; tables are built once per modulus.
inline std::shared_ptr<const std::vector<DirichletCharacter>> enumerate_characters(Int q) {
    if (q < 1) throw DomainError("enumerate_characters needs q >= 1");
    static std::mutex lock;
    static std::map<Int, std::shared_ptr<const std::vector<DirichletCharacter>>> cache;
    {
        std::lock_guard guard(lock);
        if (auto it = cache.find(q); it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const std::vector<DirichletCharacter>>(detail::build_characters(q));
    std::lock_guard guard(lock);
    return cache.emplace(q, std::move(built)).first->second;
}

inline Complex gauss_sum_raw(const DirichletCharacter& chi, Int n) {
    Complex s = 0;
    for (Int a = 0; a < chi.q; ++a) {
        const Complex c = chi(a);
        if (c != Complex(0.0)) s += c * unit_root(a * mod(n, chi.q), chi.q);
    }
    return s;
}

// |G_chi(n)| <= sqrt(q) is a theorem when chi is primitive or (n, q) = 1; an imprimitive
// character can exceed it otherwise (principal chi mod q at n = 0 gives phi(q)).
inline bool gauss_bound_applies(const DirichletCharacter& chi, Int n) {
    return chi.is_primitive || std::gcd(mod(n, chi.q), chi.q) == 1;
}

// G_chi(n) = sum over a mod q of chi(a) e(a n / q); the sqrt(q) bound is enforced where it applies.
inline SumValue gauss_sum(const DirichletCharacter& chi, Int n) {
    const Complex s = gauss_sum_raw(chi, n);
    if (gauss_bound_applies(chi, n) && std::abs(s) > std::sqrt(static_cast<double>(chi.q)) + 1e-9)
        throw InvariantError("Gauss sum exceeds sqrt(q) for q = " + std::to_string(chi.q) + ", n = " + std::to_string(n));
    return {s, false};
}

inline double kloosterman_bound(Int m, Int n, Int q) {
    const Int g = std::gcd(std::gcd(m, n), q);
    const Int qm = q / std::gcd(m, q), qn = q / std::gcd(n, q);
    return static_cast<double>(g) * std::sqrt(static_cast<double>(std::min(qm, qn))) *
           static_cast<double>(divisor_count(q));
}

// Unchecked Kloosterman sum, real part.
inline double kloosterman_raw(Int m, Int n, Int q) {
    Complex s = 0;
    for (Int d = 1; d <= q; ++d) {
        if (std::gcd(d, q) != 1) continue;
        s += unit_root(mod(m, q) * d + mod(n, q) * inverse_mod(d, q), q);
    }
    if (std::abs(s.imag()) > 1e-9) throw InvariantError("Kloosterman sum not real for q = " + std::to_string(q));
    return s.real();
}

// S(m, n; q) with the bound (m,n,q) sqrt(min(q/(m,q), q/(n,q))) tau(q) enforced.
inline SumValue kloosterman(Int m, Int n, Int q) {
    if (q < 1) throw DomainError("kloosterman needs q >= 1");
    const double v = kloosterman_raw(m, n, q);
    if (std::abs(v) > kloosterman_bound(m, n, q) + 1e-9)
        throw InvariantError("Kloosterman bound violated for (" + std::to_string(m) + ", " + std::to_string(n) +
                             "; " + std::to_string(q) + ")");
    return {Complex(v, 0.0), false};
}

struct FactorizationCheck {
    double lhs = 0.0;
    Complex rhs;
    bool agree = false;
};

// S(m^2, N Q; N b) against -(1/phi(b)) sum_chi G_chi(m^2) G_chi(r) conj(chi)(Q/r) chi(N), r = (Q, b^inf).
inline FactorizationCheck kloosterman_factorization(Int N, Int b, Int Q, Int m) {
    if (!is_prime(N)) throw DomainError("N must be prime");
    if (b < 1 || Q < 1 || m < 1) throw DomainError("b, Q, m must be positive");
    if (b % N == 0 || Q % N == 0 || m % N == 0) throw DomainError("N must not divide b, Q or m");
    FactorizationCheck out;
    out.lhs = kloosterman(m * m, N * Q, N * b).value.real();
    const Int r = gcd_saturate(Q, b);
    Complex sum = 0;
    for (const auto& chi : *enumerate_characters(b))
        sum += gauss_sum(chi, m * m).value * gauss_sum(chi, r).value * chi.conj(Q / r) * chi(N);
    out.rhs = -sum / static_cast<double>(euler_phi(b));
    out.agree = std::abs(out.rhs - Complex(out.lhs, 0.0)) < 1e-6;
    return out;
}

inline bool verify_kloosterman_factorization(Int N, Int b, Int Q, Int m) {
    return kloosterman_factorization(N, b, Q, m).agree;
}

struct IdentityVerdict {
    explicit IdentityVerdict(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    bool pass = true;
    bool informational = false;  // reported, excluded from the overall verdict
    long checked = 0;
    long failures = 0;
    std::vector<std::string> counterexamples;  // first few only
    std::string note;

    void fail(std::string what) {
        pass = false;
        ++failures;
        if (counterexamples.size() < 8) counterexamples.push_back(std::move(what));
    }
};

struct ArithOptions {
    Int ramanujan_max = 200;  // 1 <= n, q <= this
    Int gauss_qmax = 50;      // all characters mod q, 0 <= n <= gauss_qmax
    Int kloosterman_qmax = 100;
    Int kloosterman_mnmax = 20;
    bool factorization_sweep = true;  // N in {3,5,7}, b <= 20, Q <= 30, m <= 5
    unsigned shards = 1;
};

struct ArithReport {
    std::vector<IdentityVerdict> verdicts;
    bool all_pass() const {
        return std::all_of(verdicts.begin(), verdicts.end(),
                           [](const IdentityVerdict& v) { return v.pass || v.informational; });
    }
};

namespace detail {

template <class Body>
IdentityVerdict sharded(std::string name, Int lo, Int hi, unsigned shards, Body body) {
    shards = std::max(1u, shards);
    std::vector<std::future<IdentityVerdict>> parts;
    for (unsigned s = 0; s < shards; ++s)
        parts.push_back(std::async(shards == 1 ? std::launch::deferred : std::launch::async, [=] {
            IdentityVerdict v{name};
            for (Int q = lo + s; q <= hi; q += shards) body(q, v);
            return v;
        }));
    IdentityVerdict out{std::move(name)};
    for (auto& p : parts) {
        IdentityVerdict v = p.get();
        out.checked += v.checked;
        out.failures += v.failures;
        out.pass = out.pass && v.pass;
        for (auto& c : v.counterexamples)
            if (out.counterexamples.size() < 8) out.counterexamples.push_back(std::move(c));
    }
    return out;
}

}  // namespace detail

inline ArithReport verify_arithmetic(const ArithOptions& opt = {}) {
    ArithReport rep;
    auto key = [](std::initializer_list<Int> xs) {
        std::string s = "(";
        for (Int x : xs) s += (s.size() > 1 ? "," : "") + std::to_string(x);
        return s + ")";
    };

    rep.verdicts.push_back(detail::sharded("ramanujan-three-way", 1, opt.ramanujan_max, opt.shards,
                                           [&](Int q, IdentityVerdict& v) {
        for (Int n = 1; n <= opt.ramanujan_max; ++n) {
            ++v.checked;
            const Int d = ramanujan_divisor(n, q);
            if (d != ramanujan_exponential(n, q) || d != ramanujan_von_sterneck(n, q)) v.fail("(n,q)=" + key({n, q}));
        }
    }));

    rep.verdicts.push_back(detail::sharded("character-orthogonality", 1, opt.gauss_qmax, opt.shards,
                                           [&](Int q, IdentityVerdict& v) {
        const auto& chars = *enumerate_characters(q);
        ++v.checked;
        if (static_cast<Int>(chars.size()) != euler_phi(q)) v.fail("q=" + std::to_string(q) + ": wrong count");
        const double phi = static_cast<double>(euler_phi(q));
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = 0; j < chars.size(); ++j) {
                Complex s = 0;
                for (Int a = 0; a < q; ++a) s += chars[i](a) * chars[j].conj(a);
                ++v.checked;
                if (std::abs(s - Complex(i == j ? phi : 0.0)) > 1e-9) v.fail("rows q=" + std::to_string(q));
            }
        for (Int a = 0; a < q; ++a)
            for (Int b = 0; b < q; ++b) {
                if (std::gcd(a, q) != 1 || std::gcd(b, q) != 1) continue;
                Complex s = 0;
                for (const auto& chi : chars) s += chi(a) * chi.conj(b);
                ++v.checked;
                if (std::abs(s - Complex(a == b ? phi : 0.0)) > 1e-9) v.fail("columns q=" + std::to_string(q));
            }
    }));

    auto gauss = [&](bool literal) {
        return [&, literal](Int q, IdentityVerdict& v) {
            for (const auto& chi : *enumerate_characters(q))
                for (Int n = 0; n <= opt.gauss_qmax; ++n) {
                    if (!literal && !gauss_bound_applies(chi, n)) continue;
                    ++v.checked;
                    const double g = std::abs(gauss_sum_raw(chi, n));
                    if (g > std::sqrt(static_cast<double>(q)) + 1e-9)
                        v.fail("q=" + std::to_string(q) + " n=" + std::to_string(n) +
                               (chi.is_principal ? " principal" : chi.is_primitive ? " primitive" : " imprimitive") +
                               " |G|=" + std::to_string(g));
                }
        };
    };
    rep.verdicts.push_back(detail::sharded("gauss-bound", 1, opt.gauss_qmax, opt.shards, gauss(false)));
    rep.verdicts.back().note = "characters that are primitive, or n coprime to q";
    IdentityVerdict literal = detail::sharded("gauss-bound-all-characters", 1, opt.gauss_qmax, opt.shards, gauss(true));
    literal.informational = true;
    literal.note = "imprimitive characters at (n, q) > 1 can exceed sqrt(q); e.g. the principal character gives phi(q) at n = q";
    rep.verdicts.push_back(std::move(literal));

    rep.verdicts.push_back(detail::sharded("principal-gauss-is-ramanujan", 1, opt.gauss_qmax, opt.shards,
                                           [&](Int q, IdentityVerdict& v) {
        const auto& chi0 = enumerate_characters(q)->front();
        for (Int n = 0; n <= opt.gauss_qmax; ++n) {
            ++v.checked;
            if (std::abs(gauss_sum_raw(chi0, n) - Complex(static_cast<double>(ramanujan_divisor(n, q)))) > 1e-9)
                v.fail("(n,q)=" + key({n, q}));
        }
    }));

    rep.verdicts.push_back(detail::sharded("kloosterman-bound", 1, opt.kloosterman_qmax, opt.shards,
                                           [&](Int q, IdentityVerdict& v) {
        for (Int m = 0; m <= opt.kloosterman_mnmax; ++m)
            for (Int n = 0; n <= opt.kloosterman_mnmax; ++n) {
                ++v.checked;
                const double s = kloosterman_raw(m, n, q);
                if (std::abs(s) > kloosterman_bound(m, n, q) + 1e-9) v.fail("(m,n,q)=" + key({m, n, q}));
                if (n > m) {
                    ++v.checked;
                    if (std::abs(s - kloosterman_raw(n, m, q)) > 1e-9) v.fail("asymmetric (m,n,q)=" + key({m, n, q}));
                }
            }
    }));

    if (opt.factorization_sweep) {
        rep.verdicts.push_back(detail::sharded("kloosterman-gauss-factorization", 1, 20, opt.shards,
                                               [&](Int b, IdentityVerdict& v) {
            for (Int N : {3, 5, 7}) {
                if (b % N == 0) continue;
                for (Int Q = 1; Q <= 30; ++Q) {
                    if (Q % N == 0) continue;
                    for (Int m = 1; m <= 5; ++m) {
                        if (m % N == 0) continue;
                        ++v.checked;
                        if (!verify_kloosterman_factorization(N, b, Q, m)) v.fail("(N,b,Q,m)=" + key({N, b, Q, m}));
                    }
                }
            }
        }));
    }
    return rep;
}

}  // namespace lowzero::arith
