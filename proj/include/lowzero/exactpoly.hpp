#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lowzero/errors.hpp"

namespace lowzero {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q". Anything else (decimals, exponents, blanks) is rejected.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] {
        return UsageError("malformed rational '" + std::string(text) +
                          "': expected an exact literal such as 3/5 or 2");
    };
    auto digits_only = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw fail();
    const Integer n{std::string(num)};
    const Integer d{std::string(den)};
    if (d == 0) throw fail();
    Rational r(n, d);
    if (negative) r = -r;
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

// Dense polynomial, ascending coefficients.
using Poly = std::vector<Rational>;

namespace poly {

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly trimmed(Poly p) {
    trim(p);
    return p;
}

inline Rational eval(const Poly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline double eval_double(const Poly& p, double x) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

inline Poly add(const Poly& p, const Poly& q) {
    Poly out(std::max(p.size(), q.size()));
    for (std::size_t i = 0; i < p.size(); ++i) out[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) out[i] += q[i];
    trim(out);
    return out;
}

inline void add_into(Poly& acc, const Poly& q) {
    if (acc.size() < q.size()) acc.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) acc[i] += q[i];
}

inline Poly scale(const Poly& p, const Rational& c) {
    if (c == 0) return {};
    Poly out(p);
    for (auto& v : out) v *= c;
    return out;
}

inline Poly mul(const Poly& p, const Poly& q) {
    if (p.empty() || q.empty()) return {};
    Poly out(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    }
    trim(out);
    return out;
}

// x -> p(x + c)
inline Poly shift(const Poly& p, const Rational& c) {
    if (c == 0 || p.size() <= 1) return p;
    Poly out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        // out = out * (x + c) + coeff
        out.push_back(0);
        for (std::size_t k = out.size() - 1; k > 0; --k) out[k] = out[k - 1] + c * out[k];
        out[0] = c * out[0] + *it;
    }
    trim(out);
    return out;
}

// x -> p(-x)
inline Poly reflect(const Poly& p) {
    Poly out(p);
    for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
    return out;
}

// Antiderivative vanishing at 0.
inline Poly integral(const Poly& p) {
    if (p.empty()) return {};
    Poly out(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / Rational(static_cast<long>(i + 1));
    return out;
}

inline Poly monomial(std::size_t k, const Rational& c = 1) {
    Poly out(k + 1);
    out[k] = c;
    return out;
}

}  // namespace poly

// Compactly supported piecewise polynomial. Piece i lives on [b_i, b_{i+1}); the last
// breakpoint takes the left limit. Always canonical, so structural equality is
// equality of functions (up to values at breakpoints).
class PiecewisePoly {
public:
    PiecewisePoly() = default;

    PiecewisePoly(std::vector<Rational> breakpoints, std::vector<Poly> pieces)
        : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
        if (breaks_.empty() && pieces_.empty()) return;
        // gmp comparisons assume lowest terms; callers may hand in raw num/den pairs
        for (auto& b : breaks_) b.canonicalize();
        for (auto& piece : pieces_)
            for (auto& c : piece) c.canonicalize();
        if (breaks_.size() != pieces_.size() + 1)
            throw DomainError("piecewise polynomial needs one more breakpoint than pieces");
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1])) throw DomainError("breakpoints must be strictly increasing");
        canonicalize();
    }

    static PiecewisePoly piece(const Rational& lo, const Rational& hi, Poly p) {
        if (!(lo < hi)) return {};
        return PiecewisePoly({lo, hi}, {std::move(p)});
    }

    static PiecewisePoly constant(const Rational& lo, const Rational& hi, const Rational& c) {
        return piece(lo, hi, Poly{c});
    }

    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    bool is_zero() const { return pieces_.empty(); }

    Rational support_lo() const { return is_zero() ? Rational(0) : breaks_.front(); }
    Rational support_hi() const { return is_zero() ? Rational(0) : breaks_.back(); }

    std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& p : pieces_) d = std::max(d, p.empty() ? std::size_t{0} : p.size() - 1);
        return d;
    }

    // Index of the piece whose half-open interval holds x, or size() if none.
    std::size_t locate(const Rational& x) const {
        if (is_zero() || x < breaks_.front() || x > breaks_.back()) return size();
        if (x == breaks_.back()) return size() - 1;
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        return static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    friend bool operator==(const PiecewisePoly& a, const PiecewisePoly& b) {
        return a.breaks_ == b.breaks_ && a.pieces_ == b.pieces_;
    }

private:
    void canonicalize() {
        for (auto& p : pieces_) poly::trim(p);
        std::vector<Rational> nb{breaks_.front()};
        std::vector<Poly> np;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (!np.empty() && np.back() == pieces_[i]) {
                nb.back() = breaks_[i + 1];
            } else {
                np.push_back(std::move(pieces_[i]));
                nb.push_back(breaks_[i + 1]);
            }
        }
        std::size_t first = 0, last = np.size();
        while (first < last && np[first].empty()) ++first;
        while (last > first && np[last - 1].empty()) --last;
        if (first == last) {
            breaks_.clear();
            pieces_.clear();
            return;
        }
        breaks_.assign(nb.begin() + static_cast<std::ptrdiff_t>(first), nb.begin() + static_cast<std::ptrdiff_t>(last) + 1);
        pieces_.assign(std::make_move_iterator(np.begin() + static_cast<std::ptrdiff_t>(first)),
                       std::make_move_iterator(np.begin() + static_cast<std::ptrdiff_t>(last)));
    }

    std::vector<Rational> breaks_;
    std::vector<Poly> pieces_;
};

inline Rational evaluate(const PiecewisePoly& p, const Rational& x) {
    const auto i = p.locate(x);
    if (i == p.size()) return 0;
    return poly::eval(p.pieces()[i], x);
}

inline double evaluate_double(const PiecewisePoly& p, double x) {
    if (p.is_zero()) return 0.0;
    const auto& b = p.breakpoints();
    if (x < b.front().get_d() || x > b.back().get_d()) return 0.0;
    std::size_t i = 0;
    while (i + 1 < p.size() && x >= b[i + 1].get_d()) ++i;
    return poly::eval_double(p.pieces()[i], x);
}

namespace detail {

inline std::vector<Rational> merged_breaks(const PiecewisePoly& p, const PiecewisePoly& q) {
    std::vector<Rational> all(p.breakpoints());
    all.insert(all.end(), q.breakpoints().begin(), q.breakpoints().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

inline const Poly* piece_on(const PiecewisePoly& p, const Rational& lo, const Rational& hi) {
    static const Poly zero;
    if (p.is_zero() || lo < p.support_lo() || hi > p.support_hi()) return &zero;
    return &p.pieces()[p.locate((lo + hi) / 2)];
}

}  // namespace detail

inline PiecewisePoly add(const PiecewisePoly& p, const PiecewisePoly& q) {
    if (p.is_zero()) return q;
    if (q.is_zero()) return p;
    auto b = detail::merged_breaks(p, q);
    std::vector<Poly> pieces;
    pieces.reserve(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        pieces.push_back(poly::add(*detail::piece_on(p, b[i], b[i + 1]), *detail::piece_on(q, b[i], b[i + 1])));
    return PiecewisePoly(std::move(b), std::move(pieces));
}

inline PiecewisePoly scale(const PiecewisePoly& p, const Rational& c) {
    if (c == 0 || p.is_zero()) return {};
    std::vector<Poly> pieces;
    for (const auto& piece : p.pieces()) pieces.push_back(poly::scale(piece, c));
    return PiecewisePoly(p.breakpoints(), std::move(pieces));
}

inline PiecewisePoly subtract(const PiecewisePoly& p, const PiecewisePoly& q) { return add(p, scale(q, -1)); }

inline PiecewisePoly multiply(const PiecewisePoly& p, const PiecewisePoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    const Rational lo = std::max(p.support_lo(), q.support_lo());
    const Rational hi = std::min(p.support_hi(), q.support_hi());
    if (!(lo < hi)) return {};
    auto all = detail::merged_breaks(p, q);
    std::vector<Rational> b;
    for (auto& x : all)
        if (x >= lo && x <= hi) b.push_back(x);
    std::vector<Poly> pieces;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        pieces.push_back(poly::mul(*detail::piece_on(p, b[i], b[i + 1]), *detail::piece_on(q, b[i], b[i + 1])));
    return PiecewisePoly(std::move(b), std::move(pieces));
}

inline PiecewisePoly multiply_by_monomial(const PiecewisePoly& p, unsigned k) {
    if (k == 0) return p;
    std::vector<Poly> pieces;
    for (const auto& piece : p.pieces()) {
        Poly shifted(piece.size() + k);
        std::copy(piece.begin(), piece.end(), shifted.begin() + k);
        pieces.push_back(std::move(shifted));
    }
    return PiecewisePoly(p.breakpoints(), std::move(pieces));
}

// x -> p(-x)
inline PiecewisePoly reflect(const PiecewisePoly& p) {
    if (p.is_zero()) return {};
    std::vector<Rational> b;
    for (auto it = p.breakpoints().rbegin(); it != p.breakpoints().rend(); ++it) b.push_back(-*it);
    std::vector<Poly> pieces;
    for (auto it = p.pieces().rbegin(); it != p.pieces().rend(); ++it) pieces.push_back(poly::reflect(*it));
    return PiecewisePoly(std::move(b), std::move(pieces));
}

// x -> p(x - c)
inline PiecewisePoly translate(const PiecewisePoly& p, const Rational& c) {
    if (p.is_zero() || c == 0) return p;
    std::vector<Rational> b;
    for (const auto& x : p.breakpoints()) b.push_back(x + c);
    std::vector<Poly> pieces;
    for (const auto& piece : p.pieces()) pieces.push_back(poly::shift(piece, -c));
    return PiecewisePoly(std::move(b), std::move(pieces));
}

// p * 1_[lo, hi)
inline PiecewisePoly restrict(const PiecewisePoly& p, const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw DomainError("restrict needs lo < hi");
    return multiply(p, PiecewisePoly::constant(lo, hi, 1));
}

inline Rational definite_integral(const PiecewisePoly& p, const Rational& lo, const Rational& hi) {
    if (hi < lo) throw DomainError("definite_integral needs lo <= hi");
    Rational total = 0;
    const auto& b = p.breakpoints();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational l = std::max(lo, b[i]);
        const Rational h = std::min(hi, b[i + 1]);
        if (!(l < h)) continue;
        const Poly f = poly::integral(p.pieces()[i]);
        total += poly::eval(f, h) - poly::eval(f, l);
    }
    return total;
}

inline Rational total_integral(const PiecewisePoly& p) {
    return p.is_zero() ? Rational(0) : definite_integral(p, p.support_lo(), p.support_hi());
}

// F(x) = integral of p from its left support edge to x, represented on [lo, hi) only.
// Outside the support F is 0 to the left and the total mass to the right.
inline PiecewisePoly cumulative_on(const PiecewisePoly& p, const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw DomainError("cumulative_on needs lo < hi");
    if (p.is_zero()) return {};
    std::vector<Rational> b{lo};
    std::vector<Poly> pieces;
    const auto& pb = p.breakpoints();
    Rational running = 0;  // F at pb[i]
    auto emit = [&](const Rational& l, const Rational& h, Poly f) {
        if (!(l < h)) return;
        if (b.back() < l) {  // fill a gap with zero
            pieces.push_back({});
            b.push_back(l);
        }
        pieces.push_back(std::move(f));
        b.push_back(h);
    };
    if (lo < pb.front()) emit(lo, std::min(hi, pb.front()), {});
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Poly f = poly::integral(p.pieces()[i]);
        const Rational offset = running - poly::eval(f, pb[i]);
        const Rational l = std::max(lo, pb[i]);
        const Rational h = std::min(hi, pb[i + 1]);
        if (l < h) emit(l, h, poly::add(f, Poly{offset}));
        running = poly::eval(f, pb[i + 1]) + offset;
    }
    if (hi > pb.back()) emit(std::max(lo, pb.back()), hi, Poly{running});
    return PiecewisePoly(std::move(b), std::move(pieces));
}

// Antiderivative vanishing at the left support edge, on the support only.
inline PiecewisePoly antiderivative(const PiecewisePoly& p) {
    if (p.is_zero()) return {};
    return cumulative_on(p, p.support_lo(), p.support_hi());
}

namespace detail {

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Contribution of P on [a0,a1) convolved with Q on [b0,b1), as pieces in x.
struct ConvolutionPiece {
    Rational lo, hi;
    Poly f;
};

inline void convolve_pieces(const Poly& P, const Rational& a0, const Rational& a1, const Poly& Q,
                            const Rational& b0, const Rational& b1, std::vector<ConvolutionPiece>& out) {
    if (P.empty() || Q.empty()) return;
    // (P*Q)(x) = sum_r c_r(x) [A_r(hi(x)) - A_r(lo(x))], A_r = antiderivative of t^r P(t),
    // c_r(x) = sum_{j>=r} q_j C(j,r) (-1)^r x^{j-r}.
    const std::size_t dq = Q.size() - 1;
    std::vector<Poly> A(dq + 1), c(dq + 1);
    for (std::size_t r = 0; r <= dq; ++r) {
        Poly tp(P.size() + r);
        std::copy(P.begin(), P.end(), tp.begin() + static_cast<std::ptrdiff_t>(r));
        A[r] = poly::integral(tp);
        Poly cr(dq - r + 1);
        for (std::size_t j = r; j <= dq; ++j) {
            Rational term = Q[j] * Rational(binomial(j, r));
            if (r % 2 == 1) term = -term;
            cr[j - r] = term;
        }
        c[r] = std::move(cr);
    }
    std::vector<Rational> xs{a0 + b0, a0 + b1, a1 + b0, a1 + b1};
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const Rational mid = (xs[s] + xs[s + 1]) / 2;
        // lower limit max(a0, x - b1), upper limit min(a1, x - b0)
        const bool lo_const = a0 >= mid - b1;
        const bool hi_const = a1 <= mid - b0;
        Poly f;
        for (std::size_t r = 0; r <= dq; ++r) {
            Poly upper = hi_const ? Poly{poly::eval(A[r], a1)} : poly::shift(A[r], -b0);
            Poly lower = lo_const ? Poly{poly::eval(A[r], a0)} : poly::shift(A[r], -b1);
            poly::add_into(f, poly::mul(c[r], poly::add(upper, poly::scale(lower, -1))));
        }
        poly::trim(f);
        out.push_back({xs[s], xs[s + 1], std::move(f)});
    }
}

}  // namespace detail

// (p*q)(x) = integral p(t) q(x-t) dt, exact.
inline PiecewisePoly convolve(const PiecewisePoly& p, const PiecewisePoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    // Keep the inner loop over the lower-degree operand.
    const PiecewisePoly& hi_deg = p.degree() >= q.degree() ? p : q;
    const PiecewisePoly& lo_deg = p.degree() >= q.degree() ? q : p;
    std::vector<Rational> grid;
    for (const auto& x : hi_deg.breakpoints())
        for (const auto& y : lo_deg.breakpoints()) grid.push_back(x + y);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Poly> acc(grid.size() - 1);
    std::vector<detail::ConvolutionPiece> parts;
    const auto& hb = hi_deg.breakpoints();
    const auto& lb = lo_deg.breakpoints();
    for (std::size_t i = 0; i < hi_deg.size(); ++i) {
        for (std::size_t j = 0; j < lo_deg.size(); ++j) {
            parts.clear();
            detail::convolve_pieces(hi_deg.pieces()[i], hb[i], hb[i + 1], lo_deg.pieces()[j], lb[j], lb[j + 1], parts);
            for (const auto& part : parts) {
                auto first = std::lower_bound(grid.begin(), grid.end(), part.lo) - grid.begin();
                auto last = std::lower_bound(grid.begin(), grid.end(), part.hi) - grid.begin();
                for (auto k = first; k < last; ++k) poly::add_into(acc[static_cast<std::size_t>(k)], part.f);
            }
        }
    }
    return PiecewisePoly(std::move(grid), std::move(acc));
}

// k-fold self convolution; k >= 1.
inline PiecewisePoly convolution_power(const PiecewisePoly& p, unsigned k) {
    if (k == 0) throw DomainError("convolution_power needs k >= 1");
    PiecewisePoly out = p;
    for (unsigned i = 1; i < k; ++i) out = convolve(out, p);
    return out;
}

}  // namespace lowzero
