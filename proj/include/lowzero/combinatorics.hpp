#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace lowzero {

// C(n, k), zero whenever k < 0, k > n or n < 0.
inline mpz_class binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class factorial(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// n!! with (-1)!! = 0!! = 1.
inline mpz_class double_factorial(long n) {
    if (n <= 0) return 1;
    mpz_class r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

// All compositions of n into exactly m positive parts, lexicographic order.
inline std::vector<std::vector<int>> compositions(int n, int m) {
    std::vector<std::vector<int>> out;
    if (m <= 0 || n < m) return out;
    std::vector<int> parts(static_cast<std::size_t>(m), 1);
    parts.back() = n - (m - 1);
    while (true) {
        out.push_back(parts);
        // rightmost i < m-1 whose increment still leaves every later part positive
        int i = m - 2;
        int tail = parts.back();
        while (i >= 0 && tail <= m - 1 - i) {
            tail += parts[static_cast<std::size_t>(i)];
            --i;
        }
        if (i < 0) break;
        ++parts[static_cast<std::size_t>(i)];
        --tail;
        for (int j = i + 1; j < m - 1; ++j) {
            parts[static_cast<std::size_t>(j)] = 1;
            --tail;
        }
        parts.back() = tail;
    }
    return out;
}

// All compositions of n (any number of parts), m ascending then lexicographic.
inline std::vector<std::vector<int>> all_compositions(int n) {
    std::vector<std::vector<int>> out;
    for (int m = 1; m <= n; ++m) {
        auto part = compositions(n, m);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace lowzero
