#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "lowzero/errors.hpp"

namespace lowzero::quad {

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

// One Gauss-Kronrod 7/15 panel.
template <class F>
Estimate gauss_kronrod15(F&& f, double a, double b) {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = wk[7] * fc;
    double gauss = wg[3] * fc;
    for (std::size_t i = 0; i < 7; ++i) {
        const double x = h * xk[i];
        const double s = f(c - x) + f(c + x);
        kronrod += wk[i] * s;
        if (i % 2 == 1) gauss += wg[i / 2] * s;
    }
    return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

// Globally adaptive bisection on the panel with the largest error estimate.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, std::size_t max_panels = 4000) {
    if (a == b) return 0.0;
    struct Panel {
        double a, b;
        Estimate e;
        bool operator<(const Panel& o) const { return e.error < o.e.error; }
    };
    std::priority_queue<Panel> heap;
    Estimate total = gauss_kronrod15(f, a, b);
    heap.push({a, b, total});
    std::size_t panels = 1;
    while (total.error > abs_tol) {
        if (panels >= max_panels)
            throw ToleranceError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                                 std::to_string(b) + "], error estimate " + std::to_string(total.error));
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Estimate left = gauss_kronrod15(f, worst.a, mid);
        Estimate right = gauss_kronrod15(f, mid, worst.b);
        total.value += left.value + right.value - worst.e.value;
        total.error += left.error + right.error - worst.e.error;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});
        ++panels;
        if (total.error <= abs_tol) {
            // Recompute from scratch so cancellation drift in the running sums cannot fake convergence.
            double v = 0.0, e = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                v += copy.top().e.value;
                e += copy.top().e.error;
                copy.pop();
            }
            total = {v, e};
        }
    }
    return total.value;
}

// Integrate over a list of breakpoints, each sub-interval adaptively, splitting the tolerance.
template <class F>
double integrate_breaks(F&& f, const std::vector<double>& breaks, double abs_tol = 1e-10) {
    double sum = 0.0;
    if (breaks.size() < 2) return sum;
    const double per = abs_tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i] < breaks[i + 1]) sum += integrate(f, breaks[i], breaks[i + 1], per);
    return sum;
}

// Uniform panels of at most `width`, useful for oscillatory integrands.
template <class F>
double integrate_panels(F&& f, double a, double b, double width, double abs_tol = 1e-10) {
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / width));
    std::vector<double> breaks;
    for (std::size_t i = 0; i <= n; ++i) breaks.push_back(i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
    return integrate_breaks(f, breaks, abs_tol);
}

}  // namespace lowzero::quad
