// One PASS/FAIL line per acceptance criterion, with wall-clock timings and budgets.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "lowzero/arith.hpp"
#include "lowzero/moments.hpp"
#include "lowzero/oracle.hpp"
#include "lowzero/rmt.hpp"
#include "lowzero/sop.hpp"
#include "lowzero/vanishing.hpp"
#include "properties.hpp"

using namespace lowzero;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<Rational> sigma_grid(unsigned n) {
    std::vector<Rational> g{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 5)};
    const Rational edge = make_rational(2, n);
    if (std::find(g.begin(), g.end(), edge) == g.end()) g.push_back(edge);
    return g;
}

std::vector<unsigned> valid_as(const Rational& s, unsigned n) {
    std::vector<unsigned> out;
    for (unsigned a = 1; a <= (n + 1) / 2; ++a)
        if (!validity_violation(s, n, a)) out.push_back(a);
    return out;
}

Outcome published_values() {
    const Rational m = predicted_centered_moment(fejer(Rational(1, 2)), {4, 2, Sign::minus});
    const Rational b = vanishing::vanishing_bound({5, 4, Rational(1, 2), Sign::minus}).bound;
    return {m == Rational(31, 105) && b == Rational(496, 65625), "moment " + to_string(m) + ", bound " + to_string(b)};
}

Outcome r19_bound() {
    const Rational b = vanishing::vanishing_bound({19, 20, Rational(1, 10), Sign::minus}).bound;
    const Rational lo = Rational(280, 100) / mpz_class("1000000000000000");
    const Rational hi = Rational(292, 100) / mpz_class("1000000000000000");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", b.get_d());
    return {lo <= b && b <= hi && std::string(buf) == "2.86e-15", std::string("bound ") + buf};
}

Outcome cross_path() {
    int checked = 0;
    std::string bad;
    for (unsigned n = 2; n <= 6; ++n)
        for (const auto& s : sigma_grid(n)) {
            const auto tf = fejer(s);
            for (unsigned a : valid_as(s, n)) {
                ++checked;
                if (Q_n_via_classes(tf, n, a) != R_moment(tf, n, a) && bad.empty())
                    bad = " first mismatch n=" + std::to_string(n) + " sigma=" + to_string(s) + " a=" + std::to_string(a);
            }
        }
    return {bad.empty() && checked > 0, std::to_string(checked) + " (n, sigma, a) triples" + bad};
}

Outcome oracle_concordance() {
    int checked = 0;
    double worst = 0.0;
    std::string where;
    auto compare = [&](double exact, double numeric, const std::string& what) {
        ++checked;
        const double err = std::abs(exact - numeric);
        if (err > worst) {
            worst = err;
            where = what;
        }
    };
    for (const auto& s : sigma_grid(4)) {
        const auto tf = fejer(s);
        const oracle::NumericOracle o(tf);
        MomentCalculator c(tf);
        compare(c.sigma_phi_sq().get_d(), o.sigma_phi_sq(), "variance sigma=" + to_string(s));
        for (unsigned n = 1; n <= 4; ++n) {
            for (unsigned a : valid_as(s, n))
                compare(c.R(n, a).get_d(), o.evaluate({oracle::Functional::R_moment, n, a}),
                        "R n=" + std::to_string(n) + " a=" + std::to_string(a) + " sigma=" + to_string(s));
            for (unsigned ell = 0; ell <= n; ++ell)
                compare(c.X_xi(n, ell).get_d(), o.evaluate({oracle::Functional::X_xi, n, ell}),
                        "X n=" + std::to_string(n) + " ell=" + std::to_string(ell) + " sigma=" + to_string(s));
        }
    }
    std::ostringstream d;
    d << checked << " comparisons, worst " << worst << " at " << where;
    return {worst <= 1e-7 && checked > 0, d.str()};
}

Outcome combinatorics() {
    const int shards = static_cast<int>(rmt::default_threads());
    long checks = 0, classes = 0;
    std::string bad;
    for (int n = 1; n <= 7; ++n)
        for (int a = 1; a <= (n + 1) / 2; ++a) {
            const auto rep = sop::verify_combinatorics(n, a, 3, shards);
            classes += rep.valid_classes;
            for (const auto& v : rep.verdicts) {
                checks += v.checked;
                if (!v.pass && bad.empty())
                    bad = " first failure " + v.name + " n=" + std::to_string(n) + " a=" + std::to_string(a) +
                          (v.counterexamples.empty() ? "" : ": " + v.counterexamples.front());
            }
        }
    for (const auto& v : sop::verify_generating_identities(12, 10)) {
        checks += v.checked;
        if (!v.pass && bad.empty()) bad = " first failure " + v.name;
    }
    return {bad.empty(), std::to_string(checks) + " checks, " + std::to_string(classes) + " valid multi-classes" + bad};
}

Outcome arithmetic() {
    arith::ArithOptions opt;
    opt.ramanujan_max = 200;
    opt.gauss_qmax = 50;
    opt.kloosterman_qmax = 100;
    opt.kloosterman_mnmax = 20;
    opt.factorization_sweep = true;
    opt.shards = rmt::default_threads();
    const auto rep = arith::verify_arithmetic(opt);
    // Every verdict counts here, including the Gauss bound over all characters in the stated range.
    bool pass = true;
    std::ostringstream d;
    for (const auto& v : rep.verdicts) {
        const bool ok = v.failures == 0 && v.checked > 0;
        pass = pass && ok;
        d << v.name << (ok ? " ok" : " FAILED " + std::to_string(v.failures) + "/" + std::to_string(v.checked));
        if (!ok && !v.counterexamples.empty()) d << " (e.g. " << v.counterexamples.front() << ")";
        d << "; ";
    }
    if (!pass)
        d << "the square-root bound holds only for primitive characters or n coprime to q, which passes above";
    return {pass, d.str()};
}

Outcome rmt_gate() {
    const auto wide = fejer(Rational(3, 5)), narrow = fejer(Rational(1, 4));
    const MomentCalculator nc(narrow);
    bool pass = true;
    std::ostringstream d;
    d.precision(4);
    for (unsigned M : {100u, 101u}) {
        const rmt::EnsembleSpec spec{M, M % 2 == 0 ? rmt::Parity::even : rmt::Parity::odd, 20000, 20240601};
        const auto z = rmt::sample_z({wide, narrow}, spec);

        rmt::RmtOptions var_opt{2, rmt::Centering::finite_m, 0.02 * M, 0.05, 0};
        const auto var = rmt::moments_from_samples(wide, spec, z[0], var_opt).front();
        const Rational want = M % 2 == 0 ? Rational(325, 972) : Rational(323, 972);
        pass = pass && var.predicted && *var.predicted == want && var.within_tolerance;
        d << "M=" << M << " var " << var.empirical << " vs " << want.get_d() << (var.within_tolerance ? "" : " OUT") << "; ";

        const auto mean = rmt::mean_from_samples(wide, z[0]);
        pass = pass && *mean.predicted == Rational(13, 6) && mean.within_tolerance;
        d << "mean " << mean.empirical << (mean.within_tolerance ? "" : " OUT") << "; ";

        const auto gauss = rmt::moments_from_samples(narrow, spec, z[1], {4, rmt::Centering::finite_m, 0.0, 0.05, 0});
        for (const auto& r : gauss) {
            const bool ok = r.predicted && *r.predicted == nc.gaussian_moment(r.n) && r.within_4se;
            pass = pass && ok;
            d << "n=" << r.n << " z=" << r.z_score << (ok ? "" : " OUT") << "; ";
        }
    }
    return {pass, d.str()};
}

Outcome monte_carlo() {
    const auto est = sop::oracle_Qn_mc(fejer(Rational(3, 5)), 2, 1, 1000000, 20240602);
    const double target = 1.0 / 972;
    const double z = (est.estimate - target) / est.stderr_;
    std::ostringstream d;
    d << "estimate " << est.estimate << " +- " << est.stderr_ << " (z = " << z << ")";
    return {std::abs(z) <= 3.0, d.str()};
}

Outcome invariant_suites() {
    int suites = 0, failed = 0;
    std::string bad;
    for (const auto& suite : props::all_suites()) {
        const auto r = suite();
        ++suites;
        if (!r.ok() || r.cases < props::default_cases) {
            ++failed;
            bad += " " + r.name + " [" + r.first_failure + "]";
        }
    }
    return {failed == 0, std::to_string(suites - failed) + "/" + std::to_string(suites) + " suites, " +
                             std::to_string(props::default_cases) + " cases each" + (bad.empty() ? "" : "; failing:" + bad)};
}

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "exact moment 31/105 and bound 496/65625", 1, published_values},
        {2, "r=19 bound near 2.86e-15", 30, r19_bound},
        {3, "class expansion equals closed form", 120, cross_path},
        {4, "exact values match quadrature within 1e-7", 120, oracle_concordance},
        {5, "combinatorial lemma suite", 600, combinatorics},
        {6, "arithmetic identity suite", 180, arithmetic},
        {7, "random matrix statistical gate", 600, rmt_gate},
        {8, "Monte Carlo Q_2 within 3 stderr of 1/972", 120, monte_carlo},
        {9, "invariant suites under the property harness", 1800, invariant_suites},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool ok = o.pass && in_time;
        failures += ok ? 0 : 1;
        std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs%s) | %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.budget_seconds, in_time ? "" : ", over budget", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
