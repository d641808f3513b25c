#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lowzero/arith.hpp"
#include "lowzero/errors.hpp"
#include "lowzero/json_io.hpp"
#include "lowzero/moments.hpp"
#include "lowzero/oracle.hpp"
#include "lowzero/rmt.hpp"
#include "lowzero/sop.hpp"
#include "lowzero/testfn.hpp"
#include "lowzero/vanishing.hpp"

namespace lowzero::cli {

using io::Json;

enum class ValueKind { command, rational, count, seed, sign, parity, centering, flag, path, test_function };

inline const std::map<std::string, ValueKind>& known_keys() {
    static const std::map<std::string, ValueKind> keys{
        {"command", ValueKind::command},   {"sigma", ValueKind::rational},      {"tf", ValueKind::test_function},
        {"n", ValueKind::count},           {"a", ValueKind::count},             {"sign", ValueKind::sign},
        {"r", ValueKind::count},           {"M", ValueKind::count},             {"parity", ValueKind::parity},
        {"samples", ValueKind::count},     {"seed", ValueKind::seed},           {"nmax", ValueKind::count},
        {"centering", ValueKind::centering}, {"qmax", ValueKind::count},        {"tmax", ValueKind::count},
        {"shards", ValueKind::count},      {"threads", ValueKind::count},       {"quick", ValueKind::flag},
        {"kloosterman_sweep", ValueKind::flag}, {"sweep", ValueKind::flag},     {"json", ValueKind::path},
        {"csv", ValueKind::path},
    };
    return keys;
}

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"moment",       "rmt",    "verify-combinat", "verify-arith",
                                            "verify-all",   "vanish", "crosscheck"};
    return c;
}

inline unsigned long parse_count(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    unsigned long out = 0;
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        out = std::stoul(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw UsageError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    return out;
}

// Throws UsageError for unknown keys and values of the wrong type.
inline void check_value(const std::string& key, const std::string& v) {
    const auto it = known_keys().find(key);
    if (it == known_keys().end()) throw UsageError("unknown key '" + key + "'");
    switch (it->second) {
        case ValueKind::command:
            if (std::find(commands().begin(), commands().end(), v) == commands().end())
                throw UsageError("unknown command '" + v + "'");
            break;
        case ValueKind::rational:
            try {
                (void)parse_rational(v);
            } catch (const UsageError& e) {
                throw UsageError("key '" + key + "': " + e.what());
            }
            break;
        case ValueKind::count:
        case ValueKind::seed: (void)parse_count(key, v); break;
        case ValueKind::sign: (void)parse_sign(v); break;
        case ValueKind::parity: (void)rmt::parse_parity(v); break;
        case ValueKind::centering:
            if (v != "finite" && v != "limit") throw UsageError("key 'centering': expected finite or limit, got '" + v + "'");
            break;
        case ValueKind::flag:
            if (v != "true" && v != "false") throw UsageError("key '" + key + "': expected true or false, got '" + v + "'");
            break;
        case ValueKind::path:
            if (v.empty()) throw UsageError("key '" + key + "': empty path");
            break;
        case ValueKind::test_function: (void)parse_test_function(v); break;
    }
}

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;

    void set(const std::string& key, const std::string& v) {
        check_value(key, v);
        if (key == "command") command = v;
        else values[key] = v;
    }
    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string text(const std::string& key, const std::string& def = {}) const {
        auto it = values.find(key);
        return it == values.end() ? def : it->second;
    }
    Rational rational(const std::string& key, const Rational& def) const {
        return has(key) ? parse_rational(text(key)) : def;
    }
    unsigned long count(const std::string& key, unsigned long def) const {
        return has(key) ? parse_count(key, text(key)) : def;
    }
    bool flag(const std::string& key) const { return text(key, "false") == "true"; }
};

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Line-oriented `key = value` text; `#` starts a comment.
inline RunConfig parse_config(std::istream& in, const std::string& origin = "config") {
    RunConfig cfg;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (auto [it, fresh] = seen.emplace(key, lineno); !fresh)
            throw UsageError(where + ": duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
        try {
            cfg.set(key, value);
        } catch (const UsageError& e) {
            throw UsageError(where + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

struct Report {
    Json resolved = Json::object();  // parameters after defaults, merged into the report
    Json results = Json::array();
    std::vector<std::string> assumptions;
    bool pass = true;
};

inline TestFunction resolve_test_function(const RunConfig& cfg, const Rational& default_sigma) {
    if (cfg.has("tf")) {
        TestFunction tf = parse_test_function(cfg.text("tf"));
        if (cfg.has("sigma") && cfg.rational("sigma", 0) != tf.sigma)
            throw UsageError("--sigma " + cfg.text("sigma") + " conflicts with --tf " + cfg.text("tf"));
        return tf;
    }
    const Rational s = cfg.rational("sigma", default_sigma);
    if (s <= 0) throw UsageError("sigma must be positive, got " + to_string(s));
    return fejer(s);
}

inline unsigned threads_of(const RunConfig& cfg) {
    return static_cast<unsigned>(cfg.count("threads", rmt::default_threads()));
}

inline Report run_moment(const RunConfig& cfg) {
    Report rep;
    const TestFunction tf = resolve_test_function(cfg, Rational(1, 2));
    const auto n = static_cast<unsigned>(cfg.count("n", 4));
    const Sign sign = parse_sign(cfg.text("sign", "minus"));
    const auto a = static_cast<unsigned>(cfg.count("a", minimal_a(tf.sigma, n)));
    rep.resolved = Json{{"tf", tf.label}, {"n", n}, {"a", a}, {"sign", to_string(sign)}};
    MomentCalculator calc(tf);
    const Rational moment = calc.predicted_moment({n, a, sign});
    Json m = io::exact(moment);
    m["quantity"] = "centered_moment";
    m["n"] = n;
    m["a"] = a;
    m["sign"] = to_string(sign);
    rep.results.push_back(m);
    Json v = io::exact(calc.sigma_phi_sq());
    v["quantity"] = "sigma_phi_sq";
    rep.results.push_back(v);
    Json g = io::exact(calc.gaussian_moment(n));
    g["quantity"] = "gaussian_moment";
    rep.results.push_back(g);
    Json s = io::exact(calc.S(n, a));
    s["quantity"] = "S_correction";
    rep.results.push_back(s);
    rep.assumptions.push_back("test function " + tf.label);
    return rep;
}

inline Report run_rmt(const RunConfig& cfg) {
    Report rep;
    const TestFunction tf = resolve_test_function(cfg, Rational(3, 5));
    rmt::EnsembleSpec spec;
    spec.M = static_cast<unsigned>(cfg.count("M", 100));
    spec.parity = cfg.has("parity") ? rmt::parse_parity(cfg.text("parity"))
                                    : (spec.M % 2 == 0 ? rmt::Parity::even : rmt::Parity::odd);
    spec.samples = cfg.count("samples", 20000);
    spec.seed = cfg.count("seed", 42);
    spec.validate();
    rmt::RmtOptions opt;
    opt.n_max = static_cast<unsigned>(cfg.count("nmax", 4));
    opt.centering = cfg.text("centering", "finite") == "limit" ? rmt::Centering::limit : rmt::Centering::finite_m;
    opt.threads = threads_of(cfg);
    rep.resolved = Json{{"tf", tf.label},         {"M", spec.M},
                        {"parity", rmt::to_string(spec.parity)}, {"samples", spec.samples},
                        {"seed", spec.seed},      {"nmax", opt.n_max},
                        {"centering", opt.centering == rmt::Centering::limit ? "limit" : "finite"}};
    const auto z = rmt::sample_z({tf}, spec, opt.threads)[0];
    if (cfg.has("csv")) {
        std::ofstream csv(cfg.text("csv"));
        if (!csv) throw UsageError("cannot write CSV file '" + cfg.text("csv") + "'");
        csv << "sample_index,Z\n";
        csv.precision(17);
        for (std::size_t i = 0; i < z.size(); ++i) csv << i << ',' << z[i] << '\n';
    }
    const auto mean = rmt::mean_from_samples(tf, z, opt);
    Json mj = io::to_json(mean);
    mj["quantity"] = "mean";
    rep.results.push_back(mj);
    rep.pass = mean.within_tolerance;
    for (const auto& r : rmt::moments_from_samples(tf, spec, z, opt)) {
        Json j = io::to_json(r);
        j["quantity"] = "centered_moment";
        rep.results.push_back(j);
        if (r.predicted && !r.within_tolerance) rep.pass = false;
    }
    const Rational centre =
        opt.centering == rmt::Centering::finite_m ? rmt::finite_mean(tf, spec.M) : mean_value(tf);
    rep.assumptions.push_back("test function " + tf.label + ", SO(" + std::to_string(spec.M) + ")");
    rep.assumptions.push_back(std::string("moments centered at the ") +
                              (opt.centering == rmt::Centering::finite_m ? "exact finite-M mean " : "limiting mean ") +
                              to_string(centre));
    rep.assumptions.push_back("moment gate max(4 stderr, c/M) with c = 2; mean gate max(4 stderr, 0.05) against the "
                              "limiting mean; the finite-M allowance is an engineering choice");
    return rep;
}

inline Json combinat_json(const sop::CombinatReport& r) {
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(io::to_json(v));
    Json j{{"quantity", "combinatorial_lemmas"}, {"n", r.n}, {"a", r.a}, {"t_max", r.t_max}, {"pass", r.all_pass()},
           {"verdicts", verdicts}, {"valid_classes", r.valid_classes},
           {"cyclic_convention_cases", r.cyclic_convention_cases}};
    j["f0_value"] = io::exact(r.f0_value);
    return j;
}

inline void add_combinat(Report& rep, int n_lo, int n_hi, std::optional<int> a_only, int t_max, int shards) {
    for (int n = n_lo; n <= n_hi; ++n) {
        const int a_hi = (n + 1) / 2;
        for (int a = 1; a <= a_hi; ++a) {
            if (a_only && *a_only != a) continue;
            const auto r = sop::verify_combinatorics(n, a, t_max, shards);
            rep.results.push_back(combinat_json(r));
            rep.pass = rep.pass && r.all_pass();
        }
    }
}

inline void add_identities(Report& rep, int n_max, int f_max) {
    Json verdicts = Json::array();
    bool ok = true;
    for (const auto& v : sop::verify_generating_identities(n_max, f_max)) {
        verdicts.push_back(io::to_json(v));
        ok = ok && v.pass;
    }
    rep.results.push_back(Json{{"quantity", "coefficient_identities"}, {"pass", ok}, {"verdicts", verdicts}});
    rep.pass = rep.pass && ok;
}

inline Report run_verify_combinat(const RunConfig& cfg) {
    Report rep;
    const auto n = static_cast<int>(cfg.count("n", 5));
    if (n < 1 || n > 12) throw UsageError("verify combinat needs 1 <= n <= 12");
    std::optional<int> a;
    if (cfg.has("a")) a = static_cast<int>(cfg.count("a", 1));
    add_combinat(rep, n, n, a, static_cast<int>(cfg.count("tmax", 3)), static_cast<int>(cfg.count("shards", threads_of(cfg))));
    add_identities(rep, 12, 10);
    rep.assumptions.push_back("the last block uses the cyclic successor when testing minimality");
    rep.assumptions.push_back("the f = 0 one-class sum is reported, not judged");
    return rep;
}

inline void add_arith(Report& rep, const arith::ArithOptions& opt) {
    const auto r = arith::verify_arithmetic(opt);
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(io::to_json(v));
    rep.results.push_back(Json{{"quantity", "arithmetic_identities"}, {"pass", r.all_pass()}, {"verdicts", verdicts}});
    rep.pass = rep.pass && r.all_pass();
    rep.assumptions.push_back("the sqrt(q) Gauss-sum bound is judged for primitive characters or n coprime to q; the "
                              "all-character sweep is reported for information");
}

inline Report run_verify_arith(const RunConfig& cfg) {
    Report rep;
    arith::ArithOptions opt;
    opt.ramanujan_max = static_cast<arith::Int>(cfg.count("qmax", 200));
    opt.factorization_sweep = cfg.flag("kloosterman_sweep");
    opt.shards = static_cast<unsigned>(cfg.count("shards", threads_of(cfg)));
    add_arith(rep, opt);
    return rep;
}

// Exact cross-path equality Q_n == R(n, a), and the quadrature oracle when requested.
inline void add_crosscheck(Report& rep, const TestFunction& tf, unsigned n, bool with_oracle, std::uint64_t seed) {
    MomentCalculator calc(tf);
    const oracle::NumericOracle numeric(tf);
    for (unsigned a = 1; a <= (n + 1) / 2; ++a) {
        if (validity_violation(tf.sigma, n, a)) continue;
        const Rational r = calc.R(n, a);
        const Rational q_classes = calc.Q_via_classes(n, a);
        const Rational q_bar = calc.Q_via_bar(n, a);
        Json j{{"quantity", "cross_path"}, {"sigma", to_string(tf.sigma)}, {"n", n}, {"a", a}};
        j["R_moment"] = io::exact(r);
        j["Q_via_classes"] = io::exact(q_classes);
        j["Q_via_bar"] = io::exact(q_bar);
        bool ok = r == q_classes && r == q_bar;
        if (with_oracle) {
            const double o = numeric.R(n, a);
            j["oracle_numeric"] = o;
            j["oracle_error"] = std::abs(o - r.get_d());
            ok = ok && std::abs(o - r.get_d()) <= 1e-7;
            if (n <= 4) {
                const auto mc = sop::oracle_Qn_mc(tf, static_cast<int>(n), static_cast<int>(a), 1'000'000, seed);
                j["oracle_monte_carlo"] = Json{{"estimate", mc.estimate}, {"stderr", mc.stderr_},
                                               {"z_score", (mc.estimate - r.get_d()) / mc.stderr_}};
            }
        }
        j["pass"] = ok;
        rep.pass = rep.pass && ok;
        rep.results.push_back(j);
    }
}

inline Report run_crosscheck(const RunConfig& cfg) {
    Report rep;
    const TestFunction tf = resolve_test_function(cfg, Rational(1, 2));
    const auto n = static_cast<unsigned>(cfg.count("n", 4));
    if (n < 1) throw UsageError("crosscheck needs n >= 1");
    rep.resolved = Json{{"tf", tf.label}, {"n", n}, {"seed", cfg.count("seed", 42)}};
    add_crosscheck(rep, tf, n, true, cfg.count("seed", 42));
    if (rep.results.empty()) throw DomainError("no admissible a for n = " + std::to_string(n) + " at " + tf.label);
    rep.assumptions.push_back("quadrature oracle tolerance 1e-7; Monte Carlo estimate is informational");
    return rep;
}

inline Report run_verify_all(const RunConfig& cfg) {
    Report rep;
    const bool quick = cfg.flag("quick");
    const int shards = static_cast<int>(cfg.count("shards", threads_of(cfg)));
    add_combinat(rep, 1, quick ? 6 : 7, std::nullopt, 3, shards);
    add_identities(rep, 12, 10);
    arith::ArithOptions opt;
    opt.ramanujan_max = quick ? 100 : 200;
    opt.shards = static_cast<unsigned>(shards);
    add_arith(rep, opt);
    for (unsigned n = 2; n <= (quick ? 5u : 6u); ++n)
        for (const Rational& s : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(3, 5), make_rational(2, n)})
            add_crosscheck(rep, fejer(s), n, false, 0);
    const auto v = vanishing::vanishing_bound({5, 4, Rational(1, 2), Sign::minus});
    Json vj = io::to_json(v);
    vj["quantity"] = "vanishing_bound";
    vj["pass"] = v.bound == Rational(496, 65625) && v.moment == Rational(31, 105);
    rep.pass = rep.pass && vj["pass"].get<bool>();
    rep.results.push_back(vj);
    return rep;
}

inline Report run_vanish(const RunConfig& cfg) {
    Report rep;
    const auto r = static_cast<unsigned>(cfg.count("r", 5));
    const auto n = static_cast<unsigned>(cfg.count("n", 4));
    const Sign sign = parse_sign(cfg.text("sign", "minus"));
    if (cfg.flag("sweep")) {
        std::vector<unsigned> ns;
        for (unsigned k = 2; k <= n; k += 2) ns.push_back(k);
        std::vector<Rational> sigmas{Rational(1, 10), Rational(1, 6), Rational(1, 5), Rational(1, 4), Rational(1, 3),
                                     Rational(1, 2)};
        if (cfg.has("sigma")) sigmas = {cfg.rational("sigma", 0)};
        const auto table = vanishing::bound_sweep(r, ns, sigmas, sign);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& row = table.rows[i];
            Json j = row.result ? io::to_json(*row.result)
                                : Json{{"n", row.n}, {"sigma", to_string(row.sigma)}, {"skipped", row.skip_reason}};
            j["quantity"] = "sweep_row";
            if (table.best && *table.best == i) j["best"] = true;
            rep.results.push_back(j);
        }
    } else {
        const Rational sigma = cfg.rational("sigma", Rational(1, 2));
        const auto res = vanishing::vanishing_bound({r, n, sigma, sign});
        Json j = io::to_json(res);
        j["quantity"] = "vanishing_bound";
        rep.results.push_back(j);
        for (const auto& a : res.assumptions) rep.assumptions.push_back(a);
        for (const auto& [label, prior] : {std::pair{"prior bound 1/32", vanishing::prior_bound_weak},
                                           std::pair{"prior bound 1/49", vanishing::prior_bound_strong}}) {
            Json c = io::exact(prior);
            c["quantity"] = "comparison";
            c["label"] = label;
            c["improves"] = res.bound < prior;
            rep.results.push_back(c);
        }
    }
    return rep;
}

inline Report dispatch(const RunConfig& cfg) {
    const std::string& c = cfg.command;
    if (c == "moment") return run_moment(cfg);
    if (c == "rmt") return run_rmt(cfg);
    if (c == "verify-combinat") return run_verify_combinat(cfg);
    if (c == "verify-arith") return run_verify_arith(cfg);
    if (c == "verify-all") return run_verify_all(cfg);
    if (c == "vanish") return run_vanish(cfg);
    if (c == "crosscheck") return run_crosscheck(cfg);
    throw UsageError("no command given (expected one of moment, rmt, verify, vanish, crosscheck)");
}

// Exit status: 0 all checks pass, 1 a check failed, 2 usage error.
inline int run(const RunConfig& cfg, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    Report rep = dispatch(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json params = Json::object();
    for (const auto& [k, v] : cfg.values) params[k] = v;
    for (const auto& [k, v] : rep.resolved.items()) params[k] = v;
    Json doc{{"command", cfg.command}, {"params", params}, {"results", rep.results},
             {"assumptions", rep.assumptions}, {"status", rep.pass ? "pass" : "fail"},
             {"timing", Json{{"seconds", seconds}}}};
    const std::string text = doc.dump(2);
    out << text << '\n';
    if (cfg.has("json")) {
        std::ofstream f(cfg.text("json"));
        if (!f) throw UsageError("cannot write JSON report '" + cfg.text("json") + "'");
        f << text << '\n';
    }
    return rep.pass ? 0 : 1;
}

inline int main_entry(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Exact low-lying zero moment toolkit"};
    app.require_subcommand(0, 1);
    std::map<std::string, std::string> given;
    std::map<std::string, bool> flags;
    struct Bound {
        CLI::Option* option;
        std::string key, slot;
    };
    std::vector<Bound> bound;
    auto option = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        const std::string slot = key + "@" + sub->get_name();
        bound.push_back({sub->add_option("--" + name, given[slot], help), key, slot});
    };
    auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
        const std::string slot = key + "@" + sub->get_name();
        bound.push_back({sub->add_flag("--" + name, flags[slot], help), key, slot});
    };
    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file");
    option(&app, "json", "json", "write the JSON report to this path");
    option(&app, "tf", "tf", "test function, fejer:<p/q>");
    option(&app, "threads", "threads", "worker threads (default: LOWZERO_THREADS or hardware)");

    auto* moment = app.add_subcommand("moment", "exact predicted centered moment");
    option(moment, "sigma", "sigma", "support of fhat, exact rational");
    option(moment, "n", "n", "moment order");
    option(moment, "a", "a", "admissible a (default: smallest)");
    option(moment, "sign", "sign", "plus or minus");

    auto* rmt_cmd = app.add_subcommand("rmt", "Haar Monte Carlo over SO(M)");
    option(rmt_cmd, "M", "M", "matrix dimension");
    option(rmt_cmd, "parity", "parity", "even or odd (default from M)");
    option(rmt_cmd, "samples", "samples", "number of matrices");
    option(rmt_cmd, "sigma", "sigma", "Fejer support");
    option(rmt_cmd, "nmax", "nmax", "highest centered moment");
    option(rmt_cmd, "seed", "seed", "64-bit seed");
    option(rmt_cmd, "csv", "csv", "write sample_index,Z rows");
    option(rmt_cmd, "centering", "centering", "finite or limit");

    auto* verify = app.add_subcommand("verify", "brute-force identity suites");
    verify->require_subcommand(1);
    auto* combinat = verify->add_subcommand("combinat", "systems of parameters and t-class lemmas");
    option(combinat, "n", "n", "number of variables");
    option(combinat, "a", "a", "admissible a (default: all)");
    option(combinat, "t-max,--tmax", "tmax", "largest class size");
    option(combinat, "shards", "shards", "parallel shards");
    auto* arith_cmd = verify->add_subcommand("arith", "Ramanujan, Gauss and Kloosterman sums");
    option(arith_cmd, "qmax", "qmax", "Ramanujan range");
    flag(arith_cmd, "kloosterman-sweep", "kloosterman_sweep", "run the Kloosterman-Gauss factorization sweep");
    option(arith_cmd, "shards", "shards", "parallel shards");
    auto* all = verify->add_subcommand("all", "every verification suite");
    flag(all, "quick", "quick", "smaller ranges");

    auto* vanish = app.add_subcommand("vanish", "bound on high-order vanishing");
    option(vanish, "r", "r", "order threshold");
    option(vanish, "n", "n", "even moment order");
    option(vanish, "sigma", "sigma", "Fejer support");
    option(vanish, "sign", "sign", "plus or minus");
    flag(vanish, "sweep", "sweep", "sweep n and sigma grids");

    auto* cross = app.add_subcommand("crosscheck", "exact and numeric routes to R(n, a)");
    option(cross, "n", "n", "moment order");
    option(cross, "sigma", "sigma", "Fejer support");
    option(cross, "seed", "seed", "Monte Carlo seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }
    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        std::string command;
        if (moment->parsed()) command = "moment";
        if (rmt_cmd->parsed()) command = "rmt";
        if (combinat->parsed()) command = "verify-combinat";
        if (arith_cmd->parsed()) command = "verify-arith";
        if (all->parsed()) command = "verify-all";
        if (vanish->parsed()) command = "vanish";
        if (cross->parsed()) command = "crosscheck";
        if (!command.empty()) cfg.set("command", command);
        for (const auto& b : bound) {
            if (b.option->count() == 0) continue;
            if (auto it = flags.find(b.slot); it != flags.end()) cfg.set(b.key, it->second ? "true" : "false");
            else cfg.set(b.key, given[b.slot]);
        }
        return run(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace lowzero::cli
