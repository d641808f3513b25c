#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <string>

#include "lowzero/arith.hpp"
#include "lowzero/errors.hpp"
#include "lowzero/exactpoly.hpp"
#include "lowzero/rmt.hpp"
#include "lowzero/sop.hpp"
#include "lowzero/vanishing.hpp"

namespace lowzero::io {

using Json = nlohmann::ordered_json;

// Decimal rounded to 15 significant digits.
inline double approx15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::stod(buf);
}

inline Json exact(const Rational& q) { return Json{{"exact", to_string(q)}, {"approx", approx15(q.get_d())}}; }

inline Json to_json(const PiecewisePoly& p) {
    Json breaks = Json::array(), pieces = Json::array();
    for (const auto& b : p.breakpoints()) breaks.push_back(to_string(b));
    for (const auto& piece : p.pieces()) {
        Json coeffs = Json::array();
        for (const auto& c : piece) coeffs.push_back(to_string(c));
        pieces.push_back(std::move(coeffs));
    }
    return Json{{"breakpoints", std::move(breaks)}, {"pieces", std::move(pieces)}};
}

inline PiecewisePoly piecewise_from_json(const Json& j) {
    try {
        std::vector<Rational> breaks;
        std::vector<Poly> pieces;
        for (const auto& b : j.at("breakpoints")) breaks.push_back(parse_rational(b.get<std::string>()));
        for (const auto& piece : j.at("pieces")) {
            Poly p;
            for (const auto& c : piece) p.push_back(parse_rational(c.get<std::string>()));
            pieces.push_back(std::move(p));
        }
        if (breaks.empty()) return {};
        return PiecewisePoly(std::move(breaks), std::move(pieces));
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed piecewise polynomial: ") + e.what());
    }
}

inline Json to_json(const rmt::MomentReport& r) {
    Json j{{"n", r.n}, {"empirical", r.empirical}, {"stderr", r.stderr_}, {"samples", r.samples}};
    if (r.predicted) {
        j["predicted"] = exact(*r.predicted);
        j["z_score"] = r.z_score;
        j["tolerance"] = r.tolerance;
        j["within_4se"] = r.within_4se;
        j["within_tolerance"] = r.within_tolerance;
    } else {
        j["unsupported"] = r.unsupported_reason;
    }
    return j;
}

inline Json to_json(const sop::LemmaVerdict& v) {
    return Json{{"name", v.name}, {"pass", v.pass}, {"checked", v.checked}, {"counterexamples", v.counterexamples}};
}

inline Json to_json(const arith::IdentityVerdict& v) {
    Json j{{"name", v.name}, {"pass", v.pass}, {"checked", v.checked}, {"failures", v.failures},
           {"counterexamples", v.counterexamples}};
    if (v.informational) j["informational"] = true;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline Json to_json(const vanishing::VanishingResult& r) {
    Json j = exact(r.bound);
    j["r"] = r.query.r;
    j["n"] = r.query.n;
    j["sigma"] = to_string(r.query.sigma);
    j["sign"] = to_string(r.query.sign);
    j["threshold"] = exact(r.threshold);
    j["moment"] = exact(r.moment);
    j["assumptions"] = r.assumptions;
    return j;
}

}  // namespace lowzero::io
