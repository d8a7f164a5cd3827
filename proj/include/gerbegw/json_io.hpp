#pragma once

/// JSON views of the exact value types. Rationals serialize as "p/q"
/// strings and cyclotomic numbers as {level, coeffs} so round trips stay
/// exact.

#include <json.hpp>

#include "gerbegw/base_theory.hpp"
#include "gerbegw/cyclotomic.hpp"
#include "gerbegw/potentials.hpp"
#include "gerbegw/rational.hpp"

namespace gerbegw {

inline nlohmann::json to_json(const Rational& r) { return r.str(); }

inline nlohmann::json to_json(const CycNumber& z) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : z.coeffs()) coeffs.push_back(c.str());
    return {{"level", z.level()}, {"coeffs", coeffs}};
}

/// Exact value as the leanest faithful JSON: a rational string when the
/// value is rational, the {level, coeffs} object otherwise.
inline nlohmann::json value_to_json(const CycNumber& z) {
    if (auto r = z.as_rational()) return r->str();
    return to_json(z);
}

inline nlohmann::json to_json(const TermKey& key, const BaseTheory& th) {
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& s : key.slots) {
        nlohmann::json slot{{"class", th.basis().classes[s.class_index].label}};
        if (!s.rho.empty()) slot["rho"] = s.rho;
        if (s.psi) slot["psi"] = s.psi;
        slots.push_back(slot);
    }
    return {{"beta", key.beta.coords()}, {"term", slots}};
}

inline nlohmann::json to_json(const DecompositionReport& report, const BaseTheory& th) {
    nlohmann::json j{{"equal", report.equal},
                     {"checked_terms", report.checked_terms},
                     {"witness", nullptr}};
    if (report.witness) {
        nlohmann::json w = to_json(report.witness->key, th);
        w["lhs"] = to_json(report.witness->lhs);
        w["rhs"] = to_json(report.witness->rhs);
        j["witness"] = w;
    }
    return j;
}

inline nlohmann::json to_json(const TruncatedPotential& pot, const BaseTheory& th) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, value] : pot.terms()) {
        nlohmann::json t = to_json(key, th);
        t["value"] = value_to_json(value);
        terms.push_back(t);
    }
    return terms;
}

} // namespace gerbegw
