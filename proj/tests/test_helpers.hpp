#pragma once

// Shared fixtures for the test suites: temp-file helpers and a generator
// that dumps built-in P2 correlators into the table file format, with an
// optional consistent corruption of one curve degree (every degree-d value
// scaled) for checker-sensitivity tests.

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "gerbegw/base_theory.hpp"

namespace gerbegw::testing {

inline std::string write_temp_json(const nlohmann::json& doc, const std::string& tag) {
    std::string path = std::string("gerbegw_test_") + tag + ".json";
    std::ofstream out(path);
    out << doc.dump(2);
    return path;
}

inline nlohmann::json p2_correlator_table(long beta_max, unsigned extra_points,
                                          long corrupt_degree = -1,
                                          const Rational& scale = Rational(1)) {
    BaseTheory p2 = builtin_theory("P2");
    nlohmann::json doc{
        {"name", "P2-table"},
        {"dim", 2},
        {"basis",
         {{{"label", "1"}, {"degree", 0}},
          {{"label", "H"}, {"degree", 2}},
          {{"label", "pt"}, {"degree", 4}}}},
        {"pairing", {{"0", "0", "1"}, {"0", "1", "0"}, {"1", "0", "0"}}},
        {"c1_tx", {3}},
        {"complete_up_to", {{"beta", {beta_max}}, {"n", 3 + extra_points}}},
    };
    const char* labels[3] = {"1", "H", "pt"};
    nlohmann::json invs = nlohmann::json::array();
    for (long d = 0; d <= beta_max; ++d)
        for (size_t a = 0; a < 3; ++a)
            for (size_t b = a; b < 3; ++b)
                for (size_t e = 0; e < 3; ++e)
                    for (unsigned p = 0; p <= extra_points; ++p) {
                        std::vector<BaseInsertion> ins{{a, 0}, {b, 0}, {e, 0}};
                        for (unsigned k = 0; k < p; ++k) ins.push_back({2, 0});
                        CurveClass beta({d});
                        Rational v = p2.invariant(ins, beta);
                        if (v.is_zero()) continue;
                        if (d == corrupt_degree) v *= scale;
                        nlohmann::json slots = nlohmann::json::array();
                        slots.push_back({{"class", labels[a]}});
                        slots.push_back({{"class", labels[b]}});
                        slots.push_back({{"class", labels[e]}});
                        for (unsigned k = 0; k < p; ++k) slots.push_back({{"class", "pt"}});
                        invs.push_back(
                            {{"beta", {d}}, {"insertions", slots}, {"value", v.str()}});
                    }
    doc["invariants"] = invs;
    return doc;
}

/// A rank-2 base theory: P1 x P1 with basis {1, H1, H2, pt} and curve
/// classes graded by bidegree. Every value reduces by the divisor and
/// string equations to the elementary counts through generic points
///   N_(1,0) = N_(0,1) = 1 (ruling lines) and N_(1,1) = 1,
/// with the beta = 0 part the classical triple intersection.
inline nlohmann::json p1xp1_table(unsigned n_max) {
    nlohmann::json doc{
        {"name", "P1xP1"},
        {"dim", 2},
        {"basis",
         {{{"label", "1"}, {"degree", 0}},
          {{"label", "H1"}, {"degree", 2}},
          {{"label", "H2"}, {"degree", 2}},
          {{"label", "pt"}, {"degree", 4}}}},
        {"pairing",
         {{"0", "0", "0", "1"}, {"0", "0", "1", "0"}, {"0", "1", "0", "0"}, {"1", "0", "0", "0"}}},
        {"c1_tx", {2, 2}},
        {"complete_up_to", {{"beta", {1, 1}}, {"n", n_max}}},
    };
    // bidegree exponents of the basis classes
    const long e1[4] = {0, 1, 0, 1};
    const long e2[4] = {0, 0, 1, 1};
    const char* labels[4] = {"1", "H1", "H2", "pt"};
    nlohmann::json invs = nlohmann::json::array();
    for (long b1 = 0; b1 <= 1; ++b1)
        for (long b2 = 0; b2 <= 1; ++b2)
            for (unsigned n = (b1 || b2) ? 0 : 3; n <= n_max; ++n) {
                std::vector<size_t> idx(n, 0);
                while (true) {
                    long n_pt = 0, n_h1 = 0, n_h2 = 0, n_one = 0, codim = 0;
                    for (size_t t : idx) {
                        codim += e1[t] + e2[t];
                        if (t == 0) ++n_one;
                        else if (t == 1) ++n_h1;
                        else if (t == 2) ++n_h2;
                        else ++n_pt;
                    }
                    long vdim = 2 + 2 * (b1 + b2) + static_cast<long>(n) - 3;
                    Rational v(0);
                    if (codim == vdim) {
                        if (b1 == 0 && b2 == 0) {
                            long s1 = 0, s2 = 0;
                            for (size_t t : idx) s1 += e1[t], s2 += e2[t];
                            if (n == 3 && s1 == 1 && s2 == 1) v = Rational(1);
                        } else if (n_one == 0 && n_pt == 2 * (b1 + b2) - 1) {
                            v = Rational(1);
                            for (long k = 0; k < n_h1; ++k) v *= Rational(b1);
                            for (long k = 0; k < n_h2; ++k) v *= Rational(b2);
                        }
                    }
                    if (!v.is_zero()) {
                        nlohmann::json slots = nlohmann::json::array();
                        for (size_t t : idx) slots.push_back({{"class", labels[t]}});
                        invs.push_back(
                            {{"beta", {b1, b2}}, {"insertions", slots}, {"value", v.str()}});
                    }
                    size_t pos = n;
                    bool done = n == 0;
                    while (pos > 0) {
                        --pos;
                        if (++idx[pos] < 4) {
                            for (size_t k = pos + 1; k < n; ++k) idx[k] = idx[pos];
                            break;
                        }
                        if (pos == 0) done = true;
                    }
                    if (done) break;
                }
            }
    doc["invariants"] = invs;
    return doc;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace gerbegw::testing
