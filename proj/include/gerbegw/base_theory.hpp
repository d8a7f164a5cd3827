#pragma once

/**
 * @file base_theory.hpp
 * @brief Genus-0 Gromov-Witten data of the base variety.
 *
 * A BaseTheory supplies a graded cohomology basis, the Poincare pairing,
 * the first-Chern-class functional on curve classes, and an exact invariant
 * oracle <phi_{i_1} psibar^{k_1}, ...>_{0,n,beta}. Two built-in providers
 * (P1, P2) answer primary (psi = 0) queries through string/divisor
 * reductions; descendant data can be ingested from JSON tables.
 *
 * Built-in reductions:
 *  - queries whose total insertion codimension misses the virtual dimension
 *    return 0;
 *  - fundamental-class insertions kill positive-degree invariants (string
 *    equation), and at beta = 0, n = 3 the value is the triple intersection;
 *  - divisor insertions strip off as deg(beta) factors, leaving point
 *    counts: degree-d rational plane curves through 3d-1 points for P2.
 */

#include <gmpxx.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gerbegw/curve_class.hpp"
#include "gerbegw/errors.hpp"
#include "gerbegw/matrix.hpp"
#include "gerbegw/rational.hpp"

namespace gerbegw {

struct CohomologyClass {
    std::string label;
    unsigned degree = 0;  // real (even) cohomological degree
};

struct CohomologyBasis {
    std::vector<CohomologyClass> classes;
    Matrix<Rational> pairing;

    size_t rank() const { return classes.size(); }

    size_t index_of(const std::string& label) const {
        for (size_t i = 0; i < classes.size(); ++i)
            if (classes[i].label == label) return i;
        throw DomainError("unknown cohomology class label '" + label + "'");
    }
};

struct BaseInsertion {
    size_t class_index = 0;
    unsigned psi_power = 0;

    friend auto operator<=>(const BaseInsertion&, const BaseInsertion&) = default;
};

/// N_d: rational degree-d plane curves through 3d-1 general points.
/// N_1 = 1 and
///   N_d = sum_{d1+d2=d} N_{d1} N_{d2} (d1^2 d2^2 C(3d-4,3d1-2) - d1^3 d2 C(3d-4,3d1-1)).
inline Rational kontsevich_nd(long d) {
    if (d < 1) throw DomainError("kontsevich_nd: d must be >= 1");
    static std::map<long, Rational> memo{{1, Rational(1)}};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::function<const Rational&(long)> nd = [&](long m) -> const Rational& {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        auto binom = [](unsigned long n, unsigned long k) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), n, k);
            return Rational(b);
        };
        Rational total(0);
        for (long d1 = 1; d1 < m; ++d1) {
            long d2 = m - d1;
            Rational a = Rational(d1 * d1 * d2 * d2) * binom(3 * m - 4, 3 * d1 - 2);
            Rational b = Rational(d1 * d1 * d1 * d2) * binom(3 * m - 4, 3 * d1 - 1);
            total += nd(d1) * nd(d2) * (a - b);
        }
        return memo.emplace(m, total).first->second;
    };
    return nd(d);
}

class BaseTheory {
public:
    const std::string& name() const { return name_; }
    const CohomologyBasis& basis() const { return basis_; }
    unsigned dim() const { return dim_; }
    size_t h2_rank() const { return c1_.size(); }
    const std::vector<long>& c1_coefficients() const { return c1_; }

    /// int_beta c1(TX).
    long c1_pairing(const CurveClass& beta) const {
        if (beta.rank() != c1_.size())
            throw DomainError("curve class rank does not match the theory");
        long v = 0;
        for (size_t i = 0; i < c1_.size(); ++i) v += c1_[i] * beta.coords()[i];
        return v;
    }

    /// Exact invariant <prod_i phi_{c_i} psibar^{k_i}>_{0,n,beta}.
    Rational invariant(std::vector<BaseInsertion> insertions, const CurveClass& beta) const {
        if (beta.rank() != c1_.size())
            throw DomainError("curve class rank does not match the theory");
        if (beta.is_zero() && insertions.size() < 3)
            throw UnstableTriple("(0,n,beta) unstable: beta = 0 and n < 3");
        for (const auto& ins : insertions)
            if (ins.class_index >= basis_.rank())
                throw DomainError("insertion class index out of range");

        std::sort(insertions.begin(), insertions.end());
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            auto it = cache_->values.find({beta, insertions});
            if (it != cache_->values.end()) return it->second;
        }
        Rational v = evaluate(insertions, beta);
        std::lock_guard<std::mutex> lock(cache_->mu);
        cache_->values.emplace(CacheKey{beta, insertions}, v);
        return v;
    }

    static BaseTheory builtin(const std::string& name);
    static BaseTheory from_table_file(const std::string& path);
    static BaseTheory from_table_json(const nlohmann::json& doc, const std::string& origin);

private:
    enum class Provider { p1, p2, table };

    struct TableBounds {
        CurveClass beta;
        long n = 0;
    };
    struct TableData {
        std::map<std::pair<CurveClass, std::vector<BaseInsertion>>, Rational> entries;
        std::optional<TableBounds> complete_up_to;
    };
    using CacheKey = std::pair<CurveClass, std::vector<BaseInsertion>>;
    struct Cache {
        std::mutex mu;
        std::map<CacheKey, Rational> values;
    };

    long vdim(size_t n, const CurveClass& beta) const {
        return static_cast<long>(dim_) + c1_pairing(beta) + static_cast<long>(n) - 3;
    }

    Rational evaluate(const std::vector<BaseInsertion>& ins, const CurveClass& beta) const {
        long codim = 0;
        for (const auto& i : ins)
            codim += static_cast<long>(basis_.classes[i.class_index].degree) / 2 +
                     static_cast<long>(i.psi_power);
        if (codim != vdim(ins.size(), beta)) return Rational(0);

        if (provider_ == Provider::table) return evaluate_table(ins, beta);

        for (const auto& i : ins)
            if (i.psi_power > 0)
                throw UnsupportedDescendant("built-in theories answer primary insertions only");

        if (beta.is_zero()) {
            if (ins.size() != 3) return Rational(0);
            // Triple intersection; basis classes are powers of the hyperplane.
            unsigned total = 0;
            for (const auto& i : ins) total += basis_.classes[i.class_index].degree / 2;
            return total == dim_ ? Rational(1) : Rational(0);
        }

        long d = beta.coords()[0];
        size_t n_fund = 0, n_div = 0, n_pt = 0;
        for (const auto& i : ins) {
            unsigned c = basis_.classes[i.class_index].degree / 2;
            if (c == 0) ++n_fund;
            else if (c == 1) ++n_div;
            else ++n_pt;
        }
        if (n_fund > 0) return Rational(0);  // string equation

        if (provider_ == Provider::p1) {
            // Divisor reduction leaves <>_{0,0,d}, nonzero only in degree 1.
            if (d != 1) return Rational(0);
            return Rational(1);
        }
        // P2: strip n_div hyperplanes, leaving N_d through 3d-1 points.
        if (static_cast<long>(n_pt) != 3 * d - 1) return Rational(0);
        Rational v = kontsevich_nd(d);
        for (size_t i = 0; i < n_div; ++i) v *= Rational(d);
        return v;
    }

    Rational evaluate_table(const std::vector<BaseInsertion>& ins, const CurveClass& beta) const {
        auto it = table_->entries.find({beta, ins});
        if (it != table_->entries.end()) return it->second;
        if (table_->complete_up_to && leq(beta, table_->complete_up_to->beta) &&
            static_cast<long>(ins.size()) <= table_->complete_up_to->n)
            return Rational(0);
        std::string q = "beta=" + beta.str() + " insertions=[";
        for (size_t i = 0; i < ins.size(); ++i) {
            if (i) q += ",";
            q += basis_.classes[ins[i].class_index].label;
            if (ins[i].psi_power) q += ":psi^" + std::to_string(ins[i].psi_power);
        }
        throw MissingTableEntry("no table entry for " + q + "]");
    }

    std::string name_;
    CohomologyBasis basis_;
    unsigned dim_ = 0;
    std::vector<long> c1_;
    Provider provider_ = Provider::table;
    std::shared_ptr<const TableData> table_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline BaseTheory BaseTheory::builtin(const std::string& name) {
    BaseTheory th;
    if (name == "P1") {
        th.name_ = "P1";
        th.dim_ = 1;
        th.c1_ = {2};
        th.basis_.classes = {{"1", 0}, {"pt", 2}};
        th.basis_.pairing = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
        th.provider_ = Provider::p1;
    } else if (name == "P2") {
        th.name_ = "P2";
        th.dim_ = 2;
        th.c1_ = {3};
        th.basis_.classes = {{"1", 0}, {"H", 2}, {"pt", 4}};
        th.basis_.pairing = {{Rational(0), Rational(0), Rational(1)},
                             {Rational(0), Rational(1), Rational(0)},
                             {Rational(1), Rational(0), Rational(0)}};
        th.provider_ = Provider::p2;
    } else {
        throw UnknownTheory("unknown built-in theory '" + name + "' (expected P1 or P2)");
    }
    return th;
}

inline BaseTheory BaseTheory::from_table_json(const nlohmann::json& doc, const std::string& origin) {
    auto fail = [&](const std::string& what) -> void {
        throw ParseError(origin + ": " + what);
    };
    auto need = [&](const nlohmann::json& j, const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
        return j.at(key);
    };

    BaseTheory th;
    th.provider_ = Provider::table;
    if (!doc.is_object()) fail("top-level value must be an object");
    th.name_ = need(doc, "name").get<std::string>();
    th.dim_ = need(doc, "dim").get<unsigned>();

    for (const auto& c : need(doc, "basis")) {
        CohomologyClass cc;
        cc.label = need(c, "label").get<std::string>();
        cc.degree = need(c, "degree").get<unsigned>();
        if (cc.degree % 2 != 0) fail("class '" + cc.label + "' has odd degree");
        th.basis_.classes.push_back(cc);
    }
    if (th.basis_.classes.empty()) fail("empty basis");
    if (th.basis_.classes[0].degree != 0) fail("basis slot 0 must be the fundamental class");
    for (size_t i = 0; i < th.basis_.classes.size(); ++i)
        for (size_t j = i + 1; j < th.basis_.classes.size(); ++j)
            if (th.basis_.classes[i].label == th.basis_.classes[j].label)
                fail("duplicate class label '" + th.basis_.classes[i].label + "'");

    const auto& pairing = need(doc, "pairing");
    if (pairing.size() != th.basis_.rank()) fail("pairing matrix has wrong shape");
    for (const auto& row : pairing) {
        if (row.size() != th.basis_.rank()) fail("pairing matrix has wrong shape");
        std::vector<Rational> r;
        for (const auto& cell : row) r.push_back(Rational::parse(cell.get<std::string>()));
        th.basis_.pairing.push_back(std::move(r));
    }
    try {
        matrix_inverse(th.basis_.pairing);
    } catch (const InconsistentPairing&) {
        throw InconsistentPairing(origin + ": pairing matrix is singular");
    }

    for (const auto& c : need(doc, "c1_tx")) th.c1_.push_back(c.get<long>());
    if (th.c1_.empty()) fail("c1_tx must have at least one coefficient");

    auto table = std::make_shared<TableData>();
    if (doc.contains("complete_up_to")) {
        const auto& b = doc.at("complete_up_to");
        TableBounds bounds;
        std::vector<long> bb;
        for (const auto& x : need(b, "beta")) bb.push_back(x.get<long>());
        if (bb.size() != th.c1_.size()) fail("complete_up_to.beta has wrong rank");
        bounds.beta = CurveClass(bb);
        bounds.n = need(b, "n").get<long>();
        table->complete_up_to = bounds;
    }
    for (const auto& e : need(doc, "invariants")) {
        if (e.contains("genus") && e.at("genus").get<long>() != 0) continue;  // reserved
        std::vector<long> bb;
        for (const auto& x : need(e, "beta")) bb.push_back(x.get<long>());
        if (bb.size() != th.c1_.size()) fail("invariant entry beta has wrong rank");
        CurveClass beta(bb);
        std::vector<BaseInsertion> ins;
        for (const auto& slot : need(e, "insertions")) {
            BaseInsertion bi;
            bi.class_index = th.basis_.index_of(need(slot, "class").get<std::string>());
            bi.psi_power = slot.contains("psi") ? slot.at("psi").get<unsigned>() : 0;
            ins.push_back(bi);
        }
        std::sort(ins.begin(), ins.end());
        Rational value = Rational::parse(need(e, "value").get<std::string>());
        auto [it, fresh] = table->entries.emplace(std::make_pair(beta, ins), value);
        if (!fresh && !(it->second == value)) fail("conflicting duplicate invariant entries");
    }
    th.table_ = table;
    return th;
}

inline BaseTheory BaseTheory::from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return from_table_json(doc, path);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

/// Built-in provider by name; throws UnknownTheory for anything else.
inline BaseTheory builtin_theory(const std::string& name) { return BaseTheory::builtin(name); }

/// Table provider from a JSON file (see README for the schema).
inline BaseTheory ingest_table(const std::string& path) { return BaseTheory::from_table_file(path); }

/// Free-function form of the invariant oracle.
inline Rational base_invariant(const BaseTheory& th, std::vector<BaseInsertion> insertions,
                               const CurveClass& beta) {
    return th.invariant(std::move(insertions), beta);
}

} // namespace gerbegw
