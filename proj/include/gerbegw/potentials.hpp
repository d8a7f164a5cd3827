#pragma once

/**
 * @file potentials.hpp
 * @brief Truncated genus-0 descendant potentials and the decomposition check.
 *
 * Potentials are finite jets of the generating functions: a map from
 * (curve class, multiset of variable slots) to an exact coefficient. The
 * 1/n! of the ordered-tuple sum and the multiset symmetry factor are folded
 * in, so the stored coefficient of a monomial is invariant / prod(mult!).
 * Both sides of the decomposition check use this one convention.
 *
 * verify_decomposition compares, coefficient by coefficient,
 *   - the gerbe potential assembled from character-basis invariants, against
 *   - (1/|G|^2) sum_rho of base potentials in the rho-tagged variables with
 *     Novikov coefficients twisted by chi_rho(g_beta),
 * and reports the first discrepancy if the two ever differ.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gerbegw/abelian.hpp"
#include "gerbegw/base_theory.hpp"
#include "gerbegw/curve_class.hpp"
#include "gerbegw/cyclotomic.hpp"
#include "gerbegw/errors.hpp"
#include "gerbegw/gerbe_core.hpp"
#include "gerbegw/gerbe_gw.hpp"

namespace gerbegw {

struct Truncation {
    CurveClass beta_max;
    unsigned n_max = 3;
    unsigned psi_max = 0;
};

/// One insertion variable: a base class index, an optional character tag
/// (empty for base-theory variables), and a descendant power.
struct VarSlot {
    size_t class_index = 0;
    std::vector<long> rho;
    unsigned psi = 0;

    friend auto operator<=>(const VarSlot&, const VarSlot&) = default;
};

struct TermKey {
    CurveClass beta;
    std::vector<VarSlot> slots;  // kept sorted

    friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

class TruncatedPotential {
public:
    TruncatedPotential() = default;
    explicit TruncatedPotential(Truncation tr) : tr_(std::move(tr)) {}

    const Truncation& truncation() const { return tr_; }
    const std::map<TermKey, CycNumber>& terms() const { return terms_; }

    void add(TermKey key, const CycNumber& value) {
        if (value.is_zero()) return;
        std::sort(key.slots.begin(), key.slots.end());
        auto [it, fresh] = terms_.emplace(std::move(key), value);
        if (!fresh) {
            it->second += value;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Coefficient lookup; slot order is irrelevant, absence means zero.
    CycNumber coefficient_of(const CurveClass& beta, std::vector<VarSlot> slots) const {
        std::sort(slots.begin(), slots.end());
        auto it = terms_.find(TermKey{beta, std::move(slots)});
        return it == terms_.end() ? CycNumber() : it->second;
    }

private:
    Truncation tr_;
    std::map<TermKey, CycNumber> terms_;
};

namespace detail {

/// Visits every multiset of size n over `types` as a non-decreasing index
/// vector; with the multiplicity factorial product handed along.
template <typename F>
void for_each_multiset(size_t type_count, size_t n, F&& visit) {
    std::vector<size_t> idx(n, 0);
    if (n == 0) {
        visit(idx);
        return;
    }
    if (type_count == 0) return;
    while (true) {
        visit(idx);
        size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < type_count) {
                for (size_t k = pos + 1; k < n; ++k) idx[k] = idx[pos];
                break;
            }
            if (pos == 0) return;
        }
    }
}

inline Rational multiset_symmetry_factor(const std::vector<size_t>& idx) {
    Rational f(1);
    size_t run = 1;
    for (size_t i = 1; i <= idx.size(); ++i) {
        if (i < idx.size() && idx[i] == idx[i - 1]) {
            ++run;
            f *= Rational(static_cast<long>(run));
        } else {
            run = 1;
        }
    }
    return f;  // product of mult! over the multiset
}

inline void check_truncation_size(size_t type_count, const Truncation& tr, long limit) {
    double total = 0, layer = 1;
    for (unsigned n = 0; n <= tr.n_max; ++n) {
        total += layer;
        layer = layer * (static_cast<double>(type_count) + n) / (n + 1);
        if (total > static_cast<double>(limit))
            throw TruncationTooLarge("truncation enumerates more than " + std::to_string(limit) +
                                     " terms");
    }
}

} // namespace detail

/// Finite jet of the base descendant potential.
inline TruncatedPotential build_base_potential(const BaseTheory& th, const Truncation& tr,
                                               long limit = 5'000'000) {
    struct SlotType {
        size_t class_index;
        unsigned psi;
    };
    std::vector<SlotType> types;
    for (size_t c = 0; c < th.basis().rank(); ++c)
        for (unsigned p = 0; p <= tr.psi_max; ++p) types.push_back({c, p});
    detail::check_truncation_size(types.size(), tr, limit);

    TruncatedPotential pot(tr);
    for (const auto& beta : classes_up_to(tr.beta_max)) {
        for (unsigned n = 0; n <= tr.n_max; ++n) {
            if (beta.is_zero() && n < 3) continue;  // unstable
            detail::for_each_multiset(types.size(), n, [&](const std::vector<size_t>& idx) {
                std::vector<BaseInsertion> ins;
                ins.reserve(n);
                for (size_t t : idx) ins.push_back({types[t].class_index, types[t].psi});
                Rational v = th.invariant(ins, beta);
                if (v.is_zero()) return;
                v /= detail::multiset_symmetry_factor(idx);
                TermKey key;
                key.beta = beta;
                for (size_t t : idx) key.slots.push_back({types[t].class_index, {}, types[t].psi});
                pot.add(std::move(key), CycNumber(v));
            });
        }
    }
    return pot;
}

/// Finite jet of the gerbe descendant potential over the character-tagged
/// variables; coefficients come from the character-basis invariants.
inline TruncatedPotential build_gerbe_potential(const GerbeSpec& spec, const BaseTheory& th,
                                                const Truncation& tr, long limit = 5'000'000) {
    struct SlotType {
        size_t class_index;
        Character rho;
        unsigned psi;
    };
    auto characters = enumerate_characters(spec.group());
    std::vector<SlotType> types;
    for (size_t c = 0; c < th.basis().rank(); ++c)
        for (const auto& rho : characters)
            for (unsigned p = 0; p <= tr.psi_max; ++p) types.push_back({c, rho, p});
    detail::check_truncation_size(types.size(), tr, limit);

    TruncatedPotential pot(tr);
    for (const auto& beta : classes_up_to(tr.beta_max)) {
        for (unsigned n = 0; n <= tr.n_max; ++n) {
            if (beta.is_zero() && n < 3) continue;
            detail::for_each_multiset(types.size(), n, [&](const std::vector<size_t>& idx) {
                // Mixed-character tuples vanish identically; skip them early.
                for (size_t k = 1; k < idx.size(); ++k)
                    if (!(types[idx[k]].rho == types[idx[0]].rho)) return;
                std::vector<RhoInsertion> ins;
                ins.reserve(n);
                for (size_t t : idx) ins.push_back({types[t].rho, types[t].class_index, types[t].psi});
                CycNumber v = rho_invariant(spec, th, ins, beta);
                if (v.is_zero()) return;
                v *= Rational(1) / detail::multiset_symmetry_factor(idx);
                TermKey key;
                key.beta = beta;
                for (size_t t : idx)
                    key.slots.push_back({types[t].class_index, types[t].rho.residues(), types[t].psi});
                pot.add(std::move(key), v);
            });
        }
    }
    return pot;
}

/// chi_rho(g_beta): the twist a character applies to the Novikov variable
/// Q^beta; multiplicative in beta.
inline CycNumber novikov_twist(const GerbeSpec& spec, const Character& rho,
                               const CurveClass& beta) {
    if (!(rho.group() == spec.group()))
        throw GroupMismatch("character does not belong to the gerbe band");
    return character_value(rho, g_beta(spec, beta));
}

struct DecompositionWitness {
    TermKey key;
    CycNumber lhs;
    CycNumber rhs;
};

struct DecompositionReport {
    bool equal = true;
    size_t checked_terms = 0;
    std::optional<DecompositionWitness> witness;
};

/// The right-hand side of the decomposition identity assembled without the
/// gerbe engine: (1/|G|^2) sum_rho of the base potential in rho-tagged
/// variables, Novikov-twisted by chi_rho(g_beta).
inline std::map<TermKey, CycNumber> build_twisted_reference(const GerbeSpec& spec,
                                                            const BaseTheory& th,
                                                            const Truncation& tr,
                                                            long limit = 5'000'000) {
    TruncatedPotential base = build_base_potential(th, tr, limit);
    long order = spec.group().order();
    Rational norm(1, order * order);
    std::map<TermKey, CycNumber> rhs;
    for (const auto& rho : enumerate_characters(spec.group())) {
        for (const auto& [key, coeff] : base.terms()) {
            CycNumber twisted = novikov_twist(spec, rho, key.beta) * coeff * norm;
            TermKey tagged;
            tagged.beta = key.beta;
            tagged.slots = key.slots;
            for (auto& s : tagged.slots) s.rho = rho.residues();
            auto [it, fresh] = rhs.emplace(std::move(tagged), twisted);
            if (!fresh) it->second += twisted;
        }
    }
    for (auto it = rhs.begin(); it != rhs.end();)
        it = it->second.is_zero() ? rhs.erase(it) : std::next(it);
    return rhs;
}

/// Coefficient-wise comparison; the first offending key (in key order)
/// becomes the witness.
inline DecompositionReport compare_term_maps(const std::map<TermKey, CycNumber>& lhs,
                                             const std::map<TermKey, CycNumber>& rhs) {
    DecompositionReport report;
    auto li = lhs.begin();
    auto ri = rhs.begin();
    while (li != lhs.end() || ri != rhs.end()) {
        ++report.checked_terms;
        bool only_left = ri == rhs.end() || (li != lhs.end() && li->first < ri->first);
        bool only_right = li == lhs.end() || (ri != rhs.end() && ri->first < li->first);
        if (only_left) {
            report.equal = false;
            report.witness = {li->first, li->second, CycNumber()};
            return report;
        }
        if (only_right) {
            report.equal = false;
            report.witness = {ri->first, CycNumber(), ri->second};
            return report;
        }
        if (!(li->second == ri->second)) {
            report.equal = false;
            report.witness = {li->first, li->second, ri->second};
            return report;
        }
        ++li;
        ++ri;
    }
    return report;
}

/// Exact coefficient-wise comparison of the two sides of the genus-0
/// decomposition identity over the given truncation.
inline DecompositionReport verify_decomposition(const GerbeSpec& spec, const BaseTheory& th,
                                                const Truncation& tr, long limit = 5'000'000) {
    TruncatedPotential lhs = build_gerbe_potential(spec, th, tr, limit);
    return compare_term_maps(lhs.terms(), build_twisted_reference(spec, th, tr, limit));
}

/// Scalar sanity of the genus scaling: the genus-0 prefactor is 1/|G|^2 and
/// consecutive genera differ by |G|^2.
inline bool genus_g_decomposition_factor_check(const GerbeSpec& spec, unsigned genus) {
    long order = spec.group().order();
    if (!(genus_g_scale(spec, 0) == Rational(1, order * order))) return false;
    Rational step(order * order);
    return genus_g_scale(spec, genus) * step == genus_g_scale(spec, genus + 1);
}

} // namespace gerbegw
