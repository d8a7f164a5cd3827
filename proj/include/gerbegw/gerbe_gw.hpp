#pragma once

/**
 * @file gerbe_gw.hpp
 * @brief The invariant engine for banded abelian gerbes.
 *
 * Twisted-sector invariants reduce to base invariants scaled by 1/|G| when
 * the sector vector is admissible and vanish otherwise. In the character
 * basis alpha_rho = (1/|G|) sum_g chi_rho(g^{-1}) eps_g^* alpha the
 * invariants collapse to a Kronecker delta in the characters times
 * (1/|G|^2) base value times chi_rho(g_beta), with g_beta the inverse of
 * the per-factor kappa residues. twisted_from_rho inverts the character
 * transform and must reproduce twisted_invariant exactly; it exists as a
 * consistency oracle and errors if the round trip ever leaves the
 * rationals.
 */

#include <vector>

#include "gerbegw/abelian.hpp"
#include "gerbegw/base_theory.hpp"
#include "gerbegw/curve_class.hpp"
#include "gerbegw/cyclotomic.hpp"
#include "gerbegw/errors.hpp"
#include "gerbegw/gerbe_core.hpp"

namespace gerbegw {

/// Insertion on the twisted sector g: a base class transported by the
/// sector identification, with an optional descendant power.
struct TwistedInsertion {
    GroupElement sector;
    size_t class_index = 0;
    unsigned psi_power = 0;
};

/// Insertion in the character basis.
struct RhoInsertion {
    Character rho;
    size_t class_index = 0;
    unsigned psi_power = 0;
};

/// (1/|G|) times the base invariant when the sector vector is admissible;
/// exactly 0 otherwise.
inline Rational twisted_invariant(const GerbeSpec& spec, const BaseTheory& th,
                                  const std::vector<TwistedInsertion>& ins,
                                  const CurveClass& beta) {
    std::vector<GroupElement> sectors;
    std::vector<BaseInsertion> base_ins;
    sectors.reserve(ins.size());
    base_ins.reserve(ins.size());
    for (const auto& i : ins) {
        sectors.push_back(i.sector);
        base_ins.push_back({i.class_index, i.psi_power});
    }
    if (!is_admissible(spec, sectors, beta)) return Rational(0);
    return th.invariant(std::move(base_ins), beta) / Rational(spec.group().order());
}

/// g_beta = (kappa^(1)(beta)^{-1}, ..., kappa^(k)(beta)^{-1}); additive in beta.
inline GroupElement g_beta(const GerbeSpec& spec, const CurveClass& beta) {
    std::vector<long> res(spec.num_factors());
    for (size_t j = 0; j < spec.num_factors(); ++j) res[j] = -spec.kappa(j, beta);
    return GroupElement(spec.group(), std::move(res));
}

/// Character-basis invariant: 0 unless all rho_i agree, in which case
/// (1/|G|^2) * base invariant * chi_rho(g_beta).
inline CycNumber rho_invariant(const GerbeSpec& spec, const BaseTheory& th,
                               const std::vector<RhoInsertion>& ins, const CurveClass& beta) {
    if (ins.empty()) {
        // The empty monomial is the same object in both bases, so the
        // admissibility delta applies directly.
        if (!is_admissible(spec, {}, beta)) return CycNumber();
        return CycNumber(th.invariant({}, beta) / Rational(spec.group().order()));
    }
    for (const auto& i : ins)
        if (!(i.rho.group() == spec.group()))
            throw GroupMismatch("character does not belong to the gerbe band");
    for (size_t i = 1; i < ins.size(); ++i)
        if (!(ins[i].rho == ins[0].rho)) return CycNumber();
    std::vector<BaseInsertion> base_ins;
    base_ins.reserve(ins.size());
    for (const auto& i : ins) base_ins.push_back({i.class_index, i.psi_power});
    Rational v = th.invariant(std::move(base_ins), beta);
    if (v.is_zero()) return CycNumber();
    long N = spec.group().order();
    return character_value(ins[0].rho, g_beta(spec, beta)) * (v / Rational(N * N));
}

/// Recomputes twisted_invariant by expanding each sector insertion in the
/// character basis, eps_g^* alpha = sum_rho chi_rho(g) alpha_rho, and
/// summing rho_invariant over character tuples. Tuples with two distinct
/// characters contribute exactly zero by the delta clause of rho_invariant,
/// so the sum runs over its support, the diagonal tuples. Must coincide
/// with twisted_invariant; a non-rational result is an implementation bug.
inline Rational twisted_from_rho(const GerbeSpec& spec, const BaseTheory& th,
                                 const std::vector<TwistedInsertion>& ins,
                                 const CurveClass& beta) {
    const size_t n = ins.size();
    if (n == 0) {
        auto r0 = rho_invariant(spec, th, {}, beta).as_rational();
        if (!r0) throw InternalInconsistency("empty transform left the rationals");
        return *r0;
    }
    CycNumber total;
    for (const auto& rho : enumerate_characters(spec.group())) {
        std::vector<RhoInsertion> rins;
        rins.reserve(n);
        for (const auto& i : ins) rins.push_back({rho, i.class_index, i.psi_power});
        CycNumber val = rho_invariant(spec, th, rins, beta);
        if (val.is_zero()) continue;
        for (const auto& i : ins) val *= character_value(rho, i.sector);
        total += val;
    }
    auto r = total.as_rational();
    if (!r)
        throw InternalInconsistency("character transform round trip left the rationals");
    return *r;
}

/// |G|^(2g-2) as an exact rational; 1/|G|^2 at genus 0.
inline Rational genus_g_scale(const GerbeSpec& spec, unsigned genus) {
    long N = spec.group().order();
    Rational v(1);
    if (genus >= 1) {
        for (unsigned i = 0; i < 2 * genus - 2; ++i) v *= Rational(N);
    } else {
        v = Rational(1, N * N);
    }
    return v;
}

} // namespace gerbegw
