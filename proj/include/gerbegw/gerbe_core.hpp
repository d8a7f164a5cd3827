#pragma once

/**
 * @file gerbe_core.hpp
 * @brief Gerbe data and the discrete sector/node combinatorics.
 *
 * A GerbeSpec is a finite abelian band G = prod_j mu_{r^(j)} together with
 * one integer linear functional on curve classes per cyclic factor; for a
 * multi-root gerbe the j-th functional is beta -> deg of the j-th line
 * bundle on beta, and only its residue mod r^(j) is geometrically
 * meaningful. Everything downstream is integer arithmetic on that data:
 *
 *  - admissibility of a sector vector (g_1,...,g_n) for a class beta: the
 *    residues of each factor must sum to the functional's residue;
 *  - the per-marking triples (rho_i, r_i, m_i) with theta_i = m_i/r_i, and
 *    the analogous node triples indexed by boundary splittings (T, beta');
 *  - integer certificates d_i with d_i/r_i = theta_i mod 1 summing to the
 *    exact functional value, and the induced node integers d_{T,beta'};
 *  - ages m_i/r_i and the Riemann-Roch Euler characteristics whose
 *    integrality is equivalent to admissibility.
 */

#include <numeric>
#include <set>
#include <vector>

#include "gerbegw/abelian.hpp"
#include "gerbegw/curve_class.hpp"
#include "gerbegw/errors.hpp"
#include "gerbegw/rational.hpp"

namespace gerbegw {

class GerbeSpec {
public:
    GerbeSpec() = default;

    /// One row of integer functional coefficients per cyclic factor; the
    /// number of columns is the rank of the H_2 lattice.
    GerbeSpec(AbelianGroup group, std::vector<std::vector<long>> kappa_coefficients)
        : group_(std::move(group)), kappa_(std::move(kappa_coefficients)) {
        if (kappa_.size() != group_.num_factors())
            throw DomainError("GerbeSpec: one kappa functional required per cyclic factor");
        for (size_t j = 1; j < kappa_.size(); ++j)
            if (kappa_[j].size() != kappa_[0].size())
                throw DomainError("GerbeSpec: kappa functionals of inconsistent rank");
    }

    const AbelianGroup& group() const { return group_; }
    size_t num_factors() const { return group_.num_factors(); }
    size_t h2_rank() const { return kappa_.empty() ? 0 : kappa_[0].size(); }
    const std::vector<std::vector<long>>& kappa_coefficients() const { return kappa_; }

    /// Integer functional value kappa~^(j)(beta) before reduction.
    long kappa_tilde(size_t j, const CurveClass& beta) const {
        check_factor(j);
        if (beta.rank() != h2_rank())
            throw DomainError("curve class rank does not match the gerbe");
        long v = 0;
        for (size_t i = 0; i < kappa_[j].size(); ++i) v += kappa_[j][i] * beta.coords()[i];
        return v;
    }

    /// The residue kappa^(j)(beta) mod r^(j); additive in beta.
    long kappa(size_t j, const CurveClass& beta) const {
        long r = group_.factors()[j];
        long v = kappa_tilde(j, beta) % r;
        return v < 0 ? v + r : v;
    }

private:
    void check_factor(size_t j) const {
        if (j >= group_.num_factors()) throw DomainError("factor index out of range");
    }

    AbelianGroup group_;
    std::vector<std::vector<long>> kappa_;
};

/// Per-factor marking data (Eq.-level shadow of the i-th marked gerbe):
/// theta = a/r in [0,1), rho = a, r_i = r/gcd(r,a), m_i = a/gcd(r,a).
/// The untwisted case a = 0 yields r_i = 1, m_i = 0.
struct SectorData {
    Rational theta;
    long rho = 0;
    long r_i = 1;
    long m_i = 0;
};

struct NodeData {
    Rational theta;
    long r_node = 1;
    long m_node = 0;
    long d_node = 0;
};

/// Integer certificate: d[j][i] with g_i^(j) = zeta_{r_i^(j)}^{d[j][i]} and
/// sum_i d[j][i]/r_i^(j) equal to the exact value kappa~^(j)(beta)/r^(j).
struct DCertificate {
    std::vector<std::vector<long>> d;  // [factor][marking]
};

/// Which marking's d-value absorbs the correction; the downstream theory is
/// independent of the choice, which the tests exercise with both rules.
enum class DChoiceRule { solve_last, solve_first };

struct BoundaryIndex {
    std::vector<size_t> T;  // 0-based marking indices, excluding n-1
    CurveClass beta_prime;
};

namespace detail {
inline void check_sector_vector(const GerbeSpec& spec, const std::vector<GroupElement>& g_vec) {
    for (const auto& g : g_vec)
        if (!(g.group() == spec.group()))
            throw GroupMismatch("sector element does not belong to the gerbe band");
}
} // namespace detail

/// True iff for every factor j: sum_i a_i^(j) = kappa^(j)(beta) mod r^(j).
inline bool is_admissible(const GerbeSpec& spec, const std::vector<GroupElement>& g_vec,
                          const CurveClass& beta) {
    detail::check_sector_vector(spec, g_vec);
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        long sum = 0;
        for (const auto& g : g_vec) sum = (sum + g.residues()[j]) % r;
        if (sum != spec.kappa(j, beta)) return false;
    }
    return true;
}

/// All admissible n-vectors in lexicographic order. There are |G|^(n-1) of
/// them for n >= 1: the last entry is solved from the first n-1.
inline std::vector<std::vector<GroupElement>> enumerate_admissible_vectors(
    const GerbeSpec& spec, size_t n, const CurveClass& beta, long limit = 1 << 20) {
    const auto& group = spec.group();
    if (n == 0) {
        std::vector<std::vector<GroupElement>> out;
        bool ok = true;
        for (size_t j = 0; j < spec.num_factors(); ++j)
            if (spec.kappa(j, beta) != 0) ok = false;
        if (ok) out.push_back({});
        return out;
    }
    double count = 1;
    for (size_t i = 0; i + 1 < n; ++i) count *= static_cast<double>(group.order());
    if (count > static_cast<double>(limit))
        throw EnumerationTooLarge("admissible vector count |G|^(n-1) exceeds limit " +
                                  std::to_string(limit));

    std::vector<std::vector<GroupElement>> out;
    std::vector<long> flat((n - 1) * group.num_factors(), 0);
    auto emit = [&]() {
        std::vector<GroupElement> vec;
        vec.reserve(n);
        std::vector<long> last(group.num_factors());
        for (size_t j = 0; j < group.num_factors(); ++j) {
            long r = group.factors()[j];
            long sum = 0;
            for (size_t i = 0; i + 1 < n; ++i) sum = (sum + flat[i * group.num_factors() + j]) % r;
            last[j] = ((spec.kappa(j, beta) - sum) % r + r) % r;
        }
        for (size_t i = 0; i + 1 < n; ++i) {
            std::vector<long> res(group.num_factors());
            for (size_t j = 0; j < group.num_factors(); ++j) res[j] = flat[i * group.num_factors() + j];
            vec.emplace_back(group, std::move(res));
        }
        vec.emplace_back(group, std::move(last));
        out.push_back(std::move(vec));
    };
    // Odometer over the free prefix; per-marking residue tuples ascend
    // lexicographically, so whole vectors come out in lexicographic order.
    while (true) {
        emit();
        size_t pos = flat.size();
        bool done = flat.empty();
        while (pos > 0) {
            --pos;
            long r = group.factors()[pos % group.num_factors()];
            if (++flat[pos] < r) break;
            flat[pos] = 0;
            if (pos == 0) done = true;
        }
        if (done) break;
    }
    return out;
}

/// The triples (rho, r_i, m_i) of g, one per cyclic factor.
inline std::vector<SectorData> sector_data(const GerbeSpec& spec, const GroupElement& g) {
    if (!(g.group() == spec.group()))
        throw GroupMismatch("element does not belong to the gerbe band");
    std::vector<SectorData> out;
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        long a = g.residues()[j];
        long gc = std::gcd(r, a);  // gcd(r,0) = r covers the untwisted case
        SectorData s;
        s.theta = Rational(a, r);
        s.rho = a;
        s.r_i = r / gc;
        s.m_i = a / gc;
        out.push_back(s);
    }
    return out;
}

namespace detail {
inline void check_boundary_args(size_t n, const std::vector<size_t>& T,
                                const CurveClass& beta_prime, const CurveClass& beta) {
    for (size_t i : T)
        if (i >= n) throw InvalidBoundaryIndex("marking index out of range");
    std::set<size_t> uniq(T.begin(), T.end());
    if (uniq.size() != T.size()) throw InvalidBoundaryIndex("duplicate marking index in T");
    if (!leq(beta_prime, beta))
        throw InvalidBoundaryIndex("beta' exceeds beta");
}
} // namespace detail

/// The group element g_{T,beta'} carried by the node of the splitting: its
/// j-th residue is r^(j) * theta^(j)_{T,beta'}. Appending it to g restricted
/// to T gives an admissible vector for beta'.
inline GroupElement node_element(const GerbeSpec& spec, const std::vector<size_t>& T,
                                 const CurveClass& beta_prime,
                                 const std::vector<GroupElement>& g_vec) {
    detail::check_sector_vector(spec, g_vec);
    std::vector<long> res(spec.num_factors());
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        long sum = 0;
        for (size_t i : T) sum = (sum + g_vec.at(i).residues()[j]) % r;
        res[j] = ((spec.kappa_tilde(j, beta_prime) - sum) % r + r) % r;
    }
    return GroupElement(spec.group(), std::move(res));
}

/// Node data (theta, r, m, d)_{T,beta'} per factor. theta is the fractional
/// part of kappa~(beta')/r - sum_{i in T} theta_i; d is pinned down exactly
/// by the certificate through
///   sum_{i in T} d_i/r_i + d_{T,beta'}/r_{T,beta'} = kappa~(beta')/r.
/// Defined for every T within range and every 0 <= beta' <= beta; whether
/// (T, beta') indexes an actual boundary divisor is a separate question
/// answered by enumerate_boundary_indices.
inline std::vector<NodeData> node_data(const GerbeSpec& spec, const std::vector<size_t>& T,
                                       const CurveClass& beta_prime,
                                       const std::vector<GroupElement>& g_vec,
                                       const CurveClass& beta, const DCertificate& cert) {
    detail::check_sector_vector(spec, g_vec);
    detail::check_boundary_args(g_vec.size(), T, beta_prime, beta);
    if (cert.d.size() != spec.num_factors())
        throw DomainError("certificate factor count mismatch");

    std::vector<NodeData> out;
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        if (cert.d[j].size() != g_vec.size())
            throw DomainError("certificate marking count mismatch");
        long sum = 0;
        for (size_t i : T) sum = (sum + g_vec[i].residues()[j]) % r;
        long rho_node = ((spec.kappa_tilde(j, beta_prime) - sum) % r + r) % r;
        long gc = std::gcd(r, rho_node);
        NodeData nd;
        nd.theta = Rational(rho_node, r);
        nd.r_node = r / gc;
        nd.m_node = rho_node / gc;

        Rational value = Rational(spec.kappa_tilde(j, beta_prime), r);
        for (size_t i : T) {
            const auto s = sector_data(spec, g_vec[i])[j];
            value -= Rational(cert.d[j][i], s.r_i);
        }
        Rational dn = value * Rational(nd.r_node);
        if (!dn.is_integer())
            throw InternalInconsistency("node d-value is not an integer; certificate invalid");
        if (!dn.numerator().fits_slong_p())
            throw LimitError("node d-value exceeds machine range");
        nd.d_node = dn.numerator().get_si();
        out.push_back(nd);
    }
    return out;
}

/// Deterministic integer certificate: per factor, every marking takes its
/// canonical residue m_i except one solved slot that absorbs the exact
/// functional value. Throws NotAdmissible when no integer solution exists.
inline DCertificate choose_d(const GerbeSpec& spec, const std::vector<GroupElement>& g_vec,
                             const CurveClass& beta, DChoiceRule rule = DChoiceRule::solve_last) {
    detail::check_sector_vector(spec, g_vec);
    const size_t n = g_vec.size();
    DCertificate cert;
    cert.d.assign(spec.num_factors(), std::vector<long>(n, 0));
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        if (n == 0) {
            if (spec.kappa(j, beta) != 0)
                throw NotAdmissible("empty sector vector with nonzero kappa residue");
            continue;
        }
        size_t solved = rule == DChoiceRule::solve_last ? n - 1 : 0;
        Rational target(spec.kappa_tilde(j, beta), r);
        long r_solved = 1;
        for (size_t i = 0; i < n; ++i) {
            const auto s = sector_data(spec, g_vec[i])[j];
            if (i == solved) {
                r_solved = s.r_i;
                continue;
            }
            cert.d[j][i] = s.m_i;
            target -= s.theta;  // theta_i = m_i / r_i
        }
        Rational dn = target * Rational(r_solved);
        if (!dn.is_integer())
            throw NotAdmissible("sector vector not admissible for beta; no d certificate");
        if (!dn.numerator().fits_slong_p())
            throw LimitError("d-certificate value exceeds machine range");
        cert.d[j][solved] = dn.numerator().get_si();
        // The solved value is automatically congruent to m_solved mod r_solved.
    }
    return cert;
}

/// Membership in the boundary index set: T avoids the last marking, beta'
/// lies under beta, and both sides of the splitting are stable
/// (beta' = 0 forces |T| >= 2, beta' = beta forces |T| <= n-2).
inline bool in_boundary_index_set(size_t n, const std::vector<size_t>& T,
                                  const CurveClass& beta_prime, const CurveClass& beta) {
    for (size_t i : T)
        if (i + 1 >= n) return false;
    if (!leq(beta_prime, beta)) return false;
    if (beta_prime.is_zero() && T.size() < 2) return false;
    if (beta_prime == beta && T.size() + 2 > n) return false;
    return true;
}

/// The boundary index set for (n, beta): each divisor appears exactly once
/// because T never contains the last marking. Deterministic order: beta'
/// ascending lexicographically, then T by subset bitmask.
inline std::vector<BoundaryIndex> enumerate_boundary_indices(size_t n, const CurveClass& beta) {
    if (n < 3 && beta.is_zero())
        throw UnstableTriple("(0,n,beta) unstable: beta = 0 and n < 3");
    std::vector<BoundaryIndex> out;
    for (const auto& bp : classes_up_to(beta)) {
        const size_t free = n == 0 ? 0 : n - 1;
        for (size_t mask = 0; mask < (size_t{1} << free); ++mask) {
            std::vector<size_t> T;
            for (size_t i = 0; i < free; ++i)
                if (mask & (size_t{1} << i)) T.push_back(i);
            if (in_boundary_index_set(n, T, bp, beta)) out.push_back({std::move(T), bp});
        }
    }
    return out;
}

struct AgesAndChi {
    std::vector<std::vector<Rational>> ages;  // [factor][marking] = m_i/r_i
    std::vector<Rational> chi;                // [factor], integer iff admissible
};

/// Ages of the markings and the twisted Riemann-Roch Euler characteristic
/// chi^(j) = 1 + kappa~^(j)(beta)/r^(j) - sum_i age_i^(j). Total on every
/// input: integrality of all chi^(j) is equivalent to admissibility.
inline AgesAndChi ages_and_chi(const GerbeSpec& spec, const std::vector<GroupElement>& g_vec,
                               const CurveClass& beta) {
    detail::check_sector_vector(spec, g_vec);
    AgesAndChi out;
    out.ages.assign(spec.num_factors(), {});
    for (size_t j = 0; j < spec.num_factors(); ++j) {
        long r = spec.group().factors()[j];
        Rational chi = Rational(1) + Rational(spec.kappa_tilde(j, beta), r);
        for (const auto& g : g_vec) {
            const auto s = sector_data(spec, g)[j];
            Rational age = Rational(s.m_i, s.r_i);
            out.ages[j].push_back(age);
            chi -= age;
        }
        out.chi.push_back(chi);
    }
    return out;
}

} // namespace gerbegw
