#pragma once

/**
 * @file abelian.hpp
 * @brief Finite abelian groups in fixed product-of-cyclic form.
 *
 * A group is an ordered list of cyclic orders (r_1, ..., r_k); elements and
 * characters are residue tuples reduced mod the factors. The dual group is
 * identified with the group through the same residue representation, and
 * characters evaluate exactly into Q(zeta_N) with N = lcm of the factors.
 */

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gerbegw/cyclotomic.hpp"
#include "gerbegw/errors.hpp"

namespace gerbegw {

class AbelianGroup {
public:
    AbelianGroup() = default;
    explicit AbelianGroup(std::vector<long> factors) : factors_(std::move(factors)) {
        for (long r : factors_)
            if (r < 1) throw DomainError("AbelianGroup: factors must be >= 1");
    }

    const std::vector<long>& factors() const { return factors_; }
    size_t num_factors() const { return factors_.size(); }

    long order() const {
        long n = 1;
        for (long r : factors_) n *= r;
        return n;
    }

    /// lcm of the factors; the cyclotomic level that houses all character values.
    unsigned character_level() const {
        long n = 1;
        for (long r : factors_) n = std::lcm(n, r);
        return static_cast<unsigned>(n);
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
        return a.factors_ == b.factors_;
    }

private:
    std::vector<long> factors_;
};

namespace detail {
inline std::vector<long> reduce_residues(const AbelianGroup& g, std::vector<long> res) {
    if (res.size() != g.num_factors())
        throw GroupMismatch("residue tuple length does not match group rank");
    for (size_t j = 0; j < res.size(); ++j) {
        long r = g.factors()[j];
        res[j] %= r;
        if (res[j] < 0) res[j] += r;
    }
    return res;
}
} // namespace detail

class GroupElement {
public:
    GroupElement() = default;
    GroupElement(AbelianGroup group, std::vector<long> residues)
        : group_(std::move(group)), residues_(detail::reduce_residues(group_, std::move(residues))) {}

    const AbelianGroup& group() const { return group_; }
    const std::vector<long>& residues() const { return residues_; }

    bool is_identity() const {
        for (long a : residues_)
            if (a != 0) return false;
        return true;
    }

    GroupElement operator-() const {
        std::vector<long> neg(residues_.size());
        for (size_t j = 0; j < residues_.size(); ++j) neg[j] = -residues_[j];
        return GroupElement(group_, std::move(neg));
    }

    friend GroupElement operator+(const GroupElement& a, const GroupElement& b) {
        if (!(a.group_ == b.group_)) throw GroupMismatch("adding elements of different groups");
        std::vector<long> sum(a.residues_.size());
        for (size_t j = 0; j < sum.size(); ++j) sum[j] = a.residues_[j] + b.residues_[j];
        return GroupElement(a.group_, std::move(sum));
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.group_ == b.group_ && a.residues_ == b.residues_;
    }
    friend auto operator<=>(const GroupElement& a, const GroupElement& b) {
        return a.residues_ <=> b.residues_;
    }

private:
    AbelianGroup group_;
    std::vector<long> residues_;
};

/// One-dimensional representation of the group, as a residue tuple in the dual.
class Character {
public:
    Character() = default;
    Character(AbelianGroup group, std::vector<long> residues)
        : group_(std::move(group)), residues_(detail::reduce_residues(group_, std::move(residues))) {}

    const AbelianGroup& group() const { return group_; }
    const std::vector<long>& residues() const { return residues_; }
    bool is_trivial() const {
        for (long b : residues_)
            if (b != 0) return false;
        return true;
    }

    friend Character operator+(const Character& a, const Character& b) {
        if (!(a.group_ == b.group_)) throw GroupMismatch("adding characters of different groups");
        std::vector<long> sum(a.residues_.size());
        for (size_t j = 0; j < sum.size(); ++j) sum[j] = a.residues_[j] + b.residues_[j];
        return Character(a.group_, std::move(sum));
    }

    friend bool operator==(const Character& a, const Character& b) {
        return a.group_ == b.group_ && a.residues_ == b.residues_;
    }
    friend auto operator<=>(const Character& a, const Character& b) {
        return a.residues_ <=> b.residues_;
    }

private:
    AbelianGroup group_;
    std::vector<long> residues_;
};

/// chi_rho(g) = zeta_N^(sum_j b_j a_j N/r_j), N = lcm of the factors.
/// Multiplicative in both arguments.
inline CycNumber character_value(const Character& rho, const GroupElement& g) {
    if (!(rho.group() == g.group()))
        throw GroupMismatch("character and element belong to different groups");
    unsigned n = g.group().character_level();
    long e = 0;
    const auto& factors = g.group().factors();
    for (size_t j = 0; j < factors.size(); ++j) {
        long term = rho.residues()[j] * g.residues()[j] % factors[j] * (static_cast<long>(n) / factors[j]);
        e = (e + term) % static_cast<long>(n);
    }
    return root_of_unity(e, n);
}

/// Smallest m >= 1 with m*g = 0; lcm over factors of r_j / gcd(r_j, a_j).
inline long element_order(const GroupElement& g) {
    long ord = 1;
    const auto& factors = g.group().factors();
    for (size_t j = 0; j < factors.size(); ++j)
        ord = std::lcm(ord, factors[j] / std::gcd(factors[j], g.residues()[j]));
    return ord;
}

namespace detail {
inline std::vector<std::vector<long>> residue_tuples(const AbelianGroup& g, long limit) {
    if (g.order() > limit)
        throw GroupTooLarge("group order " + std::to_string(g.order()) +
                            " exceeds enumeration limit " + std::to_string(limit));
    std::vector<std::vector<long>> out;
    std::vector<long> cur(g.num_factors(), 0);
    out.reserve(static_cast<size_t>(g.order()));
    while (true) {
        out.push_back(cur);
        size_t j = g.num_factors();
        while (j > 0) {
            --j;
            if (++cur[j] < g.factors()[j]) break;
            cur[j] = 0;
            if (j == 0) return out;
        }
        if (g.num_factors() == 0) return out;
    }
}
} // namespace detail

/// All elements in deterministic lexicographic order.
inline std::vector<GroupElement> enumerate_elements(const AbelianGroup& g, long limit = 1 << 20) {
    std::vector<GroupElement> out;
    for (auto& t : detail::residue_tuples(g, limit)) out.emplace_back(g, std::move(t));
    return out;
}

/// All characters in deterministic lexicographic order; |G| of them.
inline std::vector<Character> enumerate_characters(const AbelianGroup& g, long limit = 1 << 20) {
    std::vector<Character> out;
    for (auto& t : detail::residue_tuples(g, limit)) out.emplace_back(g, std::move(t));
    return out;
}

} // namespace gerbegw
