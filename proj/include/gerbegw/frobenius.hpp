#pragma once

/**
 * @file frobenius.hpp
 * @brief Quantum products, the WDVV oracle, and semisimplicity probes.
 *
 * Structure constants are Novikov-graded and optionally deformed along one
 * chosen basis direction: entry (beta, p) of c_{ab}^c is the coefficient of
 * Q^beta x^p/p! in the big quantum product restricted to the line through
 * that direction. The undeformed slice (p = 0) is the small quantum
 * product assembled from 3-point invariants. Associativity of the deformed
 * product, checked exactly coefficient by coefficient, is the classical
 * WDVV system; for the plane it pins down every rational-curve count
 * reachable within the truncation, which is what makes check_wdvv an
 * independent oracle for the point-count recursion.
 *
 * The gerbe product lives on the character-tagged basis with the orbifold
 * pairing chosen as (1/|G|) times the base Poincare pairing per character
 * block. All theorem-level checks downstream (block diagonality, the
 * single-constant block proportionality) are insensitive to that
 * normalization choice.
 */

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <random>
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

struct NovikovKey {
    CurveClass beta;
    unsigned deform = 0;

    friend auto operator<=>(const NovikovKey&, const NovikovKey&) = default;
};

class QuantumProduct {
public:
    QuantumProduct(std::vector<std::string> labels, Matrix<Rational> pairing,
                   CurveClass beta_max, unsigned deform_max, size_t block_size)
        : labels_(std::move(labels)),
          pairing_(std::move(pairing)),
          beta_max_(std::move(beta_max)),
          deform_max_(deform_max),
          block_size_(block_size),
          sc_(labels_.size() * labels_.size() * labels_.size()) {}

    size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Matrix<Rational>& pairing() const { return pairing_; }
    const CurveClass& beta_max() const { return beta_max_; }
    unsigned deform_max() const { return deform_max_; }
    /// Number of base classes per character block; 0 for an unblocked product.
    size_t block_size() const { return block_size_; }

    const std::map<NovikovKey, CycNumber>& entry(size_t a, size_t b, size_t c) const {
        return sc_[(a * dim() + b) * dim() + c];
    }

    void add_entry(size_t a, size_t b, size_t c, const NovikovKey& key, const CycNumber& v) {
        if (v.is_zero()) return;
        auto& m = sc_[(a * dim() + b) * dim() + c];
        auto [it, fresh] = m.emplace(key, v);
        if (!fresh) {
            it->second += v;
            if (it->second.is_zero()) m.erase(it);
        }
    }

    /// Evaluate c_{ab}^c at a numeric point: q entries per H_2 coordinate,
    /// then one deformation coordinate when the product is deformed.
    std::complex<double> evaluate(size_t a, size_t b, size_t c,
                                  const std::vector<std::complex<double>>& point) const {
        std::complex<double> acc(0, 0);
        for (const auto& [key, v] : entry(a, b, c)) {
            std::complex<double> mono(1, 0);
            for (size_t i = 0; i < key.beta.rank(); ++i)
                for (long k = 0; k < key.beta.coords()[i]; ++k) mono *= point.at(i);
            for (unsigned k = 0; k < key.deform; ++k) mono *= point.at(key.beta.rank());
            acc += mono * v.embed();
        }
        return acc;
    }

    /// Exact evaluation at a rational point (deformation coordinate included
    /// when applicable).
    CycNumber evaluate_exact(size_t a, size_t b, size_t c,
                             const std::vector<Rational>& point) const {
        CycNumber acc;
        for (const auto& [key, v] : entry(a, b, c)) {
            Rational mono(1);
            for (size_t i = 0; i < key.beta.rank(); ++i)
                for (long k = 0; k < key.beta.coords()[i]; ++k) mono *= point.at(i);
            for (unsigned k = 0; k < key.deform; ++k) mono *= point.at(key.beta.rank());
            acc += v * mono;
        }
        return acc;
    }

private:
    std::vector<std::string> labels_;
    Matrix<Rational> pairing_;
    CurveClass beta_max_;
    unsigned deform_max_;
    size_t block_size_;
    std::vector<std::map<NovikovKey, CycNumber>> sc_;
};

/// Small quantum product of the base, optionally deformed along one basis
/// class: c_{ab}^c(beta, p) = (1/p!) sum_e <phi_a, phi_b, D^p, phi_e>_beta
/// (pairing^{-1})^{ec}. With deform_order = 0 this is the 3-point product
/// whose beta = 0 part is the classical cup product.
inline QuantumProduct base_quantum_product(const BaseTheory& th, const CurveClass& beta_max,
                                           std::optional<size_t> deform_class = std::nullopt,
                                           unsigned deform_order = 0) {
    if (deform_order > 0 && !deform_class)
        throw DomainError("deformed product needs a deformation class");
    const size_t rank = th.basis().rank();
    std::vector<std::string> labels;
    for (const auto& c : th.basis().classes) labels.push_back(c.label);
    Matrix<Rational> inv_pairing = matrix_inverse(th.basis().pairing);

    QuantumProduct qp(std::move(labels), th.basis().pairing, beta_max, deform_order, 0);
    Rational p_factorial(1);
    for (unsigned p = 0; p <= deform_order; ++p) {
        if (p > 0) p_factorial *= Rational(static_cast<long>(p));
        for (const auto& beta : classes_up_to(beta_max)) {
            for (size_t a = 0; a < rank; ++a) {
                for (size_t b = a; b < rank; ++b) {
                    for (size_t e = 0; e < rank; ++e) {
                        std::vector<BaseInsertion> ins{{a, 0}, {b, 0}, {e, 0}};
                        for (unsigned k = 0; k < p; ++k) ins.push_back({*deform_class, 0});
                        Rational v = th.invariant(ins, beta);
                        if (v.is_zero()) continue;
                        v /= p_factorial;
                        for (size_t c = 0; c < rank; ++c) {
                            Rational w = v * inv_pairing[e][c];
                            if (w.is_zero()) continue;
                            qp.add_entry(a, b, c, {beta, p}, CycNumber(w));
                            if (a != b) qp.add_entry(b, a, c, {beta, p}, CycNumber(w));
                        }
                    }
                }
            }
        }
    }
    return qp;
}

/// Quantum product of the gerbe on the character-tagged basis
/// {phi_a tensor rho}, flat index rho_block * rank + a. The orbifold pairing
/// is block diagonal with (1/|G|) times the base pairing per block.
inline QuantumProduct gerbe_quantum_product(const GerbeSpec& spec, const BaseTheory& th,
                                            const CurveClass& beta_max) {
    const size_t rank = th.basis().rank();
    auto characters = enumerate_characters(spec.group());
    const size_t dim = rank * characters.size();
    long order = spec.group().order();

    std::vector<std::string> labels;
    Matrix<Rational> pairing(dim, std::vector<Rational>(dim, Rational(0)));
    for (size_t r = 0; r < characters.size(); ++r) {
        std::string tag = "@rho=(";
        const auto& res = characters[r].residues();
        for (size_t j = 0; j < res.size(); ++j)
            tag += (j ? "," : "") + std::to_string(res[j]);
        tag += ")";
        for (size_t a = 0; a < rank; ++a) {
            labels.push_back(th.basis().classes[a].label + tag);
            for (size_t b = 0; b < rank; ++b)
                pairing[r * rank + a][r * rank + b] =
                    th.basis().pairing[a][b] / Rational(order);
        }
    }
    Matrix<Rational> inv_pairing = matrix_inverse(pairing);

    QuantumProduct qp(std::move(labels), std::move(pairing), beta_max, 0, rank);
    for (const auto& beta : classes_up_to(beta_max)) {
        for (size_t ra = 0; ra < characters.size(); ++ra)
            for (size_t rb = 0; rb < characters.size(); ++rb)
                for (size_t re = 0; re < characters.size(); ++re)
                    for (size_t a = 0; a < rank; ++a)
                        for (size_t b = 0; b < rank; ++b)
                            for (size_t e = 0; e < rank; ++e) {
                                CycNumber v = rho_invariant(
                                    spec, th,
                                    {{characters[ra], a, 0}, {characters[rb], b, 0}, {characters[re], e, 0}},
                                    beta);
                                if (v.is_zero()) continue;
                                size_t flat_e = re * rank + e;
                                for (size_t c = 0; c < dim; ++c) {
                                    if (inv_pairing[flat_e][c].is_zero()) continue;
                                    qp.add_entry(ra * rank + a, rb * rank + b, c, {beta, 0},
                                                 v * inv_pairing[flat_e][c]);
                                }
                            }
    }
    return qp;
}

/// Exact associativity of the product up to its own truncation:
/// (a*b)*c = a*(b*c) coefficient-wise for all basis triples.
inline bool check_wdvv(const QuantumProduct& qp) {
    const size_t dim = qp.dim();
    auto convolve_into = [&](std::map<NovikovKey, CycNumber>& acc,
                             const std::map<NovikovKey, CycNumber>& lhs,
                             const std::map<NovikovKey, CycNumber>& rhs) {
        for (const auto& [k1, v1] : lhs)
            for (const auto& [k2, v2] : rhs) {
                CurveClass beta = k1.beta + k2.beta;
                unsigned p = k1.deform + k2.deform;
                if (!leq(beta, qp.beta_max()) || p > qp.deform_max()) continue;
                NovikovKey key{std::move(beta), p};
                auto [it, fresh] = acc.emplace(std::move(key), v1 * v2);
                if (!fresh) it->second += v1 * v2;
            }
    };
    for (size_t a = 0; a < dim; ++a)
        for (size_t b = 0; b < dim; ++b)
            for (size_t c = 0; c < dim; ++c)
                for (size_t f = 0; f < dim; ++f) {
                    std::map<NovikovKey, CycNumber> left, right;
                    for (size_t e = 0; e < dim; ++e) {
                        convolve_into(left, qp.entry(a, b, e), qp.entry(e, c, f));
                        convolve_into(right, qp.entry(b, c, e), qp.entry(a, e, f));
                    }
                    for (auto it = left.begin(); it != left.end();)
                        it = it->second.is_zero() ? left.erase(it) : std::next(it);
                    for (auto it = right.begin(); it != right.end();)
                        it = it->second.is_zero() ? right.erase(it) : std::next(it);
                    if (left.size() != right.size()) return false;
                    auto li = left.begin();
                    auto ri = right.begin();
                    for (; li != left.end(); ++li, ++ri)
                        if (li->first != ri->first || !(li->second == ri->second)) return false;
                }
    return true;
}

/// True iff every structure constant mixing distinct character blocks is
/// exactly zero.
inline bool check_block_diagonal(const GerbeSpec& spec, const BaseTheory& th,
                                 const CurveClass& beta_max) {
    QuantumProduct qp = gerbe_quantum_product(spec, th, beta_max);
    const size_t bs = qp.block_size();
    for (size_t a = 0; a < qp.dim(); ++a)
        for (size_t b = 0; b < qp.dim(); ++b)
            for (size_t c = 0; c < qp.dim(); ++c) {
                if (a / bs == b / bs && b / bs == c / bs) continue;
                if (!qp.entry(a, b, c).empty()) return false;
            }
    return true;
}

/// The single constant lambda with
///   c_gerbe[(a,rho),(b,rho)]^((c,rho))(beta) = lambda * chi_rho(g_beta) * c_base[a,b]^c(beta)
/// across all blocks, triples and Novikov degrees; nullopt if no one
/// constant works.
inline std::optional<Rational> block_proportionality_constant(const GerbeSpec& spec,
                                                              const QuantumProduct& gerbe_qp,
                                                              const QuantumProduct& base_qp) {
    const size_t rank = gerbe_qp.block_size();
    if (rank == 0 || rank != base_qp.dim())
        throw DomainError("block comparison needs a blocked gerbe product over the base basis");
    auto characters = enumerate_characters(spec.group());
    std::optional<Rational> lambda;

    for (size_t r = 0; r < characters.size(); ++r)
        for (size_t a = 0; a < rank; ++a)
            for (size_t b = 0; b < rank; ++b)
                for (size_t c = 0; c < rank; ++c) {
                    std::map<NovikovKey, CycNumber> expect;
                    for (const auto& [key, v] : base_qp.entry(a, b, c)) {
                        CycNumber tw = v * character_value(characters[r], g_beta(spec, key.beta));
                        if (!tw.is_zero()) expect.emplace(key, tw);
                    }
                    const auto& got = gerbe_qp.entry(r * rank + a, r * rank + b, r * rank + c);
                    // Union comparison: got == lambda * expect.
                    auto gi = got.begin();
                    auto ei = expect.begin();
                    while (gi != got.end() || ei != expect.end()) {
                        if (ei == expect.end() || (gi != got.end() && gi->first < ei->first))
                            return std::nullopt;  // gerbe entry with no base counterpart
                        if (gi == got.end() || ei->first < gi->first)
                            return std::nullopt;  // base entry missing from the gerbe side
                        auto ratio_num = gi->second;
                        auto ratio_den = ei->second;
                        CycNumber ratio = ratio_num / ratio_den;
                        auto ratio_rat = ratio.as_rational();
                        if (!ratio_rat) return std::nullopt;
                        if (!lambda) lambda = *ratio_rat;
                        else if (!(*lambda == *ratio_rat)) return std::nullopt;
                        ++gi;
                        ++ei;
                    }
                }
    return lambda;
}

enum class SemisimplicityVerdict { semisimple, degenerate, inconclusive };

/// Numeric-first probe: multiplication by a pseudo-randomly seeded generic
/// element at the given evaluation point is diagonalized; well-separated
/// eigenvalues mean semisimple. When an exact evaluation point is supplied
/// and the gaps are not conclusive, the trace form Tr(L_a L_b) is computed
/// exactly; a singular trace form is a structural proof of degeneracy.
struct SemisimplicityResult {
    SemisimplicityVerdict verdict = SemisimplicityVerdict::inconclusive;
    double min_gap = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

inline SemisimplicityResult semisimplicity_probe(
    const QuantumProduct& qp, const std::vector<std::complex<double>>& point, double tol,
    uint64_t seed = 1, const std::optional<std::vector<Rational>>& exact_point = std::nullopt) {
    const size_t dim = qp.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::complex<double>> xi(dim);
    for (auto& x : xi) x = {unif(rng), unif(rng)};

    Eigen::MatrixXcd mult(dim, dim);
    for (size_t c = 0; c < dim; ++c)
        for (size_t b = 0; b < dim; ++b) {
            std::complex<double> acc(0, 0);
            for (size_t a = 0; a < dim; ++a) acc += xi[a] * qp.evaluate(a, b, c, point);
            mult(static_cast<long>(c), static_cast<long>(b)) = acc;
        }

    SemisimplicityResult res;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mult, false);
    for (long i = 0; i < solver.eigenvalues().size(); ++i)
        res.eigenvalues.push_back(solver.eigenvalues()(i));
    double min_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < res.eigenvalues.size(); ++i)
        for (size_t j = i + 1; j < res.eigenvalues.size(); ++j)
            min_gap = std::min(min_gap, std::abs(res.eigenvalues[i] - res.eigenvalues[j]));
    res.min_gap = dim > 1 ? min_gap : std::numeric_limits<double>::infinity();

    if (res.min_gap > tol) {
        res.verdict = SemisimplicityVerdict::semisimple;
        return res;
    }
    if (exact_point) {
        // L_a as exact matrices, then the trace form T[a][b] = Tr(L_a L_b).
        std::vector<Matrix<CycNumber>> mats(dim, Matrix<CycNumber>(dim, std::vector<CycNumber>(dim)));
        for (size_t a = 0; a < dim; ++a)
            for (size_t b = 0; b < dim; ++b)
                for (size_t c = 0; c < dim; ++c)
                    mats[a][c][b] = qp.evaluate_exact(a, b, c, *exact_point);
        Matrix<CycNumber> trace_form(dim, std::vector<CycNumber>(dim));
        for (size_t a = 0; a < dim; ++a)
            for (size_t b = 0; b < dim; ++b) {
                CycNumber tr;
                for (size_t c = 0; c < dim; ++c)
                    for (size_t e = 0; e < dim; ++e) tr += mats[a][c][e] * mats[b][e][c];
                trace_form[a][b] = tr;
            }
        if (matrix_rank(trace_form) < dim) {
            res.verdict = SemisimplicityVerdict::degenerate;
            return res;
        }
    }
    res.verdict = SemisimplicityVerdict::inconclusive;
    return res;
}

} // namespace gerbegw
