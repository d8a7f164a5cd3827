#pragma once

/// Effective curve classes: non-negative integer vectors in a fixed basis of
/// the H_2 lattice. The zero class is the additive identity and every class
/// has finitely many decompositions beta' + beta'' = beta, both by
/// construction.

#include <string>
#include <vector>

#include "gerbegw/errors.hpp"

namespace gerbegw {

class CurveClass {
public:
    CurveClass() = default;
    explicit CurveClass(std::vector<long> coords) : coords_(std::move(coords)) {
        for (long c : coords_)
            if (c < 0) throw DomainError("CurveClass: coordinates must be non-negative");
    }
    static CurveClass zero(size_t rank) { return CurveClass(std::vector<long>(rank, 0)); }

    const std::vector<long>& coords() const { return coords_; }
    size_t rank() const { return coords_.size(); }

    bool is_zero() const {
        for (long c : coords_)
            if (c != 0) return false;
        return true;
    }

    friend CurveClass operator+(const CurveClass& a, const CurveClass& b) {
        check_rank(a, b);
        std::vector<long> s(a.coords_);
        for (size_t i = 0; i < s.size(); ++i) s[i] += b.coords_[i];
        return CurveClass(std::move(s));
    }

    /// Componentwise difference; requires b <= a.
    friend CurveClass operator-(const CurveClass& a, const CurveClass& b) {
        check_rank(a, b);
        std::vector<long> s(a.coords_);
        for (size_t i = 0; i < s.size(); ++i) {
            s[i] -= b.coords_[i];
            if (s[i] < 0) throw DomainError("CurveClass subtraction leaves the effective cone");
        }
        return CurveClass(std::move(s));
    }

    /// Componentwise partial order.
    friend bool leq(const CurveClass& a, const CurveClass& b) {
        check_rank(a, b);
        for (size_t i = 0; i < a.coords_.size(); ++i)
            if (a.coords_[i] > b.coords_[i]) return false;
        return true;
    }

    friend bool operator==(const CurveClass& a, const CurveClass& b) {
        return a.coords_ == b.coords_;
    }
    /// Lexicographic; a total order used only for deterministic container keys.
    friend auto operator<=>(const CurveClass& a, const CurveClass& b) {
        return a.coords_ <=> b.coords_;
    }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < coords_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(coords_[i]);
        }
        return s + ")";
    }

private:
    static void check_rank(const CurveClass& a, const CurveClass& b) {
        if (a.coords_.size() != b.coords_.size())
            throw DomainError("curve classes live in lattices of different rank");
    }

    std::vector<long> coords_;
};

/// All classes 0 <= c <= bound componentwise, lexicographic ascending.
inline std::vector<CurveClass> classes_up_to(const CurveClass& bound) {
    std::vector<CurveClass> out;
    std::vector<long> cur(bound.rank(), 0);
    while (true) {
        out.push_back(CurveClass(cur));
        size_t i = cur.size();
        while (i > 0) {
            --i;
            if (++cur[i] <= bound.coords()[i]) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
        if (cur.empty()) return out;
    }
}

} // namespace gerbegw
