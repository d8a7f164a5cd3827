#pragma once

/// Dense matrices over exact scalar types, just enough for pairing inversion
/// and rank computations.

#include <vector>

#include "gerbegw/errors.hpp"

namespace gerbegw {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

/// Gauss-Jordan inverse; empty optional when singular. Needs T to be a
/// field type with exact ==, /, *, - and default zero.
template <typename T>
std::vector<std::vector<T>> matrix_inverse(Matrix<T> a) {
    const size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw DomainError("matrix_inverse: matrix not square");
    Matrix<T> inv(n, std::vector<T>(n, T(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = T(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == T(0)) ++pivot;
        if (pivot == n) throw InconsistentPairing("singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        T lead = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] = a[col][j] / lead;
            inv[col][j] = inv[col][j] / lead;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            T f = a[row][col];
            if (f == T(0)) continue;
            for (size_t j = 0; j < n; ++j) {
                a[row][j] = a[row][j] - f * a[col][j];
                inv[row][j] = inv[row][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

/// Row-echelon rank over a field.
template <typename T>
size_t matrix_rank(Matrix<T> a) {
    if (a.empty()) return 0;
    const size_t rows = a.size(), cols = a[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == T(0)) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (size_t row = rank + 1; row < rows; ++row) {
            if (a[row][col] == T(0)) continue;
            T f = a[row][col] / a[rank][col];
            for (size_t j = col; j < cols; ++j)
                a[row][j] = a[row][j] - f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace gerbegw
