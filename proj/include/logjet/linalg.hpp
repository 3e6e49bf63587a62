#pragma once

#include <optional>
#include <vector>

#include "logjet/jet.hpp"

namespace logjet {

// Small dense exact linear algebra; enough for kernel extraction and
// coefficient fitting at desk scale.
namespace linalg {

template <ScalarField F>
using Mat = std::vector<std::vector<F>>;

// Reduced row echelon form in place; returns pivot column per row.
template <ScalarField F>
std::vector<int> rref(Mat<F>& a)
{
    std::vector<int> pivots;
    if (a.empty())
        return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero())
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        F inv = F::one() / a[r][c];
        for (std::size_t j = c; j < cols; ++j)
            a[r][j] = a[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero())
                continue;
            F f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] = a[i][j] - f * a[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

// Basis of the right nullspace of a (rows x cols).
template <ScalarField F>
Mat<F> nullspace(Mat<F> a)
{
    if (a.empty())
        return {};
    const std::size_t cols = a[0].size();
    std::vector<int> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots)
        is_pivot[static_cast<std::size_t>(c)] = true;
    Mat<F> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc])
            continue;
        std::vector<F> v(cols, F::zero());
        v[fc] = F::one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<std::size_t>(pivots[r])] = F::zero() - a[r][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve a x = b; nullopt when inconsistent. Free variables are set to zero.
template <ScalarField F>
std::optional<std::vector<F>> solve(Mat<F> a, const std::vector<F>& b)
{
    if (a.empty())
        return std::vector<F>{};
    const std::size_t cols = a[0].size();
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i].push_back(b[i]);
    std::vector<int> pivots = rref(a);
    for (std::size_t r = 0; r < a.size(); ++r) {
        bool all_zero = true;
        for (std::size_t c = 0; c < cols; ++c)
            if (!a[r][c].is_zero())
                all_zero = false;
        if (all_zero && !a[r][cols].is_zero())
            return std::nullopt;
    }
    std::vector<F> x(cols, F::zero());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        if (pivots[r] < static_cast<int>(cols))
            x[static_cast<std::size_t>(pivots[r])] = a[r][cols];
        else
            return std::nullopt; // pivot landed in the RHS column
    return x;
}

} // namespace linalg
} // namespace logjet
