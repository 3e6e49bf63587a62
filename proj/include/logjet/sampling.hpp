#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "logjet/directed.hpp"
#include "logjet/jet.hpp"
#include "logjet/logcoords.hpp"
#include "logjet/polynomial.hpp"

namespace logjet {

// Deterministic generator; trial streams derive from the root seed so trial
// results are independent of execution order.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial)
    {
        SplitMix64 g(seed ^ (0x517cc1b727220a95ULL * (trial + 1)));
        g.next();
        return g;
    }

    long range(long lo, long hi) // inclusive
    {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

template <ScalarField F>
F imaginary_unit();

template <>
inline GaussRational imaginary_unit<GaussRational>()
{
    return GaussRational::i();
}

// Small Gaussian integers |re|, |im| <= 5, the sampling domain for every
// exact identity check.
template <ScalarField F>
F sample_gauss(SplitMix64& g, long bound = 5)
{
    long re = g.range(-bound, bound);
    long im = g.range(-bound, bound);
    return F::from_int(re) + F::from_int(im) * imaginary_unit<F>();
}

template <ScalarField F>
F sample_gauss_nonzero(SplitMix64& g, long bound = 5)
{
    for (;;) {
        F v = sample_gauss<F>(g, bound);
        if (!v.is_zero())
            return v;
    }
}

template <ScalarField F>
Jet<F> sample_jet(SplitMix64& g, int k, bool nonzero_constant = false)
{
    Jet<F> j(k);
    j[0] = nonzero_constant ? sample_gauss_nonzero<F>(g) : sample_gauss<F>(g);
    for (int m = 1; m <= k; ++m)
        j[m] = sample_gauss<F>(g);
    return j;
}

template <ScalarField F>
Reparam<F> sample_reparam(SplitMix64& g, int k, bool unipotent = false)
{
    Jet<F> j(k);
    j[1] = unipotent ? F::one() : sample_gauss_nonzero<F>(g);
    for (int m = 2; m <= k; ++m)
        j[m] = sample_gauss<F>(g);
    return Reparam<F>(j);
}

// Random jet coordinates in a chart; base values of logarithmic coordinates
// are forced nonzero (the maps are only defined off the divisor).
template <ScalarField F>
LogJetCoords<F> sample_coords(SplitMix64& g, const LogChart& chart, int k)
{
    LogJetCoords<F> c(chart, k);
    for (int i = 1; i <= chart.n; ++i) {
        c.base[static_cast<std::size_t>(i - 1)] =
            chart.is_log(i) ? sample_gauss_nonzero<F>(g) : sample_gauss<F>(g);
        for (int j = 1; j <= k; ++j)
            c.z(i, j) = sample_gauss<F>(g);
    }
    return c;
}

// Random polynomial in base coordinates of total degree <= deg.
template <ScalarField F>
JetPolynomial<F> sample_base_poly(SplitMix64& g, int n, int deg, int terms = 3)
{
    JetPolynomial<F> p;
    for (int t = 0; t < terms; ++t) {
        JetPolynomial<F> mono = JetPolynomial<F>::constant(sample_gauss<F>(g, 2));
        int d = static_cast<int>(g.range(0, deg));
        for (int q = 0; q < d; ++q)
            mono = mono * JetPolynomial<F>::base_var(static_cast<int>(g.range(1, n)));
        p = p + mono;
    }
    return p;
}

// Random directed structure; when log_count > 0 the A-set follows the
// {1..a, l+1..l+b} shape.
template <ScalarField F>
DirectedStructure<F> sample_structure(SplitMix64& g, int n, int r, int log_count, int coeff_deg)
{
    DirectedStructure<F> ds;
    ds.n = n;
    ds.r = r;
    ds.l = log_count;
    if (log_count == 0) {
        // any r-subset
        std::vector<int> all;
        for (int i = 1; i <= n; ++i)
            all.push_back(i);
        for (int p = 0; p < r; ++p) {
            std::size_t pick = static_cast<std::size_t>(g.range(0, static_cast<long>(all.size()) - 1));
            ds.A.push_back(all[pick]);
            all.erase(all.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        std::sort(ds.A.begin(), ds.A.end());
        ds.B = all;
        std::sort(ds.B.begin(), ds.B.end());
    } else {
        int a_max = std::min(r, log_count);
        int a = static_cast<int>(g.range(std::max(0, r - (n - log_count)), a_max));
        int b = r - a;
        for (int i = 1; i <= a; ++i)
            ds.A.push_back(i);
        for (int i = log_count + 1; i <= log_count + b; ++i)
            ds.A.push_back(i);
        for (int i = 1; i <= n; ++i)
            if (std::find(ds.A.begin(), ds.A.end(), i) == ds.A.end())
                ds.B.push_back(i);
    }
    for (int i : ds.B)
        for (int m : ds.A)
            ds.coeff[{i, m}] = sample_base_poly<F>(g, n, coeff_deg);
    ds.validate();
    return ds;
}

// Random weighted-homogeneous polynomial of the given weight in Z-variables
// with coordinate indices <= n and derivative orders <= k.
template <ScalarField F>
JetPolynomial<F> sample_homogeneous_poly(SplitMix64& g, int weight, int n, int k, int terms = 3)
{
    JetPolynomial<F> p;
    for (int t = 0; t < terms; ++t) {
        JetPolynomial<F> mono = JetPolynomial<F>::constant(sample_gauss_nonzero<F>(g, 3));
        int left = weight;
        while (left > 0) {
            int j = static_cast<int>(g.range(1, std::min(k, left)));
            int i = static_cast<int>(g.range(1, n));
            mono = mono * JetPolynomial<F>::jet_var(i, j);
            left -= j;
        }
        p = p + mono;
    }
    return p;
}

} // namespace logjet
