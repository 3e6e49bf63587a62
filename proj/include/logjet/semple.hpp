#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/logcoords.hpp"

namespace logjet {

// A point of the level-k stage of the Demailly-Semple tower in the
// inhomogeneous chart normalized by coordinate rho (claim S(k)): block j
// holds Z^i_j / (Z^rho_1)^j for i in A \ {rho}, computed on the G_k^o-slice
// where the rho-row has no derivatives above order one. taut is Z^rho_1,
// the scalar coordinate of the tautological line.
template <ScalarField F>
struct SemplePoint {
    int level = 0;
    std::vector<F> base;
    std::vector<int> A;
    std::vector<int> others; // A \ {rho}, ascending
    int rho = 0;
    bool log_saturated = false; // every A-index is a logarithmic coordinate
    std::vector<std::vector<F>> blocks;
    F taut = F::zero();

    friend bool operator==(const SemplePoint& a, const SemplePoint& b)
    {
        return a.level == b.level && a.base == b.base && a.A == b.A && a.rho == b.rho &&
               a.blocks == b.blocks && a.taut == b.taut;
    }
    bool same_position(const SemplePoint& o) const
    {
        return level == o.level && base == o.base && rho == o.rho && blocks == o.blocks;
    }
};

// First A-index with Z^i_1 != 0; ChartError on singular jets.
template <ScalarField F>
int select_chart(const LogJetCoords<F>& c, const std::vector<int>& A)
{
    for (int i : A)
        if (!c.z(i, 1).is_zero())
            return i;
    throw ChartError("select_chart: singular jet (all Z^i_1 = 0 on A)");
}

// The unique phi in G_k^o with (rho-row o phi) = (Z^rho_1, 0, ..., 0).
template <ScalarField F>
Reparam<F> normalizing_reparam(const LogJetCoords<F>& c, int rho)
{
    const int k = c.k;
    const F& z1 = c.z(rho, 1);
    if (z1.is_zero())
        throw ChartError("normalizing_reparam: Z^rho_1 = 0, point outside chart A_{k,rho}");
    Jet<F> u = c.row_jet(rho);
    Jet<F> phi = Jet<F>::identity(k);
    for (int m = 2; m <= k; ++m) {
        Jet<F> comp = jet_compose(u, Reparam<F>(phi));
        // the only phi^{(m)} dependence of (u o phi)^{(m)} is Z^rho_1 phi^{(m)}
        phi[m] = phi[m] - comp[m] / z1;
    }
    return Reparam<F>(phi);
}

// Claim S(k) chart map on the normalized jet.
template <ScalarField F>
SemplePoint<F> chart_coords(const LogJetCoords<F>& c, const std::vector<int>& A, int rho)
{
    if (std::find(A.begin(), A.end(), rho) == A.end())
        throw ConfigError("chart_coords: rho must lie in A");
    if (c.z(rho, 1).is_zero())
        throw ChartError("chart_coords: Z^rho_1 = 0, point outside chart A_{k,rho}");
    LogJetCoords<F> nc = coords_compose(c, normalizing_reparam(c, rho));

    SemplePoint<F> p;
    p.level = c.k;
    p.base = c.base;
    p.A = A;
    p.rho = rho;
    for (int i : A)
        if (i != rho)
            p.others.push_back(i);
    p.log_saturated = std::all_of(A.begin(), A.end(), [&](int i) { return c.chart.is_log(i); });
    p.taut = nc.z(rho, 1);
    F tp = F::one();
    for (int j = 1; j <= c.k; ++j) {
        tp *= p.taut;
        std::vector<F> block;
        block.reserve(p.others.size());
        for (int i : p.others)
            block.push_back(nc.z(i, j) / tp);
        p.blocks.push_back(std::move(block));
    }
    return p;
}

// The final S(k) block as displayed: (Z^i_k/(Z^rho_1)^{k-1}, ..., Z^rho_1) --
// the fiber of the vector bundle V_{k-1} rather than its projectivization.
template <ScalarField F>
std::vector<F> sk_final_block(const SemplePoint<F>& p)
{
    if (p.level < 1)
        throw ShapeError("sk_final_block: level 0 point");
    std::vector<F> v;
    for (const F& b : p.blocks.back())
        v.push_back(b * p.taut); // Z^i_k/(Z^rho_1)^k * Z^rho_1
    v.push_back(p.taut);
    return v;
}

// The proof-side coordinates d(Z^i_{k-1}/(Z^rho_1)^{k-1}): identical to the
// S(k) display except for the displayed additive term (k-1) Z^rho_1 in the
// log-saturated branch (a = r). The flag on the point records which branch
// ran; cross-level consistency checks use the curve recursion instead.
template <ScalarField F>
std::vector<F> dcoord_final_block(const SemplePoint<F>& p)
{
    std::vector<F> v = sk_final_block(p);
    if (p.log_saturated && p.level >= 2) {
        F extra = F::from_int(p.level - 1) * p.taut;
        for (std::size_t m = 0; m + 1 < v.size(); ++m)
            v[m] += extra;
    }
    return v;
}

// pi_{j,k}: forget the blocks above level j.
template <ScalarField F>
SemplePoint<F> project(const SemplePoint<F>& p, int j)
{
    if (j < 0 || j > p.level)
        throw ShapeError("project: target level " + std::to_string(j) + " out of range");
    SemplePoint<F> q = p;
    q.level = j;
    q.blocks.resize(static_cast<std::size_t>(j));
    return q;
}

// The slice representative jet of a chart point: rho-row (taut, 0, ..., 0),
// other A-rows Z^i_j = block_j[i] taut^j, B-rows zero.
template <ScalarField F>
LogJetCoords<F> reconstruct_jet(const SemplePoint<F>& p, const LogChart& chart)
{
    LogJetCoords<F> c(chart, p.level);
    c.base = p.base;
    c.z(p.rho, 1) = p.taut;
    F tp = F::one();
    for (int j = 1; j <= p.level; ++j) {
        tp *= p.taut;
        for (std::size_t m = 0; m < p.others.size(); ++m)
            c.z(p.others[m], j) = p.blocks[static_cast<std::size_t>(j - 1)][m] * tp;
    }
    return c;
}

// Re-express a chart point in another chart over the same jet orbit.
template <ScalarField F>
SemplePoint<F> chart_transition(const SemplePoint<F>& p, const LogChart& chart, int rho2)
{
    return chart_coords(reconstruct_jet(p, chart), p.A, rho2);
}

// Lift of a polynomial germ to tower level k at parameter t0, evaluated in
// the chart selected by the first-nonzero rule.
template <ScalarField F>
SemplePoint<F> lift_curve(const PolyGerm<F>& f, const LogChart& chart, const std::vector<int>& A,
                          int k, const F& t0)
{
    LogJetCoords<F> c = to_log_coords(f.jet_at(t0, k), chart);
    bool regular = false;
    for (int i : A)
        if (!c.z(i, 1).is_zero())
            regular = true;
    if (!regular)
        throw DomainError("lift_curve: singular point (f'(t0) = 0 in the A-frame)");
    return chart_coords(c, A, select_chart(c, A));
}

// Theorem 3.2(b) checked on one jet/reparametrization pair.
template <ScalarField F>
struct LiftInvarianceReport {
    bool positions_equal = false;
    bool vector_equivariant = false;
    F scalar_ratio = F::zero();
    F expected = F::zero(); // phi'(0)
    bool ok() const { return positions_equal && vector_equivariant; }
};

template <ScalarField F>
LiftInvarianceReport<F> check_lift_invariance(const LogJetCoords<F>& c, const Reparam<F>& phi,
                                              const std::vector<int>& A)
{
    if (!phi.is_regular())
        throw DomainError("check_lift_invariance: phi must be regular");
    int rho = select_chart(c, A);
    SemplePoint<F> p1 = chart_coords(c, A, rho);
    SemplePoint<F> p2 = chart_coords(coords_compose(c, phi), A, rho);
    LiftInvarianceReport<F> rep;
    rep.expected = phi.deriv1();
    rep.positions_equal = p1.same_position(p2);
    rep.scalar_ratio = p2.taut / p1.taut;
    std::vector<F> v1 = sk_final_block(p1), v2 = sk_final_block(p2);
    rep.vector_equivariant = true;
    for (std::size_t m = 0; m < v1.size(); ++m)
        if (v2[m] != rep.expected * v1[m])
            rep.vector_equivariant = false;
    if (rep.scalar_ratio != rep.expected)
        rep.vector_equivariant = false;
    return rep;
}

namespace detail {

// Chart coordinate functions of the lifted curve as truncated series in the
// curve parameter; u^{(m+1)} = (d/ds u^{(m)}) / Z^rho_1(s), the level-by-level
// projectivization of the derivative.
template <ScalarField F>
struct LiftSeries {
    int rho = 0;
    std::vector<std::vector<F>> w;               // Z^i_1(s) per A-index
    std::vector<std::vector<std::vector<F>>> u;  // u[m-1][p] = level-m coord series
};

template <ScalarField F>
LiftSeries<F> lift_series(const LogJetCoords<F>& c, const std::vector<int>& A, int levels)
{
    LiftSeries<F> ls;
    const std::size_t len = static_cast<std::size_t>(c.k);
    // w_i(s): Taylor of the Z^i_1 coordinate along the curve.
    std::vector<std::vector<F>> wAll;
    for (int i : A) {
        std::vector<F> wi(len, F::zero());
        F fact = F::one();
        for (int j = 1; j <= c.k; ++j) {
            if (j > 1)
                fact *= F::from_int(j - 1);
            wi[static_cast<std::size_t>(j - 1)] = c.z(i, j) / fact;
        }
        wAll.push_back(std::move(wi));
    }
    // chart: minimal valuation, first by index order
    std::size_t best = len + 1;
    int rho_pos = -1;
    for (std::size_t p = 0; p < wAll.size(); ++p) {
        std::size_t v = series::valuation(wAll[p]);
        if (v < best) {
            best = v;
            rho_pos = static_cast<int>(p);
        }
    }
    if (rho_pos < 0 || best >= len)
        throw DomainError("lift_series: identically singular jet in the A-frame");
    ls.rho = A[static_cast<std::size_t>(rho_pos)];
    ls.w = wAll;

    std::vector<std::vector<F>> cur;
    for (std::size_t p = 0; p < wAll.size(); ++p)
        if (static_cast<int>(p) != rho_pos)
            cur.push_back(series::div_cancel(wAll[p], wAll[static_cast<std::size_t>(rho_pos)]));
    ls.u.push_back(cur);
    for (int m = 2; m <= levels; ++m) {
        std::vector<std::vector<F>> nxt;
        for (const auto& s : ls.u.back()) {
            if (s.size() < 2)
                throw PrecisionError("lift_series: jet order too small for level " +
                                     std::to_string(m));
            nxt.push_back(series::div_cancel(series::derivative(s),
                                             wAll[static_cast<std::size_t>(rho_pos)]));
        }
        ls.u.push_back(std::move(nxt));
    }
    return ls;
}

} // namespace detail

// Gamma_j detection (eq. (4) of the tower construction): the level-(j-1)
// lift is a regular point of the lifted curve but the projection of its
// derivative to the tautological line one level down vanishes. Chart data
// incarnation: every velocity through level j-2 vanishes while some level-
// (j-1) fiber velocity does not.
template <ScalarField F>
bool on_gamma(const LogJetCoords<F>& c, const std::vector<int>& A, int j)
{
    if (j < 2)
        throw ConfigError("on_gamma: levels start at j = 2");
    detail::LiftSeries<F> ls = detail::lift_series(c, A, j - 1);
    auto base_velocity_zero = [&]() {
        for (const auto& wi : ls.w)
            if (!wi.empty() && !wi[0].is_zero())
                return false;
        return true;
    };
    auto fiber_velocity_zero = [&](int level) {
        for (const auto& s : ls.u[static_cast<std::size_t>(level - 1)]) {
            if (s.size() < 2)
                throw PrecisionError("on_gamma: jet order too small");
            if (!s[1].is_zero())
                return false;
        }
        return true;
    };
    bool zero_through = base_velocity_zero();
    for (int m = 1; m <= j - 2 && zero_through; ++m)
        zero_through = fiber_velocity_zero(m);
    bool regular_above = !zero_through || !fiber_velocity_zero(j - 1);
    if (!regular_above)
        throw DomainError("on_gamma: jet singular at level " + std::to_string(j - 1));
    return zero_through;
}

} // namespace logjet
