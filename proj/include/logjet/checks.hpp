#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "logjet/directed.hpp"
#include "logjet/expr.hpp"
#include "logjet/jet.hpp"
#include "logjet/jetdiff.hpp"
#include "logjet/logcoords.hpp"
#include "logjet/rational.hpp"
#include "logjet/report.hpp"
#include "logjet/sampling.hpp"
#include "logjet/semple.hpp"
#include "logjet/theta.hpp"

// The property-check battery behind `suite --all` and the acceptance
// criteria. Every check is deterministic in its seed and reports exact
// failure counts.

namespace logjet::checks {

using Q = GaussRational;

namespace detail {

inline void note_failure(CheckReport& rep, const Q& residual, const std::string& what)
{
    ++rep.failures;
    rep.max_residual = format_residual(std::max(residual.abs_approx(), 1e-300));
    if (rep.witness.empty())
        rep.witness = what;
}

inline void note_failure(CheckReport& rep, const std::string& what)
{
    ++rep.failures;
    if (rep.witness.empty())
        rep.witness = what;
}

} // namespace detail

// Criterion 1: associativity of composition, group law of G_k, closure of
// G_k^o, exact.
inline CheckReport faa_di_bruno_group(int trials, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "faa-di-bruno-group";
    rep.params = {{"kmax", std::to_string(kmax)}};
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int k = static_cast<int>(g.range(1, kmax));
        Jet<Q> f = sample_jet<Q>(g, k);
        Reparam<Q> phi = sample_reparam<Q>(g, k);
        Reparam<Q> psi = sample_reparam<Q>(g, k);
        Reparam<Q> chi = sample_reparam<Q>(g, k);

        // Faa di Bruno consistency
        if (jet_compose(jet_compose(f, phi), psi) != jet_compose(f, reparam_compose(phi, psi)))
            detail::note_failure(rep, "compose-associativity trial " + std::to_string(t));
        // group associativity
        if (reparam_compose(reparam_compose(phi, psi), chi) !=
            reparam_compose(phi, reparam_compose(psi, chi)))
            detail::note_failure(rep, "group-associativity trial " + std::to_string(t));
        // two-sided inverse
        Reparam<Q> inv = reparam_invert(phi);
        if (reparam_compose(phi, inv) != Reparam<Q>::identity(k) ||
            reparam_compose(inv, phi) != Reparam<Q>::identity(k))
            detail::note_failure(rep, "inverse trial " + std::to_string(t));
        // G_k^o closure under both operations
        Reparam<Q> u1 = sample_reparam<Q>(g, k, true), u2 = sample_reparam<Q>(g, k, true);
        if (!reparam_compose(u1, u2).in_unipotent_part() ||
            !reparam_invert(u1).in_unipotent_part())
            detail::note_failure(rep, "Gko-closure trial " + std::to_string(t));
    }
    return rep;
}

// Formal derivative is a derivation over jet multiplication.
inline CheckReport leibniz_derivation(int trials, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "leibniz-derivation";
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int k = static_cast<int>(g.range(2, kmax));
        Jet<Q> a = sample_jet<Q>(g, k), b = sample_jet<Q>(g, k);
        Jet<Q> lhs = (a * b).derivative();
        Jet<Q> rhs = a.derivative() * b.truncated(k - 1) + a.truncated(k - 1) * b.derivative();
        if (lhs != rhs)
            detail::note_failure(rep, "trial " + std::to_string(t));
    }
    return rep;
}

// jet_log and jet_exp are mutually inverse on their domains.
inline CheckReport log_exp_inverse(int trials, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "log-exp-inverse";
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int k = static_cast<int>(g.range(1, kmax));
        Jet<Q> f = sample_jet<Q>(g, k, true);
        if (jet_from_log(jet_log(f), f[0]) != f)
            detail::note_failure(rep, "exp(log(f)) != f at trial " + std::to_string(t));
        Jet<Q> w = sample_jet<Q>(g, k);
        w[0] = Q::zero();
        Jet<Q> e = jet_exp(w);
        std::vector<Q> back = jet_log(e);
        for (int j = 1; j <= k; ++j)
            if (back[static_cast<std::size_t>(j - 1)] != w[j])
                detail::note_failure(rep, "log(exp(w)) != w at trial " + std::to_string(t));
        if (f * jet_reciprocal(f) != Jet<Q>::one(k))
            detail::note_failure(rep, "reciprocal at trial " + std::to_string(t));
    }
    return rep;
}

// Criterion 2 (first half): the universal polynomials at small order.
inline CheckReport gpoly_values()
{
    CheckReport rep;
    rep.name = "gpoly-values";
    rep.trials = 3;
    const auto& g = g_polynomials<Q>(3);
    if (!g[0].is_zero())
        detail::note_failure(rep, "g_1 != 0");
    if (to_canonical_string(g[1]) != "Z[1,1]^2")
        detail::note_failure(rep, "g_2 != Z_1^2");
    if (to_canonical_string(g[2]) != "3*Z[1,1]*Z[1,2] + Z[1,1]^3")
        detail::note_failure(rep, "g_3 != 3 Z_1 Z_2 + Z_1^3");
    return rep;
}

// g_j recovered numerically by fitting on >= dim-many random jets; oracle is
// the exponential jet, independent of the symbolic recursion.
inline CheckReport gpoly_fit(int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "gpoly-fit";
    rep.params = {{"kmax", std::to_string(kmax)}};
    rep.seed = seed;
    const auto& gp = g_polynomials<Q>(kmax);
    for (int j = 2; j <= kmax; ++j) {
        ++rep.trials;
        // monomial basis of weight j in Z_1..Z_{j-1}: enumerate partitions of
        // j with parts < j via the symbolic polynomial itself plus fresh ones
        std::vector<Monomial> basis;
        for (const auto& [m, c] : gp[static_cast<std::size_t>(j - 1)].terms())
            basis.push_back(m);
        // fit coefficients on random points
        const std::size_t dim = basis.size();
        linalg::Mat<Q> a;
        std::vector<Q> rhs;
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(j));
        for (std::size_t row = 0; row < dim + 3; ++row) {
            std::vector<Q> vals(static_cast<std::size_t>(j), Q::zero()); // Z_1..Z_j
            for (int m = 1; m < j; ++m)
                vals[static_cast<std::size_t>(m - 1)] = sample_gauss<Q>(g);
            // oracle: d^j exp(w) with w-jet (0, Z_1..Z_{j-1}, 0)
            Jet<Q> w(j);
            for (int m = 1; m < j; ++m)
                w[m] = vals[static_cast<std::size_t>(m - 1)];
            Q target = jet_exp(w)[j]; // equals Z_j + g_j = 0 + g_j here
            std::vector<Q> arow;
            for (const auto& mono : basis) {
                Q v = Q::one();
                for (const auto& [key, e] : mono) {
                    Var var{key};
                    for (int p = 0; p < e; ++p)
                        v *= vals[static_cast<std::size_t>(var.j() - 1)];
                }
                arow.push_back(v);
            }
            a.push_back(std::move(arow));
            rhs.push_back(target);
        }
        auto sol = linalg::solve(a, rhs);
        if (!sol) {
            detail::note_failure(rep, "fit inconsistent at j=" + std::to_string(j));
            continue;
        }
        JetPolynomial<Q> fitted;
        for (std::size_t m = 0; m < basis.size(); ++m)
            fitted.add_term(basis[m], (*sol)[m]);
        if (fitted != gp[static_cast<std::size_t>(j - 1)])
            detail::note_failure(rep, "fitted g_j differs at j=" + std::to_string(j));
    }
    return rep;
}

// Criterion 2 (second half): hat_from_log o to_log_coords is the identity,
// and the two inverse routes agree.
inline CheckReport log_roundtrip(int trials, int nmax, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "log-roundtrip";
    rep.params = {{"nmax", std::to_string(nmax)}, {"kmax", std::to_string(kmax)}};
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(1, nmax));
        int l = static_cast<int>(g.range(0, n));
        int k = static_cast<int>(g.range(1, kmax));
        LogChart chart(n, l);
        std::vector<Jet<Q>> coords;
        for (int i = 1; i <= n; ++i)
            coords.push_back(sample_jet<Q>(g, k, i <= l));
        CurveJet<Q> f(coords);
        LogJetCoords<Q> c = to_log_coords(f, chart);
        if (hat_from_log(c) != f)
            detail::note_failure(rep, "hat(log(f)) != f at trial " + std::to_string(t));
        if (!(log_from_hat(f, chart) == c))
            detail::note_failure(rep, "inversion route disagrees at trial " + std::to_string(t));
    }
    return rep;
}

// Prop 3.2(a) shift trivialization: G_k-commutation and singularity
// preservation; dlog of chart monomials is linear in the coordinates.
inline CheckReport shift_trivialization_props(int trials, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "shift-trivialization";
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(1, 3));
        int l = static_cast<int>(g.range(0, n));
        int k = static_cast<int>(g.range(1, 5));
        LogChart chart(n, l);
        LogJetCoords<Q> c = sample_coords<Q>(g, chart, k);
        Reparam<Q> phi = sample_reparam<Q>(g, k);
        LogJetCoords<Q> lhs = shift_trivialization(coords_compose(c, phi));
        LogJetCoords<Q> rhs = coords_compose(shift_trivialization(c), phi);
        if (!(lhs == rhs))
            detail::note_failure(rep, "shift does not commute with G_k at trial " + std::to_string(t));
        LogJetCoords<Q> twice = shift_trivialization(shift_trivialization(c));
        if (!(twice == shift_trivialization(c)))
            detail::note_failure(rep, "shift not idempotent at trial " + std::to_string(t));
        // singular jets stay singular
        LogJetCoords<Q> s = c;
        for (int i = 1; i <= n; ++i)
            s.z(i, 1) = Q::zero();
        LogJetCoords<Q> sh = shift_trivialization(s);
        for (int i = 1; i <= n; ++i)
            if (!sh.z(i, 1).is_zero())
                detail::note_failure(rep, "shift broke singularity at trial " + std::to_string(t));
    }
    return rep;
}

// Criterion 3: integrate_germ output satisfies every constraint exactly; the
// projection to free data is a bijection (round trip); detection of
// violations.
inline CheckReport directed_membership(int structures, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "directed-membership";
    rep.params = {{"kmax", std::to_string(kmax)}};
    rep.trials = structures;
    rep.seed = seed;
    for (int t = 0; t < structures; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(2, 3));
        int r = static_cast<int>(g.range(1, std::min(2, n - 1)));
        int l = static_cast<int>(g.range(0, n));
        int k = static_cast<int>(g.range(2, kmax));
        DirectedStructure<Q> ds = sample_structure<Q>(g, n, r, l, 2);
        LogChart chart = ds.chart();

        std::vector<Jet<Q>> freeA;
        for (int p = 0; p < r; ++p)
            freeA.push_back(sample_jet<Q>(g, k));
        std::vector<Q> basepoint;
        for (int i = 1; i <= n; ++i)
            basepoint.push_back(i <= l ? sample_gauss_nonzero<Q>(g) : sample_gauss<Q>(g));

        CurveJet<Q> germ = integrate_germ(ds, freeA, basepoint, k);
        LogJetCoords<Q> c = to_log_coords(germ, chart);
        ConstraintSet<Q> cs = l > 0 ? log_constraint_polynomials(ds, chart, k)
                                    : constraint_polynomials(ds, k);
        ResidualReport<Q> res = is_directed_jet(c, cs);
        if (!res.all_zero)
            detail::note_failure(rep, "nonzero residual at structure " + std::to_string(t));

        // free data reproduced
        for (int p = 0; p < r; ++p) {
            int m = ds.A[static_cast<std::size_t>(p)];
            for (int j = 1; j <= k; ++j)
                if (c.z(m, j) != freeA[static_cast<std::size_t>(p)][j])
                    detail::note_failure(rep, "A-components not reproduced at structure " +
                                                  std::to_string(t));
        }

        // round trip: extract free data + basepoint, re-integrate
        std::vector<Jet<Q>> free2;
        for (int m : ds.A)
            free2.push_back(c.row_jet(m));
        std::vector<Q> base2 = c.base;
        if (!(integrate_germ(ds, free2, base2, k) == germ))
            detail::note_failure(rep, "re-integration differs at structure " + std::to_string(t));

        // violation detection: perturb one B-equation
        if (!ds.B.empty()) {
            LogJetCoords<Q> bad = c;
            int i = ds.B[static_cast<std::size_t>(g.range(0, static_cast<long>(ds.B.size()) - 1))];
            int h = static_cast<int>(g.range(1, k));
            bad.z(i, h) += Q::one();
            ResidualReport<Q> rr = is_directed_jet(bad, cs);
            if (rr.all_zero || rr.residuals.at({h, i}).is_zero())
                detail::note_failure(rep, "violation not detected at structure " + std::to_string(t));
        }

        // zero jet is a member (no constant terms anywhere)
        LogJetCoords<Q> zero(chart, k);
        zero.base = c.base;
        if (!is_directed_jet(zero, cs).all_zero)
            detail::note_failure(rep, "zero jet rejected at structure " + std::to_string(t));

        // triangularity of the constraint polynomials
        for (const auto& [hi, poly] : cs.polys) {
            for (const auto& [mono, cc] : poly.terms())
                for (const auto& [key, e] : mono) {
                    Var v{key};
                    if (v.kind() == Var::Z && v.j() > hi.first)
                        detail::note_failure(rep, "triangularity violated at structure " +
                                                      std::to_string(t));
                }
        }
    }
    return rep;
}

// Criterion 3 (second half): the log-frame constraints agree with direct
// differentiation of the exponential substitution, exactly, at random
// evaluation points.
inline CheckReport psi_factorization(int structures, int points, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "psi-factorization";
    rep.params = {{"points", std::to_string(points)}, {"kmax", std::to_string(kmax)}};
    rep.trials = structures;
    rep.seed = seed;
    for (int t = 0; t < structures; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(2, 3));
        int r = static_cast<int>(g.range(1, std::min(2, n - 1)));
        int l = static_cast<int>(g.range(1, n));
        int k = static_cast<int>(g.range(2, kmax));
        DirectedStructure<Q> ds = sample_structure<Q>(g, n, r, l, 2);
        LogChart chart = ds.chart();
        ConstraintSet<Q> cs = log_constraint_polynomials(ds, chart, k);

        for (int pt = 0; pt < points; ++pt) {
            // random evaluation point: base x (off the divisor) and jet data V
            LogJetCoords<Q> c = sample_coords<Q>(g, chart, k);
            // realize as a germ f with f = Psi o (w-germ): exact jets
            CurveJet<Q> f = hat_from_log(c);
            // analytic oracle: A_h^i = d^{h-1}/dt^{h-1} [sum_m a_im(f) w_m]
            const std::size_t len = static_cast<std::size_t>(k);
            std::vector<std::vector<Q>> w(static_cast<std::size_t>(n));
            std::vector<std::vector<Q>> fs(static_cast<std::size_t>(n));
            for (int i = 1; i <= n; ++i) {
                std::vector<Q> wi(len, Q::zero());
                Q fact = Q::one();
                for (int j = 1; j <= k; ++j) {
                    if (j > 1)
                        fact *= Q::from_int(j - 1);
                    wi[static_cast<std::size_t>(j - 1)] = c.z(i, j) / fact;
                }
                w[static_cast<std::size_t>(i - 1)] = std::move(wi);
                fs[static_cast<std::size_t>(i - 1)] = f.coord(i).taylor();
                fs[static_cast<std::size_t>(i - 1)].resize(len, Q::zero());
            }
            for (int i : ds.B) {
                std::vector<Q> acc(len, Q::zero());
                for (int m : ds.A) {
                    const auto& am = ds.a(i, m);
                    if (am.is_zero())
                        continue;
                    logjet::detail::TruncSeries<Q> av =
                        am.eval_generic<logjet::detail::TruncSeries<Q>>(
                            [&](Var v) {
                                return logjet::detail::TruncSeries<Q>{
                                    fs[static_cast<std::size_t>(v.i() - 1)]};
                            },
                            [&](const Q& cc) {
                                return logjet::detail::TruncSeries<Q>::constant(cc, len);
                            });
                    acc = series::add(acc, series::mul(av.c, w[static_cast<std::size_t>(m - 1)], len));
                }
                Q fact = Q::one();
                for (int h = 1; h <= k; ++h) {
                    if (h > 1)
                        fact *= Q::from_int(h - 1);
                    Q oracle = fact * acc[static_cast<std::size_t>(h - 1)];
                    Q symbolic = evaluate_on_coords(cs.at(h, i), c);
                    if (oracle != symbolic)
                        detail::note_failure(rep, oracle - symbolic,
                                             "structure " + std::to_string(t) + " point " +
                                                 std::to_string(pt) + " (h,i)=(" +
                                                 std::to_string(h) + "," + std::to_string(i) + ")");
                }
            }
        }
    }
    return rep;
}

// Criterion 4: tower compatibility, Theorem 3.2(b) invariance, chart
// overlap coherence, and the curve-recursion cross-check.
inline CheckReport semple_tower(int trials, int kmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "semple-tower";
    rep.params = {{"kmax", std::to_string(kmax)}};
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(2, 3));
        int k = static_cast<int>(g.range(2, kmax));
        LogChart chart(n, static_cast<int>(g.range(0, n)));
        std::vector<int> A;
        for (int i = 1; i <= n; ++i)
            A.push_back(i);

        // polynomial germ regular at 0 and off the divisor
        PolyGerm<Q> f;
        for (int i = 1; i <= n; ++i) {
            std::vector<Q> cf;
            cf.push_back(chart.is_log(i) ? sample_gauss_nonzero<Q>(g) : sample_gauss<Q>(g));
            for (int d = 1; d <= k + 1; ++d)
                cf.push_back(sample_gauss<Q>(g));
            f.taylor.push_back(std::move(cf));
        }
        bool regular = false;
        for (int i = 1; i <= n; ++i)
            if (!f.taylor[static_cast<std::size_t>(i - 1)][1].is_zero())
                regular = true;
        if (!regular)
            f.taylor[0][1] = Q::one();

        // tower compatibility
        SemplePoint<Q> pk = lift_curve(f, chart, A, k, Q::zero());
        for (int j = 1; j <= k; ++j) {
            SemplePoint<Q> pj = lift_curve(f, chart, A, j, Q::zero());
            if (!(project(pk, j) == pj))
                detail::note_failure(rep, "project/lift mismatch at trial " + std::to_string(t));
        }

        // invariance
        LogJetCoords<Q> c = to_log_coords(f.jet_at(Q::zero(), k), chart);
        Reparam<Q> phi = sample_reparam<Q>(g, k);
        auto inv = check_lift_invariance(c, phi, A);
        if (!inv.ok())
            detail::note_failure(rep, "Theorem-3.2b invariance failed at trial " + std::to_string(t));
        Reparam<Q> uni = sample_reparam<Q>(g, k, true);
        auto inv2 = check_lift_invariance(c, uni, A);
        if (!inv2.ok() || !(inv2.scalar_ratio == Q::one()))
            detail::note_failure(rep, "G_k^o fiber action failed at trial " + std::to_string(t));

        // chart overlap coherence
        std::vector<int> valid;
        for (int i : A)
            if (!c.z(i, 1).is_zero())
                valid.push_back(i);
        if (valid.size() >= 2) {
            SemplePoint<Q> p1 = chart_coords(c, A, valid[0]);
            SemplePoint<Q> p2 = chart_coords(c, A, valid[1]);
            if (!(chart_transition(p1, chart, valid[1]) == p2))
                detail::note_failure(rep, "chart transition mismatch at trial " + std::to_string(t));
        }

        // regularity correspondence
        DirectedStructure<Q> full;
        full.n = n;
        full.r = n;
        full.l = chart.l;
        full.A = A;
        bool reg = is_regular_jet(c, full);
        bool chart_ok = false;
        for (int i : A) {
            try {
                chart_coords(c, A, i);
                chart_ok = true;
            } catch (const ChartError&) {
            }
        }
        if (reg != chart_ok)
            detail::note_failure(rep, "regularity correspondence failed at trial " + std::to_string(t));

        // blocks agree with projectivized derivatives of the previous lift
        LogJetCoords<Q> cw = to_log_coords(f.jet_at(Q::zero(), 2 * k + 2), chart);
        auto ls = logjet::detail::lift_series(cw, A, k);
        SemplePoint<Q> direct = lift_curve(f, chart, A, k, Q::zero());
        std::size_t oi = 0;
        for (int i : A) {
            if (i == ls.rho)
                continue;
            for (int m = 1; m <= k; ++m) {
                const auto& s = ls.u[static_cast<std::size_t>(m - 1)][oi];
                Q rec = s.empty() ? Q::zero() : s[0];
                if (rec != direct.blocks[static_cast<std::size_t>(m - 1)][oi])
                    detail::note_failure(rep, "recursion/chart mismatch at trial " +
                                                  std::to_string(t));
            }
            ++oi;
        }
    }
    return rep;
}

// Gamma detection on the canonical examples plus cusp family.
inline CheckReport gamma_detection(int trials, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "gamma-detection";
    rep.trials = trials;
    rep.seed = seed;
    LogChart chart(2, 0);
    std::vector<int> A{1, 2};
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        // cusp (t^p, t^{p+1}) with p >= 2 sits on Gamma_2; lines never do
        long p = g.range(2, 4);
        PolyGerm<Q> cusp{{std::vector<Q>(static_cast<std::size_t>(p) + 1, Q::zero()),
                          std::vector<Q>(static_cast<std::size_t>(p) + 2, Q::zero())}};
        cusp.taylor[0][static_cast<std::size_t>(p)] = Q::one();
        cusp.taylor[1][static_cast<std::size_t>(p) + 1] = Q::one();
        LogJetCoords<Q> cj = to_log_coords(cusp.jet_at(Q::zero(), 2 * static_cast<int>(p) + 2), chart);
        if (!on_gamma(cj, A, 2))
            detail::note_failure(rep, "cusp not detected at trial " + std::to_string(t));
        PolyGerm<Q> line{{{sample_gauss<Q>(g), sample_gauss_nonzero<Q>(g)},
                          {sample_gauss<Q>(g), sample_gauss<Q>(g)}}};
        LogJetCoords<Q> lj = to_log_coords(line.jet_at(Q::zero(), 6), chart);
        for (int j = 2; j <= 3; ++j)
            if (on_gamma(lj, A, j))
                detail::note_failure(rep, "line flagged at trial " + std::to_string(t));
    }
    return rep;
}

// Criterion 5: symbolic Wronskians are equivariant of weight r(r+1)/2; the
// second derivative alone is not invariant.
inline CheckReport equivariance_wronskian(int r, int trials, int k, std::uint64_t seed)
{
    JetPolynomial<Q> w;
    {
        std::vector<int> coords;
        for (int i = 1; i <= r; ++i)
            coords.push_back(i);
        w = wronskian_symbolic<Q>(coords);
    }
    int m = r * (r + 1) / 2;
    EquivarianceReport er = check_equivariance(w, m, trials, seed, k, r);
    CheckReport rep;
    rep.name = "equivariance-wronskian-r" + std::to_string(r);
    rep.params = {{"m", std::to_string(m)}, {"k", std::to_string(k)}};
    rep.trials = er.trials;
    rep.failures = er.failures;
    rep.max_residual = format_residual(er.max_residual);
    rep.seed = seed;
    rep.witness = er.witness;
    return rep;
}

// The known counterexample: Z^1_2 transforms inhomogeneously. The check
// fails if no violation is found.
inline CheckReport equivariance_counterexample(int trials, std::uint64_t seed)
{
    EquivarianceReport er =
        check_equivariance(JetPolynomial<Q>::jet_var(1, 2), 2, trials, seed, 2, 1);
    CheckReport rep;
    rep.name = "equivariance-counterexample-z12";
    rep.trials = trials;
    rep.seed = seed;
    if (er.failures == 0)
        detail::note_failure(rep, "Z[1,2] unexpectedly equivariant");
    else
        rep.witness = er.witness;
    return rep;
}

// Wronskian scaling ratio phi'(0)^{r(r+1)/2} on germ rows.
inline CheckReport wronskian_scaling(int trials, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "wronskian-scaling";
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int r = static_cast<int>(g.range(1, 3));
        std::vector<Jet<Q>> rows;
        for (int i = 0; i < r; ++i)
            rows.push_back(sample_jet<Q>(g, r));
        CurveJet<Q> germ(rows);
        Reparam<Q> phi = sample_reparam<Q>(g, r);
        try {
            Q ratio = wronskian_equivariance_check(germ, phi);
            Q expect = Q::one();
            for (int p = 0; p < r * (r + 1) / 2; ++p)
                expect *= phi.deriv1();
            if (ratio != expect)
                detail::note_failure(rep, ratio - expect, "trial " + std::to_string(t));
        } catch (const DomainError&) {
            // degenerate Wronskian; resample by skipping
        }
    }
    return rep;
}

// Criterion 6: weight law 2m+1, evaluation/differentiation commutation, the
// schedule validation and Theta_l homogeneity, and eq. (t3n) residuals.
inline CheckReport d_operator_weight_law(int trials, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "d-operator-weight-law";
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(1, 3));
        int k = static_cast<int>(g.range(1, 3));
        int m = static_cast<int>(g.range(1, 4));
        JetPolynomial<Q> s = sample_homogeneous_poly<Q>(g, m, n, k);
        JetPolynomial<Q> tt = sample_homogeneous_poly<Q>(g, m, n, k);
        if (tt.is_zero())
            continue;
        JetPolynomial<Q> d = d_operator(s, tt);
        auto w = d.weighted_degree();
        if (!d.is_zero() && (!w || *w != 2 * m + 1))
            detail::note_failure(rep, "weight law violated at trial " + std::to_string(t));
        if (!(d_operator(tt, tt).is_zero()))
            detail::note_failure(rep, "d(t/t) != 0 at trial " + std::to_string(t));

        // chain check: t^2 d/dt (s/t) on a germ equals the symbolic value
        PolyGerm<Q> f;
        for (int i = 1; i <= n; ++i) {
            std::vector<Q> cf;
            for (int dd = 0; dd <= k + 2; ++dd)
                cf.push_back(sample_gauss<Q>(g));
            f.taylor.push_back(std::move(cf));
        }
        Jet<Q> sj = evaluate_along_germ(s, f, 1);
        Jet<Q> tj = evaluate_along_germ(tt, f, 1);
        Q lhs = sj[1] * tj[0] - sj[0] * tj[1]; // (s't - s t')(0)
        LogJetCoords<Q> c = to_log_coords(f.jet_at(Q::zero(), k + 1), LogChart(n, 0));
        Q rhs = evaluate_on_coords(d, c);
        if (lhs != rhs)
            detail::note_failure(rep, lhs - rhs, "chain check failed at trial " + std::to_string(t));
    }
    return rep;
}

inline CheckReport theta_sequence_schedule(std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "theta-sequence-schedule";
    rep.seed = seed;
    SplitMix64 g(seed);
    for (int t = 0; t < 5; ++t) {
        ++rep.trials;
        int k = static_cast<int>(g.range(1, 3));
        int n = 2;
        int m = static_cast<int>(g.range(1, 3)) * (2 * k - 1);
        JetPolynomial<Q> theta = sample_homogeneous_poly<Q>(g, m, n, k);
        if (theta.is_zero())
            theta = JetPolynomial<Q>::jet_var(1, 1).pow(m);
        JetPolynomial<Q> s0 = JetPolynomial<Q>::jet_var(1, 1);
        // Theta_0 = Theta s0^{n_0 - m} with the paper's example schedule
        std::vector<long> sched = example_schedule(k, m, 3);
        JetPolynomial<Q> theta0 = theta;
        for (long q = 0; q < sched[0] - m; ++q)
            theta0 = theta0 * s0;
        std::vector<JetPolynomial<Q>> seq = theta_sequence(theta0, s0, sched, k);
        for (std::size_t l = 0; l < seq.size(); ++l) {
            auto w = seq[l].weighted_degree();
            if (!w || *w != sched[l])
                detail::note_failure(rep, "Theta_l weight mismatch at l=" + std::to_string(l));
            if (static_cast<long>(seq[l].max_derivative_order()) > static_cast<long>(k) + static_cast<long>(l))
                detail::note_failure(rep, "Theta_l order too high at l=" + std::to_string(l));
        }
        // invalid schedules must be rejected
        bool rejected = false;
        try {
            std::vector<long> bad = sched;
            bad[1] += 1; // breaks divisibility
            theta_sequence(theta0, s0, bad, k);
        } catch (const ConfigError&) {
            rejected = true;
        }
        if (!rejected)
            detail::note_failure(rep, "bad schedule accepted");
        rejected = false;
        try {
            std::vector<long> bad{sched[0], (2 * (static_cast<long>(k) + 1) - 1)}; // too small
            theta_sequence(theta0, s0, bad, k);
        } catch (const ConfigError&) {
            rejected = true;
        }
        if (!rejected)
            detail::note_failure(rep, "non-growing schedule accepted");
    }
    return rep;
}

inline CheckReport normalized_derivative(int trials, int kmax, int lmax, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "normalized-derivative";
    rep.params = {{"kmax", std::to_string(kmax)}, {"lmax", std::to_string(lmax)}};
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int n = static_cast<int>(g.range(2, 3));
        int k = static_cast<int>(g.range(1, kmax));
        int l = static_cast<int>(g.range(0, lmax));
        int m = static_cast<int>(g.range(1, 3));
        JetPolynomial<Q> s = sample_homogeneous_poly<Q>(g, m, n, k);
        PolyGerm<Q> f;
        f.taylor.push_back({Q(0), Q(1)}); // f_1 = t
        for (int i = 2; i <= n; ++i) {
            std::vector<Q> cf;
            for (int d = 0; d <= k + l + 1; ++d)
                cf.push_back(sample_gauss<Q>(g));
            f.taylor.push_back(std::move(cf));
        }
        std::vector<Q> res = normalized_derivative_check(s, f, k, l);
        for (const Q& rr : res)
            if (!rr.is_zero())
                detail::note_failure(rep, rr, "trial " + std::to_string(t));
    }
    return rep;
}

// Criterion 8: planted dependent families recovered exactly; independent
// families witnessed.
inline CheckReport wronskian_dependence_suite(int trials, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "wronskian-dependence";
    rep.trials = 2 * trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        int count = static_cast<int>(g.range(2, 4));
        int order = count + static_cast<int>(g.range(1, 3));
        // planted dependence: last = combination of the others (plus const)
        std::vector<Jet<Q>> series;
        for (int i = 0; i + 1 < count; ++i)
            series.push_back(sample_jet<Q>(g, order));
        Jet<Q> last(order);
        std::vector<Q> planted;
        for (int i = 0; i + 1 < count; ++i) {
            Q ci = sample_gauss<Q>(g, 3);
            planted.push_back(ci);
            last = last + ci * series[static_cast<std::size_t>(i)];
        }
        last[0] += sample_gauss<Q>(g);
        series.push_back(last);
        DependenceResult<Q> res = wronskian_dependence(series);
        if (!res.dependent) {
            detail::note_failure(rep, "planted dependence missed at trial " + std::to_string(t));
        } else {
            // returned coefficients must annihilate the derivatives exactly
            for (int j = 1; j <= order; ++j) {
                Q acc = Q::zero();
                for (int i = 0; i < count; ++i)
                    acc += res.coefficients[static_cast<std::size_t>(i)] *
                           series[static_cast<std::size_t>(i)][j];
                if (!acc.is_zero())
                    detail::note_failure(rep, acc, "coefficients do not annihilate at trial " +
                                                       std::to_string(t));
            }
        }
        // independent family
        SplitMix64 g2 = SplitMix64::for_trial(seed ^ 0xabcdef, static_cast<std::uint64_t>(t));
        std::vector<Jet<Q>> ind;
        for (int i = 0; i < count; ++i) {
            Jet<Q> s = sample_jet<Q>(g2, order);
            s[i + 1] += Q::from_int(7); // nudge towards independence
            ind.push_back(s);
        }
        DependenceResult<Q> res2 = wronskian_dependence(ind);
        if (res2.dependent) {
            // genuine dependence of random data is possible but has measure
            // zero in the sample space; report it
            detail::note_failure(rep, "random family reported dependent at trial " + std::to_string(t));
        } else if (res2.witness_minor.is_zero()) {
            detail::note_failure(rep, "independent family lacks minor witness at trial " +
                                          std::to_string(t));
        }
    }
    return rep;
}

// Criterion 7: the numeric theta suite.
struct ThetaConfig {
    double tau_re = 0.0, tau_im = 1.0;
    long trunc = 30;
    long prec = 256;
    double tol = 1e-10;
};

inline std::vector<CheckReport> theta_suite(const ThetaConfig& cfg, std::uint64_t seed)
{
    std::vector<CheckReport> out;
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(cfg.prec);
    BigComplex tau(cfg.tau_re, cfg.tau_im, prec);
    ThetaSeries th(tau, cfg.trunc, prec);
    th.require_tail_below(cfg.tol);
    ThetaSeries th2(tau, 2 * cfg.trunc, prec);
    SplitMix64 g(seed);

    auto sample_z = [&](SplitMix64& gen, const ThetaSeries& ts) {
        for (;;) {
            double re = static_cast<double>(gen.range(-300, 300)) / 1000.0;
            double im = static_cast<double>(gen.range(-300, 300)) / 1000.0;
            BigComplex z(re, im, prec);
            if (ts.eval(z).abs_approx() > 1e-3)
                return z;
        }
    };

    { // periodicity in 1 and evenness
        CheckReport rep;
        rep.name = "theta-periodicity";
        rep.seed = seed;
        rep.trials = 8;
        double worst = 0.0;
        for (int t = 0; t < 8; ++t) {
            BigComplex z = sample_z(g, th);
            BigComplex one(1.0, 0.0, prec);
            double r1 = (th.eval(z + one) - th.eval(z)).abs_approx();
            double r2 = (th.eval(-z) - th.eval(z)).abs_approx();
            worst = std::max({worst, r1, r2});
        }
        rep.max_residual = format_residual(worst);
        if (worst > 1e-12)
            rep.failures = 1;
        out.push_back(rep);
    }

    { // multiplier for gamma = tau and trivial gamma = 1
        CheckReport rep;
        rep.name = "theta-quasi-periodicity";
        rep.seed = seed;
        rep.trials = 2;
        std::vector<BigComplex> samples;
        for (int s = 0; s < 6; ++s)
            samples.push_back(sample_z(g, th));
        QuasiPeriodicityFit f1 = quasi_periodicity_check(th, LatticeVector{1, 0}, samples);
        double worst = std::max(f1.alpha.abs_approx(), f1.beta.abs_approx());
        worst = std::max(worst, f1.max_residual);
        QuasiPeriodicityFit f2 = quasi_periodicity_check(th, LatticeVector{0, 1}, samples);
        BigComplex ea = th.multiplier_alpha(LatticeVector{0, 1});
        BigComplex eb = th.multiplier_beta(LatticeVector{0, 1});
        worst = std::max(worst, (f2.alpha - ea).abs_approx());
        worst = std::max(worst, (f2.beta - eb).abs_approx());
        worst = std::max(worst, f2.max_residual);
        rep.max_residual = format_residual(worst);
        if (worst > cfg.tol)
            rep.failures = 1;
        out.push_back(rep);
    }

    { // n' = 1 Wronskian: translation invariance for both generators,
      // reparametrization scaling with exponent 3, constant germ degenerates
        CheckReport rep;
        rep.name = "theta-wronskian";
        rep.seed = seed;
        rep.trials = 4;
        double worst = 0.0;
        // affine germ off the divisor
        BigComplex z0 = sample_z(g, th);
        Jet<BigComplex> f1(3);
        f1[0] = z0;
        f1[1] = BigComplex(0.7, 0.3, prec);
        f1[2] = BigComplex(-0.4, 0.9, prec);
        f1[3] = BigComplex(0.2, -0.5, prec);
        CurveJet<BigComplex> f(std::vector<Jet<BigComplex>>{f1});
        ThetaWronskian w = wronskian_theta(th, f, 1);
        if (w.degree != 3)
            detail::note_failure(rep, "degree tag wrong");
        for (LatticeVector gamma : {LatticeVector{1, 0}, LatticeVector{0, 1}}) {
            auto tr = translation_invariance_check(th, f, 1, gamma);
            worst = std::max({worst, tr.wronskian_residual, tr.column_residual});
        }
        // gamma = 0 is exactly invariant
        auto tr0 = translation_invariance_check(th, f, 1, LatticeVector{0, 0});
        worst = std::max(worst, tr0.wronskian_residual);
        // scaling: W(f o phi) = phi'(0)^3 W(f)
        Jet<BigComplex> pj(3);
        pj[1] = BigComplex(1.3, -0.2, prec);
        pj[2] = BigComplex(0.4, 0.1, prec);
        pj[3] = BigComplex(-0.3, 0.6, prec);
        Reparam<BigComplex> phi(pj);
        CurveJet<BigComplex> fp = curve_compose(f, phi);
        BigComplex c3 = phi.deriv1() * phi.deriv1() * phi.deriv1();
        ThetaWronskian wp = wronskian_theta(th, fp, 1);
        worst = std::max(worst, (wp.value - c3 * w.value).abs_approx());
        // constant germ: all dz rows vanish
        Jet<BigComplex> cj(3);
        cj[0] = z0;
        ThetaWronskian wc = wronskian_theta(th, CurveJet<BigComplex>(std::vector<Jet<BigComplex>>{cj}), 1);
        worst = std::max(worst, wc.value.abs_approx());
        rep.max_residual = format_residual(worst);
        if (worst > cfg.tol)
            rep.failures = 1;
        out.push_back(rep);
    }

    { // tail discipline: doubling N moves nothing beyond tolerance
        CheckReport rep;
        rep.name = "theta-tail-discipline";
        rep.seed = seed;
        rep.trials = 6;
        double worst = 0.0;
        for (int t = 0; t < 6; ++t) {
            BigComplex z = sample_z(g, th);
            worst = std::max(worst, (th.eval(z) - th2.eval(z)).abs_approx());
        }
        rep.max_residual = format_residual(worst);
        if (worst > cfg.tol)
            rep.failures = 1;
        out.push_back(rep);
    }
    return out;
}

// The full deterministic battery behind `suite --all`; records are sorted by
// check name before printing.
inline std::vector<CheckReport> run_suite(std::uint64_t seed)
{
    std::vector<CheckReport> reports;
    reports.push_back(faa_di_bruno_group(120, 6, seed));
    reports.push_back(leibniz_derivation(60, 6, seed));
    reports.push_back(log_exp_inverse(60, 6, seed));
    reports.push_back(gpoly_values());
    reports.push_back(gpoly_fit(5, seed));
    reports.push_back(log_roundtrip(80, 4, 6, seed));
    reports.push_back(shift_trivialization_props(40, seed));
    reports.push_back(directed_membership(25, 4, seed));
    reports.push_back(psi_factorization(10, 5, 4, seed));
    reports.push_back(semple_tower(25, 5, seed));
    reports.push_back(gamma_detection(10, seed));
    reports.push_back(equivariance_wronskian(1, 60, 3, seed));
    reports.push_back(equivariance_wronskian(2, 60, 3, seed));
    reports.push_back(equivariance_wronskian(3, 60, 4, seed));
    reports.push_back(equivariance_counterexample(40, seed));
    reports.push_back(wronskian_scaling(40, seed));
    reports.push_back(d_operator_weight_law(30, seed));
    reports.push_back(theta_sequence_schedule(seed));
    reports.push_back(normalized_derivative(25, 3, 3, seed));
    reports.push_back(wronskian_dependence_suite(30, seed));
    for (CheckReport& r : theta_suite(ThetaConfig{}, seed))
        reports.push_back(std::move(r));
    std::sort(reports.begin(), reports.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    return reports;
}

} // namespace logjet::checks
