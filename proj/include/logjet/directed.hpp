#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/logcoords.hpp"
#include "logjet/polynomial.hpp"

namespace logjet {

namespace detail {

// Truncated Taylor series as a ring, for evaluating coefficient polynomials
// along a curve.
template <ScalarField F>
struct TruncSeries {
    std::vector<F> c;

    static TruncSeries constant(const F& v, std::size_t len)
    {
        TruncSeries s{std::vector<F>(len, F::zero())};
        if (len)
            s.c[0] = v;
        return s;
    }
    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b)
    {
        TruncSeries r = a;
        for (std::size_t m = 0; m < b.c.size() && m < r.c.size(); ++m)
            r.c[m] += b.c[m];
        return r;
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b)
    {
        return TruncSeries{series::mul(a.c, b.c, std::min(a.c.size(), b.c.size()))};
    }
};

} // namespace detail

// The coefficient functions a_{im}(x) of a subbundle V given by linear
// equations xi_i = sum_{m in A} a_{im}(x) xi_m for i in B, in the log frame
// of a chart with l logarithmic coordinates (l = 0 is the holomorphic case).
template <ScalarField F>
struct DirectedStructure {
    int n = 1;
    int r = 1;
    int l = 0;
    std::vector<int> A, B; // 1-based coordinate indices, ascending
    std::map<std::pair<int, int>, JetPolynomial<F>> coeff; // (i in B, m in A) -> a_im(z)

    void validate() const
    {
        if (static_cast<int>(A.size()) != r)
            throw ConfigError("DirectedStructure: |A| must equal r");
        std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
        for (int i : A) {
            if (i < 1 || i > n || seen[static_cast<std::size_t>(i)])
                throw ConfigError("DirectedStructure: bad A index");
            seen[static_cast<std::size_t>(i)] = true;
        }
        for (int i : B) {
            if (i < 1 || i > n || seen[static_cast<std::size_t>(i)])
                throw ConfigError("DirectedStructure: bad B index");
            seen[static_cast<std::size_t>(i)] = true;
        }
        if (static_cast<int>(A.size() + B.size()) != n)
            throw ConfigError("DirectedStructure: A and B must partition 1..n");
        if (l > 0) {
            // log case: A = {1..a} u {l+1..l+b}
            int a = 0;
            while (a < static_cast<int>(A.size()) && A[static_cast<std::size_t>(a)] == a + 1 &&
                   A[static_cast<std::size_t>(a)] <= l)
                ++a;
            for (int p = a; p < static_cast<int>(A.size()); ++p)
                if (A[static_cast<std::size_t>(p)] != l + 1 + (p - a))
                    throw ConfigError("DirectedStructure: log case requires A = {1..a, l+1..l+b}");
        }
        for (const auto& [key, poly] : coeff) {
            for (const auto& [m, c] : poly.terms())
                for (const auto& [vk, e] : m)
                    if (Var{vk}.kind() != Var::Base)
                        throw ConfigError("DirectedStructure: coefficients must be polynomials in "
                                          "base coordinates only");
        }
    }

    const JetPolynomial<F>& a(int i, int m) const
    {
        static const JetPolynomial<F> kZero;
        auto it = coeff.find({i, m});
        return it == coeff.end() ? kZero : it->second;
    }

    LogChart chart() const { return LogChart(n, l); }
};

// Constraint polynomials (h = 1..k, i in B): Z^i_h = polys[{h,i}](x, Z).
template <ScalarField F>
struct ConstraintSet {
    int k = 0;
    bool log_frame = false; // built with the z d/dz rule
    std::map<std::pair<int, int>, JetPolynomial<F>> polys;

    const JetPolynomial<F>& at(int h, int i) const
    {
        auto it = polys.find({h, i});
        if (it == polys.end())
            throw ShapeError("ConstraintSet: no polynomial for (h,i)");
        return it->second;
    }
};

namespace detail {

template <ScalarField F>
ConstraintSet<F> build_constraints(const DirectedStructure<F>& ds, int k, int log_count)
{
    ds.validate();
    ConstraintSet<F> cs;
    cs.k = k;
    cs.log_frame = log_count > 0;
    for (int i : ds.B) {
        JetPolynomial<F> p;
        for (int m : ds.A)
            p = p + ds.a(i, m) * JetPolynomial<F>::jet_var(m, 1);
        cs.polys[{1, i}] = p;
        for (int h = 2; h <= k; ++h) {
            p = total_derivative(p, log_count);
            cs.polys[{h, i}] = p;
        }
    }
    return cs;
}

} // namespace detail

// Prop 1.2(a): formally differentiate f_i' = sum a_im(f) f_m' in the plain
// frame (chain rule d z_mu = Z^mu_1 for every mu).
template <ScalarField F>
ConstraintSet<F> constraint_polynomials(const DirectedStructure<F>& ds, int k)
{
    return detail::build_constraints(ds, k, 0);
}

// Prop 1.4(a): same derivation in the log frame, where differentiating a
// coefficient produces z_mu da/dz_mu for mu <= l. Coefficients stay
// polynomial on the whole chart.
template <ScalarField F>
ConstraintSet<F> log_constraint_polynomials(const DirectedStructure<F>& ds, const LogChart& chart,
                                            int k)
{
    if (chart.l != ds.l || chart.n != ds.n)
        throw ConfigError("log_constraint_polynomials: chart does not match structure");
    if (chart.l < 1)
        throw ConfigError("log_constraint_polynomials: need a log chart (l >= 1)");
    return detail::build_constraints(ds, k, chart.l);
}

// Substitute lower-order B-constraints into each polynomial, innermost
// first, so the reduced form references only x and A-indexed jet variables.
template <ScalarField F>
ConstraintSet<F> reduce(const ConstraintSet<F>& cs, const DirectedStructure<F>& ds)
{
    ConstraintSet<F> out;
    out.k = cs.k;
    out.log_frame = cs.log_frame;
    std::vector<bool> inB(static_cast<std::size_t>(ds.n) + 1, false);
    for (int i : ds.B)
        inB[static_cast<std::size_t>(i)] = true;
    for (int h = 1; h <= cs.k; ++h) {
        for (int i : ds.B) {
            JetPolynomial<F> p = cs.at(h, i);
            p = p.substitute([&](Var v) -> JetPolynomial<F> {
                if (v.kind() == Var::Z && inB[static_cast<std::size_t>(v.i())] && v.j() < h)
                    return out.at(v.j(), v.i());
                return JetPolynomial<F>::variable(v);
            });
            out.polys[{h, i}] = std::move(p);
        }
    }
    return out;
}

// Residuals Z^i_h - Q^i_h(x, Z); exact zero on members in exact arithmetic.
template <ScalarField F>
struct ResidualReport {
    std::map<std::pair<int, int>, F> residuals;
    bool all_zero = true;
    double max_abs = 0.0;
    std::pair<int, int> argmax{0, 0};
};

template <ScalarField F>
ResidualReport<F> is_directed_jet(const LogJetCoords<F>& c, const ConstraintSet<F>& cs)
{
    ResidualReport<F> rep;
    for (const auto& [hi, poly] : cs.polys) {
        F res = c.z(hi.second, hi.first) - evaluate_on_coords(poly, c);
        double a = res.abs_approx();
        if (!res.is_zero())
            rep.all_zero = false;
        if (a >= rep.max_abs) {
            rep.max_abs = a;
            rep.argmax = hi;
        }
        rep.residuals[hi] = std::move(res);
    }
    return rep;
}

// Prop 1.5(a): regular iff some Z^i_1 with i in A is nonzero; the B-sides
// are determined by the order-1 constraints.
template <ScalarField F>
bool is_regular_jet(const LogJetCoords<F>& c, const DirectedStructure<F>& ds)
{
    for (int i : ds.A)
        if (!c.z(i, 1).is_zero())
            return true;
    return false;
}

// Formal integration of f_i' = sum a_im(f) f_m' (Prop 1.2(a) proof): the
// A-components are free (given as Z-frame jets), the B-components are solved
// order by order. Returns plain derivative vectors with f(0) = basepoint.
template <ScalarField F>
CurveJet<F> integrate_germ(const DirectedStructure<F>& ds, const std::vector<Jet<F>>& freeA,
                           const std::vector<F>& basepoint, int k)
{
    ds.validate();
    if (static_cast<int>(freeA.size()) != ds.r)
        throw ShapeError("integrate_germ: need one free jet per A index");
    if (static_cast<int>(basepoint.size()) != ds.n)
        throw ShapeError("integrate_germ: basepoint must have n values");
    const std::size_t len = static_cast<std::size_t>(k) + 1;

    // Taylor series per coordinate and the log-frame velocities w_i = Z^i_1(t).
    std::vector<std::vector<F>> f(static_cast<std::size_t>(ds.n));
    std::vector<std::vector<F>> w(static_cast<std::size_t>(ds.n));

    for (int p = 0; p < ds.r; ++p) {
        int m = ds.A[static_cast<std::size_t>(p)];
        const Jet<F>& zrow = freeA[static_cast<std::size_t>(p)];
        if (zrow.order() != k)
            throw ShapeError("integrate_germ: free jets must have order k");
        const F& bm = basepoint[static_cast<std::size_t>(m - 1)];
        // primitive series with the given derivatives and zero constant term
        std::vector<F> prim(len, F::zero());
        F fact = F::one();
        for (int j = 1; j <= k; ++j) {
            fact *= F::from_int(j);
            prim[static_cast<std::size_t>(j)] = zrow[j] / fact;
        }
        if (m <= ds.l) {
            if (bm.is_zero())
                throw DomainError("integrate_germ: log coordinate basepoint must be nonzero");
            std::vector<F> e = series::exp(prim, len);
            f[static_cast<std::size_t>(m - 1)] = series::mul(std::vector<F>{bm}, e, len);
        } else {
            prim[0] = bm;
            f[static_cast<std::size_t>(m - 1)] = std::move(prim);
        }
        // w_m directly from the prescribed data
        std::vector<F> wm(len, F::zero());
        F fct = F::one();
        for (int j = 1; j <= k; ++j) {
            if (j > 1)
                fct *= F::from_int(j - 1);
            wm[static_cast<std::size_t>(j - 1)] = zrow[j] / fct;
        }
        w[static_cast<std::size_t>(m - 1)] = std::move(wm);
    }
    for (int i : ds.B) {
        std::vector<F> fi(len, F::zero());
        fi[0] = basepoint[static_cast<std::size_t>(i - 1)];
        if (i <= ds.l && fi[0].is_zero())
            throw DomainError("integrate_germ: log coordinate basepoint must be nonzero");
        f[static_cast<std::size_t>(i - 1)] = std::move(fi);
    }

    // Solve degree by degree; everything needed at degree h is already known.
    for (int h = 0; h < k; ++h) {
        const std::size_t cut = static_cast<std::size_t>(h) + 1;
        for (int i : ds.B) {
            // c_i(t) = sum_m a_im(f(t)) w_m(t) mod t^{h+1}
            std::vector<F> ci(cut, F::zero());
            for (int m : ds.A) {
                const auto& am = ds.a(i, m);
                if (am.is_zero())
                    continue;
                detail::TruncSeries<F> av = am.template eval_generic<detail::TruncSeries<F>>(
                    [&](Var v) {
                        if (v.kind() != Var::Base)
                            throw ConfigError("integrate_germ: non-base variable in coefficient");
                        std::vector<F> trunc(f[static_cast<std::size_t>(v.i() - 1)].begin(),
                                             f[static_cast<std::size_t>(v.i() - 1)].begin() +
                                                 static_cast<std::ptrdiff_t>(cut));
                        return detail::TruncSeries<F>{std::move(trunc)};
                    },
                    [&](const F& cc) { return detail::TruncSeries<F>::constant(cc, cut); });
                ci = series::add(ci, series::mul(av.c, w[static_cast<std::size_t>(m - 1)], cut));
            }
            auto& fi = f[static_cast<std::size_t>(i - 1)];
            F next; // coefficient of t^{h+1} in f_i
            if (i <= ds.l) {
                // f_i' = c_i f_i
                F acc = F::zero();
                for (std::size_t p = 0; p <= static_cast<std::size_t>(h); ++p)
                    acc += ci[p] * fi[static_cast<std::size_t>(h) - p];
                next = acc / F::from_int(h + 1);
            } else {
                next = ci[static_cast<std::size_t>(h)] / F::from_int(h + 1);
            }
            fi[static_cast<std::size_t>(h) + 1] = next;
        }
    }

    std::vector<Jet<F>> coords;
    coords.reserve(static_cast<std::size_t>(ds.n));
    for (int i = 1; i <= ds.n; ++i)
        coords.push_back(Jet<F>::from_taylor(f[static_cast<std::size_t>(i - 1)], k));
    return CurveJet<F>(std::move(coords));
}

} // namespace logjet
