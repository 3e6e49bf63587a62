#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/linalg.hpp"
#include "logjet/logcoords.hpp"
#include "logjet/polynomial.hpp"
#include "logjet/sampling.hpp"

namespace logjet {

// Cofactor determinant over any commutative ring with +, -, *.
template <class T>
T det(const std::vector<std::vector<T>>& m, const T& zero)
{
    const std::size_t r = m.size();
    if (r == 0)
        throw ShapeError("det: empty matrix");
    for (const auto& row : m)
        if (row.size() != r)
            throw ShapeError("det: matrix not square");
    if (r == 1)
        return m[0][0];
    T acc = zero;
    for (std::size_t c = 0; c < r; ++c) {
        std::vector<std::vector<T>> minor;
        for (std::size_t i = 1; i < r; ++i) {
            std::vector<T> row;
            for (std::size_t j = 0; j < r; ++j)
                if (j != c)
                    row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        T term = m[0][c] * det(minor, zero);
        acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// --- weighted degree / evaluation ----------------------------------------

template <ScalarField F>
std::optional<int> weighted_degree(const JetPolynomial<F>& q)
{
    return q.weighted_degree();
}

template <ScalarField F>
F evaluate(const JetPolynomial<F>& q, const LogJetCoords<F>& c)
{
    return evaluate_on_coords(q, c);
}

// --- equivariance (eq. invj) ----------------------------------------------

struct EquivarianceReport {
    int trials = 0;
    int failures = 0;
    double max_residual = 0.0;
    std::uint64_t seed = 0;
    std::string witness; // first failing germ/reparametrization, if any
};

// Q(j_k(f o phi)) = phi'(0)^m Q(j_k(f)) over exact random trials; failures
// are exact inequalities.
template <ScalarField F>
EquivarianceReport check_equivariance(const JetPolynomial<F>& q, int m, int trials,
                                      std::uint64_t seed, int k, int n, LogChart chart = LogChart())
{
    if (q.max_derivative_order() > k)
        throw ConfigError("check_equivariance: polynomial references order above k");
    if (chart.n != n)
        chart = LogChart(n, chart.l);
    EquivarianceReport rep;
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 g = SplitMix64::for_trial(seed, static_cast<std::uint64_t>(t));
        LogJetCoords<F> c = sample_coords<F>(g, chart, k);
        Reparam<F> phi = sample_reparam<F>(g, k);
        F lhs = evaluate_on_coords(q, coords_compose(c, phi));
        F scale = F::one();
        for (int p = 0; p < m; ++p)
            scale *= phi.deriv1();
        F rhs = scale * evaluate_on_coords(q, c);
        F res = lhs - rhs;
        if (!res.is_zero()) {
            ++rep.failures;
            rep.max_residual = std::max(rep.max_residual, res.abs_approx());
            if (rep.witness.empty()) {
                std::string w = "trial=" + std::to_string(t) + " phi=" + phi.jet().to_string() + " Z=[";
                for (int i = 1; i <= chart.n; ++i)
                    w += (i > 1 ? ";" : "") + c.row_jet(i).to_string();
                rep.witness = w + "]";
            }
        }
    }
    return rep;
}

// --- Wronskians -----------------------------------------------------------

// Numeric Wronskian: rows[i] = (d^1 g_i, ..., d^r g_i); determinant of the
// r x r matrix with entry (j, i) = d^j g_i.
template <ScalarField F>
F wronskian(const std::vector<std::vector<F>>& rows)
{
    const std::size_t r = rows.size();
    for (const auto& row : rows)
        if (row.size() != r)
            throw ShapeError("wronskian: need r sequences of r derivatives");
    std::vector<std::vector<F>> m(r, std::vector<F>(r, F::zero()));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i)
            m[j][i] = rows[i][j];
    return det(m, F::zero());
}

// Symbolic Wronskian in jet variables: det(Z^{coords[i]}_j), weighted degree
// r(r+1)/2.
template <ScalarField F>
JetPolynomial<F> wronskian_symbolic(const std::vector<int>& coords)
{
    const std::size_t r = coords.size();
    std::vector<std::vector<JetPolynomial<F>>> m;
    for (std::size_t j = 1; j <= r; ++j) {
        std::vector<JetPolynomial<F>> row;
        for (std::size_t i = 0; i < r; ++i)
            row.push_back(JetPolynomial<F>::jet_var(coords[i], static_cast<int>(j)));
        m.push_back(std::move(row));
    }
    return det(m, JetPolynomial<F>::zero());
}

// Exact ratio W(g o phi) / W(g); must equal phi'(0)^{r(r+1)/2}.
template <ScalarField F>
F wronskian_equivariance_check(const CurveJet<F>& g, const Reparam<F>& phi)
{
    if (!phi.is_regular())
        throw DomainError("wronskian_equivariance_check: phi must be regular");
    const int r = g.n();
    if (g.order() < r)
        throw ShapeError("wronskian_equivariance_check: jet order below row count");
    auto rows_of = [&](const CurveJet<F>& f) {
        std::vector<std::vector<F>> rows;
        for (int i = 1; i <= r; ++i) {
            std::vector<F> row;
            for (int j = 1; j <= r; ++j)
                row.push_back(f.coord(i)[j]);
            rows.push_back(std::move(row));
        }
        return rows;
    };
    F w = wronskian(rows_of(g));
    if (w.is_zero())
        throw DomainError("wronskian_equivariance_check: vanishing Wronskian, ratio undefined");
    return wronskian(rows_of(curve_compose(g, phi))) / w;
}

// --- the d-operator (Lemma on t^2 d(s/t)) ---------------------------------

// t ds - s dt: weight 2m+1 section from two weight-m sections.
template <ScalarField F>
JetPolynomial<F> d_operator(const JetPolynomial<F>& s, const JetPolynomial<F>& t,
                            int log_count = 0)
{
    if (t.is_zero())
        throw DomainError("d_operator: t must not be identically zero");
    auto ws = s.weighted_degree(), wt = t.weighted_degree();
    if (!ws || !wt)
        throw DomainError("d_operator: inputs must be weighted-homogeneous");
    if (!s.is_zero() && *ws != *wt)
        throw DomainError("d_operator: unequal weights " + std::to_string(*ws) + " vs " +
                          std::to_string(*wt));
    return t * total_derivative(s, log_count) - s * total_derivative(t, log_count);
}

// --- the theta sequence of the Main Lemma ---------------------------------

// Validates the displayed schedule constraints (2(k+l)-1) | n_l and
// n_l >= 2(n_{l-1}+1), then iterates
//   Theta_l = d(Theta_{l-1}/s0^{n_{l-1}}) s0^{n_l - 1}
//           = (s0 dTheta_{l-1} - n_{l-1} Theta_{l-1} ds0) s0^{n_l - n_{l-1} - 2}.
template <ScalarField F>
std::vector<JetPolynomial<F>> theta_sequence(const JetPolynomial<F>& theta0,
                                             const JetPolynomial<F>& s0,
                                             const std::vector<long>& schedule, int k,
                                             int log_count = 0)
{
    if (schedule.empty())
        throw ConfigError("theta_sequence: empty schedule");
    auto w0 = theta0.weighted_degree();
    if (!w0 || *w0 != schedule[0])
        throw ConfigError("theta_sequence: Theta_0 must have weight n_0");
    auto ws0 = s0.weighted_degree();
    if (!ws0 || *ws0 != 1)
        throw ConfigError("theta_sequence: s_0 must have weight 1");
    for (std::size_t l = 0; l < schedule.size(); ++l) {
        long mod = 2 * (k + static_cast<long>(l)) - 1;
        if (schedule[l] % mod != 0)
            throw ConfigError("theta_sequence: schedule violates (2(k+l)-1) | n_l at l = " +
                              std::to_string(l));
        if (l >= 1 && schedule[l] < 2 * (schedule[l - 1] + 1))
            throw ConfigError("theta_sequence: schedule violates n_l >= 2(n_{l-1}+1) at l = " +
                              std::to_string(l));
    }
    std::vector<JetPolynomial<F>> out{theta0};
    for (std::size_t l = 1; l < schedule.size(); ++l) {
        const JetPolynomial<F>& prev = out.back();
        long p = schedule[l - 1];
        JetPolynomial<F> num = s0 * total_derivative(prev, log_count) -
                               F::from_int(p) * (prev * total_derivative(s0, log_count));
        JetPolynomial<F> next = num;
        for (long q = 0; q < schedule[l] - p - 2; ++q)
            next = next * s0;
        out.push_back(std::move(next));
    }
    return out;
}

// Paper's example schedule n_l = 2^l (2(k+l)-1) m.
inline std::vector<long> example_schedule(int k, int m, int levels)
{
    std::vector<long> n;
    long p2 = 1;
    for (int l = 0; l <= levels; ++l) {
        n.push_back(p2 * (2 * (k + static_cast<long>(l)) - 1) * m);
        p2 *= 2;
    }
    return n;
}

// --- normalized derivative identity (t3n) ---------------------------------

// F_{(i)} = (numerator, s0-power), never expanded through division.
template <ScalarField F>
struct SectionQuotient {
    JetPolynomial<F> num;
    int s0_power = 0;
};

// One step F -> dF/s0 with s0 = Z^1_1:
// (N, p) -> (s0 dN - p N ds0, p + 2).
template <ScalarField F>
SectionQuotient<F> quotient_derivative(const SectionQuotient<F>& fq, int log_count = 0)
{
    JetPolynomial<F> s0 = JetPolynomial<F>::jet_var(1, 1);
    JetPolynomial<F> num = s0 * total_derivative(fq.num, log_count) -
                           F::from_int(fq.s0_power) * (fq.num * total_derivative(s0, log_count));
    return SectionQuotient<F>{std::move(num), fq.s0_power + 2};
}

// Evaluate a jet polynomial along a polynomial germ, producing the jet of
// t -> Q(j_k(f) recentred at t) at 0 up to order l. Exact.
template <ScalarField F>
Jet<F> evaluate_along_germ(const JetPolynomial<F>& q, const PolyGerm<F>& f, int l)
{
    const int kq = q.max_derivative_order();
    CurveJet<F> big = f.jet_at(F::zero(), kq + l);
    return q.template eval_generic<Jet<F>>(
        [&](Var v) -> Jet<F> {
            Jet<F> jv(l);
            if (v.kind() == Var::Base) {
                const Jet<F>& src = big.coord(v.i());
                for (int p = 0; p <= l; ++p)
                    jv[p] = src[p];
            } else {
                const Jet<F>& src = big.coord(v.i());
                for (int p = 0; p <= l; ++p)
                    jv[p] = src[v.j() + p];
            }
            return jv;
        },
        [&](const F& c) {
            Jet<F> jc(l);
            jc[0] = c;
            return jc;
        });
}

// Residuals of eq. (t3n) under the concrete normalization s_0 = Z^1_1,
// f_1(t) = t: d^i/dt^i (F o f_[k]) - F_{(i)} o f_[k+i] for i = 0..l.
template <ScalarField F>
std::vector<F> normalized_derivative_check(const JetPolynomial<F>& s, const PolyGerm<F>& f, int k,
                                           int l)
{
    auto wm = s.weighted_degree();
    if (!wm)
        throw ConfigError("normalized_derivative_check: numerator must be homogeneous");
    if (s.max_derivative_order() > k)
        throw ConfigError("normalized_derivative_check: numerator order exceeds k");
    // precondition: first coordinate is exactly t
    const auto& f1 = f.taylor.at(0);
    bool is_t = f1.size() >= 2 && f1[0].is_zero() && f1[1] == F::one();
    for (std::size_t m = 2; m < f1.size(); ++m)
        if (!f1[m].is_zero())
            is_t = false;
    if (!is_t)
        throw DomainError("normalized_derivative_check: normalization requires f_1(t) = t");

    // LHS: derivatives of the evaluated function of t (s0 o f identically 1).
    Jet<F> lhs = evaluate_along_germ(s, f, l);

    std::vector<F> residuals;
    SectionQuotient<F> fq{s, *wm};
    for (int i = 0; i <= l; ++i) {
        CurveJet<F> jet_ki = f.jet_at(F::zero(), k + i);
        LogJetCoords<F> coords = to_log_coords(jet_ki, LogChart(f.n(), 0));
        F rhs = evaluate_on_coords(fq.num, coords); // s0(f) = 1, so /s0^p is trivial
        residuals.push_back(lhs[i] - rhs);
        if (i < l)
            fq = quotient_derivative(fq);
    }
    return residuals;
}

// --- classical Wronskian dependence test ----------------------------------

template <ScalarField F>
struct DependenceResult {
    bool dependent = false;
    std::vector<F> coefficients;       // normalized, first nonzero = 1
    std::vector<int> witness_rows;     // derivative orders of a nonzero minor
    F witness_minor = F::zero();
    int wronskian_vanishing_order = 0; // valuation of the truncated Wronskian
};

// Lemma-of-the-Wronskian test on truncated series: if the Wronskian of the
// derivatives vanishes to the available order, produce constants c_i with
// sum c_i g_i' = 0; otherwise report a nonvanishing minor.
template <ScalarField F>
DependenceResult<F> wronskian_dependence(const std::vector<Jet<F>>& series)
{
    const int count = static_cast<int>(series.size());
    if (count == 0)
        throw ShapeError("wronskian_dependence: no series");
    const int order = series[0].order();
    for (const auto& s : series)
        if (s.order() != order)
            throw ShapeError("wronskian_dependence: mixed orders");
    if (order < count)
        throw ShapeError("wronskian_dependence: truncation order below series count");

    DependenceResult<F> res;

    // Truncated Wronskian of the derivatives as a jet of order order - count.
    const int wk = order - count;
    std::vector<std::vector<Jet<F>>> m;
    for (int j = 1; j <= count; ++j) {
        std::vector<Jet<F>> row;
        for (int i = 0; i < count; ++i) {
            Jet<F> e(wk);
            for (int p = 0; p <= wk; ++p)
                e[p] = series[static_cast<std::size_t>(i)][j + p];
            row.push_back(std::move(e));
        }
        m.push_back(std::move(row));
    }
    Jet<F> w = det(m, Jet<F>::zero(wk));
    int vo = 0;
    while (vo <= wk && w[vo].is_zero())
        ++vo;
    res.wronskian_vanishing_order = vo;

    // Dependence: kernel of M[j][i] = d^j g_i for j = 1..order.
    linalg::Mat<F> mat;
    for (int j = 1; j <= order; ++j) {
        std::vector<F> row;
        for (int i = 0; i < count; ++i)
            row.push_back(series[static_cast<std::size_t>(i)][j]);
        mat.push_back(std::move(row));
    }
    linalg::Mat<F> kernel = linalg::nullspace(mat);
    if (!kernel.empty()) {
        res.dependent = true;
        std::vector<F> c = kernel.front();
        F pivot = F::zero();
        for (const F& v : c)
            if (!v.is_zero()) {
                pivot = v;
                break;
            }
        for (F& v : c)
            v = v / pivot;
        res.coefficients = std::move(c);
        return res;
    }

    // Independent: lexicographically first row set with a nonzero minor via
    // greedy elimination over the rows of M.
    linalg::Mat<F> picked;
    for (int j = 1; j <= order && static_cast<int>(picked.size()) < count; ++j) {
        std::vector<F> row;
        for (int i = 0; i < count; ++i)
            row.push_back(series[static_cast<std::size_t>(i)][j]);
        linalg::Mat<F> trial = picked;
        trial.push_back(row);
        linalg::Mat<F> copy = trial;
        if (static_cast<int>(linalg::rref(copy).size()) == static_cast<int>(trial.size())) {
            picked = trial;
            res.witness_rows.push_back(j);
        }
    }
    if (static_cast<int>(picked.size()) == count)
        res.witness_minor = det(picked, F::zero());
    return res;
}

} // namespace logjet
