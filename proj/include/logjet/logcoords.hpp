#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/polynomial.hpp"

namespace logjet {

// Normal-crossing chart: coordinates 1..l are logarithmic (frame dz_i/z_i),
// coordinates l+1..n are plain (frame dz_i).
struct LogChart {
    int n = 1;
    int l = 0;

    LogChart() = default;
    LogChart(int n_, int l_) : n(n_), l(l_)
    {
        if (n < 1 || l < 0 || l > n)
            throw ConfigError("LogChart: need 0 <= l <= n");
    }
    bool is_log(int i) const { return i <= l; }
};

// The trivialization data of a k-jet in a log chart: Z^i_j is d^j log f_i for
// logarithmic coordinates and d^j f_i for plain ones, plus the base point.
template <ScalarField F>
struct LogJetCoords {
    LogChart chart;
    int k = 0;
    std::vector<std::vector<F>> Z; // Z[i-1][j-1] = Z^i_j
    std::vector<F> base;           // base[i-1] = z_i(x)

    LogJetCoords() = default;
    LogJetCoords(LogChart c, int order)
        : chart(c), k(order),
          Z(static_cast<std::size_t>(c.n), std::vector<F>(static_cast<std::size_t>(order), F::zero())),
          base(static_cast<std::size_t>(c.n), F::zero())
    {
    }

    const F& z(int i, int j) const { return Z[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
    F& z(int i, int j) { return Z[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }
    const F& base_at(int i) const { return base[static_cast<std::size_t>(i - 1)]; }

    // Row i as a jet with zero constant term (the constant never enters
    // composition of derivative data).
    Jet<F> row_jet(int i) const
    {
        Jet<F> j(k);
        for (int m = 1; m <= k; ++m)
            j[m] = z(i, m);
        return j;
    }
    void set_row(int i, const Jet<F>& jet)
    {
        for (int m = 1; m <= k; ++m)
            z(i, m) = jet[m];
    }

    friend bool operator==(const LogJetCoords& a, const LogJetCoords& b)
    {
        return a.chart.n == b.chart.n && a.chart.l == b.chart.l && a.k == b.k && a.Z == b.Z &&
               a.base == b.base;
    }
};

// Precomposition with a reparametrization acts row by row; log rows compose
// exactly like plain ones since log(f o phi) = (log f) o phi.
template <ScalarField F>
LogJetCoords<F> coords_compose(const LogJetCoords<F>& c, const Reparam<F>& phi)
{
    if (phi.order() != c.k)
        throw ShapeError("coords_compose: order mismatch");
    LogJetCoords<F> out = c;
    for (int i = 1; i <= c.chart.n; ++i)
        out.set_row(i, jet_compose(c.row_jet(i), phi));
    return out;
}

// The universal change-of-frame polynomials g_j(Z_1,...,Z_{j-1}):
// d^j f = f * (Z_j + g_j) when Z_m = d^m log f. Constant integer
// coefficients, no constant term, g_1 = 0. Cached per order; first access
// may race, hence the lock.
template <ScalarField F>
const std::vector<JetPolynomial<F>>& g_polynomials(int k)
{
    static std::mutex mu;
    static std::map<int, std::vector<JetPolynomial<F>>> cache;
    if (k < 1)
        throw ConfigError("g_polynomials: k >= 1 required");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end())
        return it->second;
    // bell_j = Z_j + g_j via bell_{j+1} = (d/dt + Z_1) bell_j with the shift
    // Z_m -> Z_{m+1}.
    std::vector<JetPolynomial<F>> bell, g;
    bell.push_back(JetPolynomial<F>::jet_var(1, 1));
    g.push_back(JetPolynomial<F>::zero());
    for (int j = 2; j <= k; ++j) {
        JetPolynomial<F> next =
            total_derivative(bell.back(), 0) + JetPolynomial<F>::jet_var(1, 1) * bell.back();
        g.push_back(next - JetPolynomial<F>::jet_var(1, j));
        bell.push_back(std::move(next));
    }
    return cache.emplace(k, std::move(g)).first->second;
}

// g_j evaluated on one coordinate row (values Z_1..Z_{j-1} at least).
template <ScalarField F>
F g_eval(const JetPolynomial<F>& gj, const std::vector<F>& row)
{
    return gj.evaluate([&](Var v) -> F {
        if (v.kind() != Var::Z || v.i() != 1)
            throw ConfigError("g_eval: unexpected variable " + v.to_string());
        return row[static_cast<std::size_t>(v.j() - 1)];
    });
}

// Trivialize the k-jet of a germ by the log frame. The germ must miss the
// divisor: f_i(0) != 0 for every logarithmic coordinate.
template <ScalarField F>
LogJetCoords<F> to_log_coords(const CurveJet<F>& f, const LogChart& chart)
{
    if (f.n() != chart.n)
        throw ShapeError("to_log_coords: germ has " + std::to_string(f.n()) +
                         " coordinates, chart wants " + std::to_string(chart.n));
    LogJetCoords<F> out(chart, f.order());
    for (int i = 1; i <= chart.n; ++i) {
        const Jet<F>& ji = f.coord(i);
        out.base[static_cast<std::size_t>(i - 1)] = ji[0];
        if (chart.is_log(i)) {
            if (ji[0].is_zero())
                throw DomainError("to_log_coords: germ touches the divisor in coordinate z_" +
                                  std::to_string(i));
            std::vector<F> ld = jet_log(ji);
            for (int m = 1; m <= out.k; ++m)
                out.z(i, m) = ld[static_cast<std::size_t>(m - 1)];
        } else {
            for (int m = 1; m <= out.k; ++m)
                out.z(i, m) = ji[m];
        }
    }
    return out;
}

// Forward frame change (t7): Zhat^i_j = z_i (Z^i_j + g_j(Z^i_1,...)) for
// logarithmic i, identity otherwise. Returns plain derivative vectors with
// the base point as constant terms.
template <ScalarField F>
CurveJet<F> hat_from_log(const LogJetCoords<F>& c)
{
    const auto& g = g_polynomials<F>(c.k >= 1 ? c.k : 1);
    std::vector<Jet<F>> coords;
    coords.reserve(static_cast<std::size_t>(c.chart.n));
    for (int i = 1; i <= c.chart.n; ++i) {
        Jet<F> ji(c.k);
        const F& zi = c.base_at(i);
        ji[0] = zi;
        const auto& row = c.Z[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= c.k; ++j) {
            if (c.chart.is_log(i)) {
                if (zi.is_zero())
                    throw DomainError("hat_from_log: zero base value in log coordinate z_" +
                                      std::to_string(i));
                ji[j] = zi * (c.z(i, j) + g_eval(g[static_cast<std::size_t>(j - 1)], row));
            } else {
                ji[j] = c.z(i, j);
            }
        }
        coords.push_back(std::move(ji));
    }
    return CurveJet<F>(std::move(coords));
}

// Backward frame change by triangular inversion of (t7); independent of the
// jet_log route used by to_log_coords and must agree with it.
template <ScalarField F>
LogJetCoords<F> log_from_hat(const CurveJet<F>& f, const LogChart& chart)
{
    if (f.n() != chart.n)
        throw ShapeError("log_from_hat: coordinate count mismatch");
    const int k = f.order();
    const auto& g = g_polynomials<F>(k >= 1 ? k : 1);
    LogJetCoords<F> out(chart, k);
    for (int i = 1; i <= chart.n; ++i) {
        const Jet<F>& ji = f.coord(i);
        out.base[static_cast<std::size_t>(i - 1)] = ji[0];
        if (!chart.is_log(i)) {
            for (int m = 1; m <= k; ++m)
                out.z(i, m) = ji[m];
            continue;
        }
        if (ji[0].is_zero())
            throw DomainError("log_from_hat: zero base value in log coordinate z_" +
                              std::to_string(i));
        auto& row = out.Z[static_cast<std::size_t>(i - 1)];
        for (int j = 1; j <= k; ++j)
            row[static_cast<std::size_t>(j - 1)] =
                ji[j] / ji[0] - g_eval(g[static_cast<std::size_t>(j - 1)], row);
    }
    return out;
}

// Polynomial evaluation on a trivialized jet: base variables read the base
// point, Z variables read the coordinate array.
template <ScalarField F>
F evaluate_on_coords(const JetPolynomial<F>& p, const LogJetCoords<F>& c)
{
    return p.evaluate([&](Var v) -> F {
        if (v.kind() == Var::Base)
            return c.base_at(v.i());
        if (v.j() > c.k)
            throw ShapeError("evaluate_on_coords: polynomial order exceeds jet order");
        return c.z(v.i(), v.j());
    });
}

// (d^1 log theta, ..., d^k log theta) along a germ, given the jet of
// theta o f. Prop 1.1(c)'s computational content: off the divisor this is
// plain jet_log; on the divisor the caller must pass through log coordinates.
template <ScalarField F>
std::vector<F> dlog_theta_jet(const Jet<F>& theta_along_f)
{
    return jet_log(theta_along_f);
}

// d^j log of a monomial theta = prod z_i^{e_i} along a jet in log
// coordinates: sum of e_i * Z^i_j over logarithmic i; plain coordinates
// contribute their own jet_log (and need a nonzero value there).
template <ScalarField F>
std::vector<F> dlog_monomial(const LogJetCoords<F>& c, const std::vector<int>& exponents)
{
    if (static_cast<int>(exponents.size()) != c.chart.n)
        throw ShapeError("dlog_monomial: exponent count mismatch");
    std::vector<F> out(static_cast<std::size_t>(c.k), F::zero());
    for (int i = 1; i <= c.chart.n; ++i) {
        int e = exponents[static_cast<std::size_t>(i - 1)];
        if (e == 0)
            continue;
        std::vector<F> contrib;
        if (c.chart.is_log(i)) {
            contrib = c.Z[static_cast<std::size_t>(i - 1)];
        } else {
            Jet<F> ji(c.k);
            ji[0] = c.base_at(i);
            for (int m = 1; m <= c.k; ++m)
                ji[m] = c.z(i, m);
            contrib = jet_log(ji);
        }
        for (int m = 0; m < c.k; ++m)
            out[static_cast<std::size_t>(m)] += F::from_int(e) * contrib[static_cast<std::size_t>(m)];
    }
    return out;
}

// The distinguished base point P = (1,...,1,0,...,0) with l ones.
template <ScalarField F>
std::vector<F> distinguished_point(const LogChart& chart)
{
    std::vector<F> p(static_cast<std::size_t>(chart.n), F::zero());
    for (int i = 1; i <= chart.l; ++i)
        p[static_cast<std::size_t>(i - 1)] = F::one();
    return p;
}

// The G-shift trivialization of Prop 3.2(a): in log coordinates the shift is
// trivial on the Z-array, only the base point moves to P.
template <ScalarField F>
LogJetCoords<F> shift_trivialization(const LogJetCoords<F>& c)
{
    LogJetCoords<F> out = c;
    out.base = distinguished_point<F>(c.chart);
    return out;
}

} // namespace logjet
