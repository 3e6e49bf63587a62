#pragma once

#include <concepts>
#include <string>
#include <utility>
#include <vector>

#include "logjet/errors.hpp"

namespace logjet {

template <class F>
concept ScalarField = requires(const F a, const F b, long n) {
    { F::zero() } -> std::convertible_to<F>;
    { F::one() } -> std::convertible_to<F>;
    { F::from_int(n) } -> std::convertible_to<F>;
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { a / b } -> std::convertible_to<F>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
};

namespace series {

// Truncated power series utilities on Taylor-coefficient vectors, the
// workhorse behind every Jet operation. All vectors are dense, c[m] is the
// coefficient of t^m.

template <ScalarField F>
std::vector<F> mul(const std::vector<F>& a, const std::vector<F>& b, std::size_t len)
{
    std::vector<F> r(len, F::zero());
    for (std::size_t p = 0; p < a.size() && p < len; ++p) {
        if (a[p].is_zero())
            continue;
        for (std::size_t q = 0; q < b.size() && p + q < len; ++q)
            r[p + q] += a[p] * b[q];
    }
    return r;
}

template <ScalarField F>
std::vector<F> add(std::vector<F> a, const std::vector<F>& b)
{
    if (b.size() > a.size())
        a.resize(b.size(), F::zero());
    for (std::size_t m = 0; m < b.size(); ++m)
        a[m] += b[m];
    return a;
}

// a(b(t)) mod t^len, requires b[0] = 0. Horner in the outer variable.
template <ScalarField F>
std::vector<F> compose(const std::vector<F>& a, const std::vector<F>& b, std::size_t len)
{
    if (!b.empty() && !b[0].is_zero())
        throw DomainError("series::compose: inner series must vanish at 0");
    std::vector<F> r(len, F::zero());
    if (a.empty() || len == 0)
        return r;
    r[0] = a.back();
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        r = mul(r, b, len);
        r[0] += a[i];
    }
    return r;
}

// u/v mod t^len, requires v[0] != 0.
template <ScalarField F>
std::vector<F> div(const std::vector<F>& u, const std::vector<F>& v, std::size_t len)
{
    if (v.empty() || v[0].is_zero())
        throw DomainError("series::div: divisor has vanishing constant term");
    std::vector<F> w(len, F::zero());
    for (std::size_t m = 0; m < len; ++m) {
        F acc = m < u.size() ? u[m] : F::zero();
        for (std::size_t p = 0; p < m; ++p)
            if (p + 1 < v.size())
                acc -= w[p] * v[m - p];
        w[m] = acc / v[0];
    }
    return w;
}

template <ScalarField F>
std::vector<F> derivative(const std::vector<F>& a)
{
    if (a.size() <= 1)
        return {};
    std::vector<F> r(a.size() - 1, F::zero());
    for (std::size_t m = 1; m < a.size(); ++m)
        r[m - 1] = F::from_int(static_cast<long>(m)) * a[m];
    return r;
}

// exp(g) mod t^len, requires g[0] = 0. e[m] = (1/m) sum_j j g[j] e[m-j].
template <ScalarField F>
std::vector<F> exp(const std::vector<F>& g, std::size_t len)
{
    if (!g.empty() && !g[0].is_zero())
        throw DomainError("series::exp: constant term must vanish");
    std::vector<F> e(len, F::zero());
    if (len == 0)
        return e;
    e[0] = F::one();
    for (std::size_t m = 1; m < len; ++m) {
        F acc = F::zero();
        for (std::size_t j = 1; j <= m && j < g.size(); ++j)
            acc += F::from_int(static_cast<long>(j)) * g[j] * e[m - j];
        e[m] = acc / F::from_int(static_cast<long>(m));
    }
    return e;
}

// Compositional inverse of a with a[0] = 0, a[1] != 0, mod t^len.
template <ScalarField F>
std::vector<F> invert(const std::vector<F>& a, std::size_t len)
{
    if (a.size() < 2 || !a[0].is_zero() || a[1].is_zero())
        throw DomainError("series::invert: series not invertible (need a0 = 0, a1 != 0)");
    std::vector<F> b(len, F::zero());
    if (len <= 1)
        return b;
    b[1] = F::one() / a[1];
    for (std::size_t m = 2; m < len; ++m) {
        // With b[m] still zero, coeff_m(a o b) is the defect to cancel.
        std::vector<F> c = compose(a, b, m + 1);
        b[m] = -c[m] / a[1];
    }
    return b;
}

template <ScalarField F>
std::size_t valuation(const std::vector<F>& a)
{
    for (std::size_t m = 0; m < a.size(); ++m)
        if (!a[m].is_zero())
            return m;
    return a.size();
}

// u/v where v may vanish at 0: cancels the common power of t first. The
// quotient must be holomorphic (val u >= val v), else DomainError.
template <ScalarField F>
std::vector<F> div_cancel(const std::vector<F>& u, const std::vector<F>& v)
{
    std::size_t vv = valuation(v);
    if (vv == v.size())
        throw DomainError("series::div_cancel: division by zero series");
    if (valuation(u) < vv)
        throw DomainError("series::div_cancel: quotient has a pole");
    if (u.size() <= vv)
        return {};
    std::vector<F> us(u.begin() + static_cast<std::ptrdiff_t>(vv), u.end());
    std::vector<F> vs(v.begin() + static_cast<std::ptrdiff_t>(vv), v.end());
    return div(us, vs, us.size());
}

} // namespace series

// A k-jet of one scalar germ, stored in the derivative convention:
// entry j is d^j f / dt^j (0), never the Taylor coefficient. The conversion
// factor j! lives in taylor()/from_taylor() and nowhere else.
template <ScalarField F>
class Jet {
  public:
    Jet() : d_(1, F::zero()) {}
    explicit Jet(int order) : d_(static_cast<std::size_t>(order) + 1, F::zero())
    {
        if (order < 0)
            throw ShapeError("Jet: negative order");
    }
    explicit Jet(std::vector<F> derivs) : d_(std::move(derivs))
    {
        if (d_.empty())
            throw ShapeError("Jet: empty derivative vector");
    }

    static Jet zero(int order) { return Jet(order); }
    static Jet one(int order)
    {
        Jet j(order);
        j.d_[0] = F::one();
        return j;
    }
    // j-th derivative vector of t itself: (0, 1, 0, ..., 0).
    static Jet identity(int order)
    {
        Jet j(order);
        if (order >= 1)
            j.d_[1] = F::one();
        return j;
    }

    int order() const { return static_cast<int>(d_.size()) - 1; }
    const F& operator[](int j) const { return d_[static_cast<std::size_t>(j)]; }
    F& operator[](int j) { return d_[static_cast<std::size_t>(j)]; }
    const std::vector<F>& derivs() const { return d_; }

    bool is_zero() const
    {
        for (const F& c : d_)
            if (!c.is_zero())
                return false;
        return true;
    }

    friend bool operator==(const Jet& a, const Jet& b) { return a.d_ == b.d_; }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    Jet truncated(int m) const
    {
        if (m < 0 || m > order())
            throw ShapeError("Jet::truncated: bad order");
        return Jet(std::vector<F>(d_.begin(), d_.begin() + m + 1));
    }

    // Formal derivative: shift of the derivative vector, order drops by one.
    Jet derivative() const
    {
        if (order() < 1)
            throw ShapeError("Jet::derivative: order 0 jet");
        return Jet(std::vector<F>(d_.begin() + 1, d_.end()));
    }

    // Taylor coefficients f^{(j)}(0)/j!.
    std::vector<F> taylor() const
    {
        std::vector<F> t(d_.size());
        F fact = F::one();
        for (std::size_t j = 0; j < d_.size(); ++j) {
            if (j > 0)
                fact *= F::from_int(static_cast<long>(j));
            t[j] = d_[j] / fact;
        }
        return t;
    }
    static Jet from_taylor(const std::vector<F>& t, int order)
    {
        Jet j(order);
        F fact = F::one();
        for (int m = 0; m <= order; ++m) {
            if (m > 0)
                fact *= F::from_int(m);
            j.d_[static_cast<std::size_t>(m)] =
                (static_cast<std::size_t>(m) < t.size() ? t[static_cast<std::size_t>(m)] : F::zero()) * fact;
        }
        return j;
    }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t j = 0; j < d_.size(); ++j)
            s += (j ? "," : "") + d_[j].to_string();
        return s + ")";
    }

  private:
    std::vector<F> d_;
};

namespace detail {
template <ScalarField F>
void require_same_order(const Jet<F>& a, const Jet<F>& b, const char* who)
{
    if (a.order() != b.order())
        throw ShapeError(std::string(who) + ": order mismatch (" + std::to_string(a.order()) +
                         " vs " + std::to_string(b.order()) + ")");
}
} // namespace detail

template <ScalarField F>
Jet<F> operator+(const Jet<F>& a, const Jet<F>& b)
{
    detail::require_same_order(a, b, "jet add");
    Jet<F> r(a.order());
    for (int j = 0; j <= a.order(); ++j)
        r[j] = a[j] + b[j];
    return r;
}

template <ScalarField F>
Jet<F> operator-(const Jet<F>& a, const Jet<F>& b)
{
    detail::require_same_order(a, b, "jet sub");
    Jet<F> r(a.order());
    for (int j = 0; j <= a.order(); ++j)
        r[j] = a[j] - b[j];
    return r;
}

template <ScalarField F>
Jet<F> operator-(const Jet<F>& a)
{
    Jet<F> r(a.order());
    for (int j = 0; j <= a.order(); ++j)
        r[j] = F::zero() - a[j];
    return r;
}

template <ScalarField F>
Jet<F> operator*(const F& c, const Jet<F>& a)
{
    Jet<F> r(a.order());
    for (int j = 0; j <= a.order(); ++j)
        r[j] = c * a[j];
    return r;
}

// General Leibniz rule: d^j(ab) = sum_s C(j,s) d^s a d^{j-s} b.
template <ScalarField F>
Jet<F> operator*(const Jet<F>& a, const Jet<F>& b)
{
    detail::require_same_order(a, b, "jet mul");
    const int k = a.order();
    // Pascal row per order; exact in any field.
    std::vector<std::vector<F>> binom(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        binom[j].assign(static_cast<std::size_t>(j) + 1, F::one());
        for (int s = 1; s < j; ++s)
            binom[j][s] = binom[j - 1][s - 1] + binom[j - 1][s];
    }
    Jet<F> r(k);
    for (int j = 0; j <= k; ++j) {
        F acc = F::zero();
        for (int s = 0; s <= j; ++s)
            acc += binom[j][s] * a[s] * b[j - s];
        r[j] = acc;
    }
    return r;
}

template <ScalarField F>
Jet<F> jet_pow(const Jet<F>& a, int e)
{
    Jet<F> r = Jet<F>::one(a.order());
    for (int m = 0; m < e; ++m)
        r = r * a;
    return r;
}

// Reciprocal jet: f * jet_reciprocal(f) = one, needs f(0) != 0.
template <ScalarField F>
Jet<F> jet_reciprocal(const Jet<F>& f)
{
    if (f[0].is_zero())
        throw DomainError("jet_reciprocal: vanishing constant term");
    std::vector<F> one{F::one()};
    return Jet<F>::from_taylor(series::div(one, f.taylor(), static_cast<std::size_t>(f.order()) + 1),
                               f.order());
}

template <ScalarField F>
Jet<F> operator/(const Jet<F>& a, const Jet<F>& b)
{
    detail::require_same_order(a, b, "jet div");
    if (b[0].is_zero())
        throw DomainError("jet div: divisor has vanishing constant term");
    return Jet<F>::from_taylor(series::div(a.taylor(), b.taylor(), static_cast<std::size_t>(a.order()) + 1),
                               a.order());
}

// Reparametrization phi(t) = sum a_i t^i with phi(0) = 0; member of G_k iff
// regular (a_1 != 0), of G_k^o iff additionally phi'(0) = 1.
template <ScalarField F>
class Reparam {
  public:
    explicit Reparam(Jet<F> inner) : j_(std::move(inner))
    {
        if (!j_[0].is_zero())
            throw DomainError("Reparam: constant term must be exactly zero");
    }
    explicit Reparam(std::vector<F> derivs) : Reparam(Jet<F>(std::move(derivs))) {}

    static Reparam identity(int order) { return Reparam(Jet<F>::identity(order)); }
    // phi(t) = c t.
    static Reparam scaling(int order, const F& c)
    {
        Jet<F> j(order);
        if (order >= 1)
            j[1] = c;
        return Reparam(j);
    }

    const Jet<F>& jet() const { return j_; }
    int order() const { return j_.order(); }
    const F& deriv1() const { return j_[1]; }
    bool is_regular() const { return !j_[1].is_zero(); }
    bool in_unipotent_part() const { return j_[1] == F::one(); } // G_k^o

    friend bool operator==(const Reparam& a, const Reparam& b) { return a.j_ == b.j_; }

  private:
    Jet<F> j_;
};

// Derivative vector of g o phi via truncated series composition; the
// Faa di Bruno coefficients are implicit in the exact Taylor algebra.
template <ScalarField F>
Jet<F> jet_compose(const Jet<F>& g, const Reparam<F>& phi)
{
    detail::require_same_order(g, phi.jet(), "jet_compose");
    const std::size_t len = static_cast<std::size_t>(g.order()) + 1;
    return Jet<F>::from_taylor(series::compose(g.taylor(), phi.jet().taylor(), len), g.order());
}

// Group operation (phi o psi), so that acting by precomposition satisfies
// jet_compose(jet_compose(g, phi), psi) = jet_compose(g, compose(phi, psi)).
template <ScalarField F>
Reparam<F> reparam_compose(const Reparam<F>& phi, const Reparam<F>& psi)
{
    return Reparam<F>(jet_compose(phi.jet(), psi));
}

template <ScalarField F>
Reparam<F> reparam_invert(const Reparam<F>& phi)
{
    if (!phi.is_regular())
        throw DomainError("reparam_invert: non-regular reparametrization (phi'(0) = 0)");
    const std::size_t len = static_cast<std::size_t>(phi.order()) + 1;
    return Reparam<F>(Jet<F>::from_taylor(series::invert(phi.jet().taylor(), len), phi.order()));
}

// (d^1 log f, ..., d^k log f); the constant term log f(0) has no home in an
// exact field and is deliberately not represented.
template <ScalarField F>
std::vector<F> jet_log(const Jet<F>& f)
{
    if (f[0].is_zero())
        throw DomainError("jet_log: vanishing constant term (logarithmic pole)");
    const int k = f.order();
    std::vector<F> ft = f.taylor();
    // (log f)' = f'/f; Taylor coeff m of it is d^{m+1} log f / m!.
    std::vector<F> q = series::div(series::derivative(ft), ft, static_cast<std::size_t>(k));
    std::vector<F> out(static_cast<std::size_t>(k));
    F fact = F::one();
    for (int j = 1; j <= k; ++j) {
        if (j > 1)
            fact *= F::from_int(j - 1);
        out[static_cast<std::size_t>(j - 1)] = fact * q[static_cast<std::size_t>(j - 1)];
    }
    return out;
}

// exp of a jet with vanishing constant term; jet_exp(zero) = one.
template <ScalarField F>
Jet<F> jet_exp(const Jet<F>& g)
{
    if (!g[0].is_zero())
        throw DomainError("jet_exp: constant term must vanish");
    const std::size_t len = static_cast<std::size_t>(g.order()) + 1;
    return Jet<F>::from_taylor(series::exp(g.taylor(), len), g.order());
}

// Rebuild f from its log-derivative vector and constant value:
// jet_from_log(jet_log(f), f(0)) = f exactly.
template <ScalarField F>
Jet<F> jet_from_log(const std::vector<F>& log_derivs, const F& value)
{
    const int k = static_cast<int>(log_derivs.size());
    Jet<F> g(k);
    for (int j = 1; j <= k; ++j)
        g[j] = log_derivs[static_cast<std::size_t>(j - 1)];
    return value * jet_exp(g);
}

// An n-tuple of jets of one germ (C,0) -> C^n, all sharing one order.
template <ScalarField F>
struct CurveJet {
    std::vector<Jet<F>> coords;

    CurveJet() = default;
    explicit CurveJet(std::vector<Jet<F>> c) : coords(std::move(c))
    {
        for (const auto& j : coords)
            if (j.order() != coords.front().order())
                throw ShapeError("CurveJet: member jets must share one order");
    }

    int n() const { return static_cast<int>(coords.size()); }
    int order() const { return coords.empty() ? 0 : coords.front().order(); }
    const Jet<F>& coord(int i) const { return coords[static_cast<std::size_t>(i - 1)]; } // 1-based

    friend bool operator==(const CurveJet& a, const CurveJet& b) { return a.coords == b.coords; }
};

template <ScalarField F>
CurveJet<F> curve_compose(const CurveJet<F>& f, const Reparam<F>& phi)
{
    std::vector<Jet<F>> out;
    out.reserve(f.coords.size());
    for (const auto& j : f.coords)
        out.push_back(jet_compose(j, phi));
    return CurveJet<F>(std::move(out));
}

// A germ with polynomial coordinates, exact at every parameter value.
template <ScalarField F>
struct PolyGerm {
    // taylor[i][m] = coefficient of t^m in coordinate i+1.
    std::vector<std::vector<F>> taylor;

    int n() const { return static_cast<int>(taylor.size()); }

    F eval(int i, const F& t) const
    {
        const auto& c = taylor[static_cast<std::size_t>(i - 1)];
        F acc = F::zero();
        for (std::size_t m = c.size(); m-- > 0;)
            acc = acc * t + c[m];
        return acc;
    }

    // Exact k-jet of the germ recentred at parameter t0.
    CurveJet<F> jet_at(const F& t0, int k) const
    {
        std::vector<Jet<F>> out;
        out.reserve(taylor.size());
        for (const auto& c : taylor) {
            Jet<F> j(k);
            // d^j at t0 of sum c_m t^m = sum_{m>=j} c_m m!/(m-j)! t0^{m-j}
            for (int d = 0; d <= k; ++d) {
                F acc = F::zero();
                F tp = F::one();
                for (std::size_t m = static_cast<std::size_t>(d); m < c.size(); ++m) {
                    F fall = F::one();
                    for (std::size_t q = 0; q < static_cast<std::size_t>(d); ++q)
                        fall *= F::from_int(static_cast<long>(m - q));
                    acc += c[m] * fall * tp;
                    tp = tp * t0;
                }
                j[d] = acc;
            }
            out.push_back(std::move(j));
        }
        return CurveJet<F>(std::move(out));
    }
};

} // namespace logjet
