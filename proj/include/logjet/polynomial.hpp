#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/rational.hpp"

namespace logjet {

// A polynomial variable: either a base coordinate z_i (weight 0) or a jet
// coordinate Z^i_j (weight j, the derivative order).
struct Var {
    enum Kind : std::uint32_t { Base = 0, Z = 1 };

    std::uint32_t key;

    static Var base(int i) { return Var{encode(Base, i, 0)}; }
    static Var jet(int i, int j)
    {
        if (j < 1)
            throw ConfigError("Var::jet: derivative order must be >= 1");
        return Var{encode(Z, i, j)};
    }

    Kind kind() const { return static_cast<Kind>(key >> 20); }
    int i() const { return static_cast<int>((key >> 10) & 0x3ff); }
    int j() const { return static_cast<int>(key & 0x3ff); }
    int weight() const { return kind() == Z ? j() : 0; }

    std::string to_string() const
    {
        if (kind() == Base)
            return "z[" + std::to_string(i()) + "]";
        return "Z[" + std::to_string(i()) + "," + std::to_string(j()) + "]";
    }

    friend bool operator==(Var a, Var b) { return a.key == b.key; }
    friend bool operator<(Var a, Var b) { return a.key < b.key; }

  private:
    static std::uint32_t encode(Kind k, int i, int j)
    {
        if (i < 1 || i > 1023 || j < 0 || j > 1023)
            throw ConfigError("Var: index out of range");
        return (static_cast<std::uint32_t>(k) << 20) | (static_cast<std::uint32_t>(i) << 10) |
               static_cast<std::uint32_t>(j);
    }
};

// Sorted (variable, exponent) list, exponents >= 1.
using Monomial = std::vector<std::pair<std::uint32_t, int>>;

inline Monomial monomial_mul(const Monomial& a, const Monomial& b)
{
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first))
            r.push_back(a[p++]);
        else if (p == a.size() || b[q].first < a[p].first)
            r.push_back(b[q++]);
        else {
            r.emplace_back(a[p].first, a[p].second + b[q].second);
            ++p, ++q;
        }
    }
    return r;
}

inline int monomial_weight(const Monomial& m)
{
    int w = 0;
    for (const auto& [key, e] : m)
        w += Var{key}.weight() * e;
    return w;
}

// Sparse polynomial in the Z^i_j and z_i with scalar coefficients; carries a
// weighted degree through monomial_weight (Z^i_j counts with weight j).
template <ScalarField F>
class JetPolynomial {
  public:
    using Terms = std::map<Monomial, F>;

    JetPolynomial() = default;

    static JetPolynomial zero() { return {}; }
    static JetPolynomial constant(F c)
    {
        JetPolynomial p;
        if (!c.is_zero())
            p.terms_[Monomial{}] = std::move(c);
        return p;
    }
    static JetPolynomial variable(Var v)
    {
        JetPolynomial p;
        p.terms_[Monomial{{v.key, 1}}] = F::one();
        return p;
    }
    static JetPolynomial jet_var(int i, int j) { return variable(Var::jet(i, j)); }
    static JetPolynomial base_var(int i) { return variable(Var::base(i)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const F& c)
    {
        if (c.is_zero())
            return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    friend JetPolynomial operator+(const JetPolynomial& a, const JetPolynomial& b)
    {
        JetPolynomial r = a;
        for (const auto& [m, c] : b.terms_)
            r.add_term(m, c);
        return r;
    }
    friend JetPolynomial operator-(const JetPolynomial& a, const JetPolynomial& b)
    {
        JetPolynomial r = a;
        for (const auto& [m, c] : b.terms_)
            r.add_term(m, F::zero() - c);
        return r;
    }
    friend JetPolynomial operator-(const JetPolynomial& a)
    {
        return JetPolynomial::zero() - a;
    }
    friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b)
    {
        JetPolynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(monomial_mul(ma, mb), ca * cb);
        return r;
    }
    friend JetPolynomial operator*(const F& c, const JetPolynomial& a)
    {
        JetPolynomial r;
        for (const auto& [m, cm] : a.terms_)
            r.add_term(m, c * cm);
        return r;
    }

    JetPolynomial pow(int e) const
    {
        JetPolynomial r = constant(F::one());
        for (int m = 0; m < e; ++m)
            r = r * *this;
        return r;
    }

    friend bool operator==(const JetPolynomial& a, const JetPolynomial& b)
    {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const JetPolynomial& a, const JetPolynomial& b) { return !(a == b); }

    // The unique weighted degree, or nullopt if not weighted-homogeneous.
    // Zero polynomial is homogeneous of every weight; reported as 0.
    std::optional<int> weighted_degree() const
    {
        std::optional<int> w;
        for (const auto& [m, c] : terms_) {
            int mw = monomial_weight(m);
            if (!w)
                w = mw;
            else if (*w != mw)
                return std::nullopt;
        }
        return w ? w : std::optional<int>(0);
    }

    int max_derivative_order() const
    {
        int k = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [key, e] : m) {
                Var v{key};
                if (v.kind() == Var::Z && v.j() > k)
                    k = v.j();
            }
        return k;
    }

    // Evaluate with arbitrary target ring R. var_value: Var -> R,
    // lift: F -> R embeds coefficients.
    template <class R, class VarFn, class LiftFn>
    R eval_generic(VarFn&& var_value, LiftFn&& lift) const
    {
        std::optional<R> acc;
        for (const auto& [m, c] : terms_) {
            R term = lift(c);
            for (const auto& [key, e] : m) {
                R v = var_value(Var{key});
                for (int p = 0; p < e; ++p)
                    term = term * v;
            }
            acc = acc ? std::optional<R>(*acc + term) : std::optional<R>(term);
        }
        if (!acc)
            return lift(F::zero());
        return *acc;
    }

    // Scalar evaluation.
    template <class VarFn>
    F evaluate(VarFn&& var_value) const
    {
        return eval_generic<F>(std::forward<VarFn>(var_value), [](const F& c) { return c; });
    }

    // Substitute polynomials for variables.
    template <class VarFn>
    JetPolynomial substitute(VarFn&& var_poly) const
    {
        return eval_generic<JetPolynomial>(std::forward<VarFn>(var_poly),
                                           [](const F& c) { return JetPolynomial::constant(c); });
    }

  private:
    Terms terms_;
};

// Formal total derivative along the curve parameter: Z^i_j -> Z^i_{j+1};
// base variables follow the chart, d z_i = z_i Z^i_1 for the log_count
// leading (logarithmic) coordinates and d z_i = Z^i_1 for the rest.
template <ScalarField F>
JetPolynomial<F> total_derivative(const JetPolynomial<F>& p, int log_count = 0)
{
    JetPolynomial<F> r;
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t f = 0; f < m.size(); ++f) {
            Var v{m[f].first};
            int e = m[f].second;
            // d(v^e) = e v^{e-1} dv, times the remaining factors.
            Monomial rest;
            for (std::size_t g = 0; g < m.size(); ++g) {
                if (g == f) {
                    if (e > 1)
                        rest.emplace_back(m[g].first, e - 1);
                } else
                    rest.push_back(m[g]);
            }
            JetPolynomial<F> dv;
            if (v.kind() == Var::Z)
                dv = JetPolynomial<F>::jet_var(v.i(), v.j() + 1);
            else if (v.i() <= log_count)
                dv = JetPolynomial<F>::base_var(v.i()) * JetPolynomial<F>::jet_var(v.i(), 1);
            else
                dv = JetPolynomial<F>::jet_var(v.i(), 1);
            JetPolynomial<F> base;
            base.add_term(rest, c * F::from_int(e));
            r = r + base * dv;
        }
    }
    return r;
}

// --- canonical text form ------------------------------------------------
// Sorted monomials (the term map order), explicit exponents. Reparses to an
// equal polynomial through parse_expression.

inline std::string coeff_to_term_string(const GaussRational& c)
{
    if (c.is_real())
        return c.real().get_str();
    if (c.real() == 0) {
        // pure imaginary: "3/2i"
        return c.imag().get_str() + "i";
    }
    std::string s = c.real().get_str();
    if (c.imag() > 0)
        s += "+";
    s += c.imag().get_str() + "i";
    return "(" + s + ")";
}

inline std::string to_canonical_string(const JetPolynomial<GaussRational>& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        std::string term;
        std::string cs = coeff_to_term_string(c);
        bool coeff_is_one = (cs == "1") && !m.empty();
        bool coeff_is_minus_one = (cs == "-1") && !m.empty();
        if (coeff_is_minus_one)
            term = "-";
        else if (!coeff_is_one)
            term = cs;
        bool need_star = !coeff_is_one && !coeff_is_minus_one;
        for (const auto& [key, e] : m) {
            if (need_star)
                term += "*";
            term += Var{key}.to_string();
            if (e > 1)
                term += "^" + std::to_string(e);
            need_star = true;
        }
        if (first) {
            out = term;
            first = false;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

} // namespace logjet
