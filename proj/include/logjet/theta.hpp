#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "logjet/bigcomplex.hpp"
#include "logjet/errors.hpp"
#include "logjet/jet.hpp"
#include "logjet/jetdiff.hpp"

namespace logjet {

// Lattice element gamma = p + q tau of the genus-1 lattice Z + Z tau.
struct LatticeVector {
    long p = 0;
    long q = 0;
};

// theta(z) = sum_{|n| <= N} exp(pi i n^2 tau + 2 pi i n z), Im tau > 0.
// Truncation and working precision are fixed at construction; the tail bound
// exp(-pi Im(tau) N^2) is recorded as a log10 magnitude.
class ThetaSeries {
  public:
    ThetaSeries(BigComplex tau, long trunc_n, mpfr_prec_t prec)
        : tau_(std::move(tau)), n_(trunc_n), prec_(prec)
    {
        if (!(BigFloat(0L, prec) < tau_.imag()))
            throw ConfigError("ThetaSeries: Im(tau) must be positive");
        double im = tau_.imag().to_double();
        tail_log10_ = -M_PI * im * static_cast<double>(n_) * static_cast<double>(n_) / std::log(10.0);
    }

    const BigComplex& tau() const { return tau_; }
    long trunc() const { return n_; }
    mpfr_prec_t prec() const { return prec_; }
    double tail_log10() const { return tail_log10_; }

    void require_tail_below(double tol) const
    {
        if (tail_log10_ > std::log10(tol))
            throw PrecisionError("ThetaSeries: truncation tail above tolerance");
    }

    BigComplex eval(const BigComplex& z) const
    {
        BigComplex acc = BigComplex(0.0, 0.0, prec_);
        BigComplex pii = BigComplex::pi_i(prec_);
        BigComplex two = BigComplex(2.0, 0.0, prec_);
        for (long n = -n_; n <= n_; ++n) {
            BigComplex nn = BigComplex(static_cast<double>(n), 0.0, prec_);
            acc += exp(pii * (nn * nn * tau_ + two * nn * z));
        }
        return acc;
    }

    // Derivative vector of theta o f for a jet f of the cover coordinate.
    Jet<BigComplex> jet_along(const Jet<BigComplex>& f) const
    {
        const int k = f.order();
        Jet<BigComplex> acc(k);
        BigComplex pii = BigComplex::pi_i(prec_);
        BigComplex two = BigComplex(2.0, 0.0, prec_);
        for (long n = -n_; n <= n_; ++n) {
            BigComplex nn = BigComplex(static_cast<double>(n), 0.0, prec_);
            // exponent jet g = pi i n^2 tau + 2 pi i n f
            Jet<BigComplex> g = (pii * two * nn) * f;
            g[0] += pii * nn * nn * tau_;
            // exp(g) = exp(g(0)) * exp(g - g(0))
            BigComplex c0 = g[0];
            g[0] = BigComplex::zero();
            acc = acc + exp(c0) * jet_exp(g);
        }
        return acc;
    }

    // (d^1 log theta(f), ..., d^k log theta(f)).
    std::vector<BigComplex> dlog_along(const Jet<BigComplex>& f, double divisor_tol = 1e-3) const
    {
        Jet<BigComplex> tj = jet_along(f);
        if (tj[0].abs_approx() <= divisor_tol)
            throw DomainError("ThetaSeries: germ too close to the theta divisor");
        return jet_log(tj);
    }

    BigComplex lattice_point(const LatticeVector& g) const
    {
        return BigComplex(static_cast<double>(g.p), 0.0, prec_) +
               BigComplex(static_cast<double>(g.q), 0.0, prec_) * tau_;
    }

    // Closed-form multiplier for gamma = p + q tau:
    // L_gamma(z) = -2 pi i q z - pi i q^2 tau.
    BigComplex multiplier_alpha(const LatticeVector& g) const
    {
        BigComplex pii = BigComplex::pi_i(prec_);
        return -(pii + pii) * BigComplex(static_cast<double>(g.q), 0.0, prec_);
    }
    BigComplex multiplier_beta(const LatticeVector& g) const
    {
        BigComplex pii = BigComplex::pi_i(prec_);
        return -pii * BigComplex(static_cast<double>(g.q * g.q), 0.0, prec_) * tau_;
    }

  private:
    BigComplex tau_;
    long n_;
    mpfr_prec_t prec_;
    double tail_log10_;
};

// Affine multiplier fitted from samples of theta(z+gamma)/theta(z).
struct QuasiPeriodicityFit {
    BigComplex alpha, beta;
    double max_residual = 0.0;
};

// Fit L from the first two samples by principal logarithms, verify
// exp(alpha z + beta) against the ratio on the rest. Samples should stay in
// a small disc around 0 so the principal branch is the right one.
inline QuasiPeriodicityFit quasi_periodicity_check(const ThetaSeries& th, const LatticeVector& g,
                                                   const std::vector<BigComplex>& samples,
                                                   double divisor_tol = 1e-3)
{
    if (samples.size() < 2)
        throw ConfigError("quasi_periodicity_check: need at least two samples");
    BigComplex gz = th.lattice_point(g);
    std::vector<BigComplex> ratio;
    for (const auto& z : samples) {
        BigComplex a = th.eval(z), b = th.eval(z + gz);
        if (a.abs_approx() <= divisor_tol || b.abs_approx() <= divisor_tol)
            throw DomainError("quasi_periodicity_check: sample on the theta divisor, resample");
        ratio.push_back(b / a);
    }
    QuasiPeriodicityFit fit;
    if (g.p == 0 && g.q == 0) {
        fit.alpha = BigComplex::zero();
        fit.beta = BigComplex::zero();
    } else {
        BigComplex l0 = log(ratio[0]), l1 = log(ratio[1]);
        fit.alpha = (l0 - l1) / (samples[0] - samples[1]);
        fit.beta = l0 - fit.alpha * samples[0];
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
        BigComplex predicted = exp(fit.alpha * samples[s] + fit.beta);
        fit.max_residual = std::max(fit.max_residual, (predicted - ratio[s]).abs_approx());
    }
    return fit;
}

// The Wronskian jet differential of the semi-abelian model: determinant with
// rows (d^j log theta(f), d^j f_1, ..., d^j f_{n'}), j = 1..n'+1, evaluated
// on a jet of the cover curve. laurent_exps, when nonempty, model the
// (C*)^s factor: coordinates n'+1..n'+s contribute exponents of a Laurent
// monomial to log theta.
struct ThetaWronskian {
    BigComplex value;
    int degree; // (n'+1)(n'+2)/2
};

inline ThetaWronskian wronskian_theta(const ThetaSeries& th, const CurveJet<BigComplex>& f,
                                      int nprime, const std::vector<long>& laurent_exps = {},
                                      double divisor_tol = 1e-3)
{
    const int k = nprime + 1;
    if (f.order() < k)
        throw ShapeError("wronskian_theta: jet order must be at least n'+1");
    if (f.n() < nprime + static_cast<int>(laurent_exps.size()))
        throw ShapeError("wronskian_theta: not enough coordinates");
    std::vector<BigComplex> dlog = th.dlog_along(f.coord(1).truncated(k), divisor_tol);
    for (std::size_t s = 0; s < laurent_exps.size(); ++s) {
        std::vector<BigComplex> extra =
            jet_log(f.coord(nprime + 1 + static_cast<int>(s)).truncated(k));
        for (int j = 0; j < k; ++j)
            dlog[static_cast<std::size_t>(j)] +=
                BigComplex::from_int(laurent_exps[s]) * extra[static_cast<std::size_t>(j)];
    }
    std::vector<std::vector<BigComplex>> m;
    for (int j = 1; j <= k; ++j) {
        std::vector<BigComplex> row;
        row.push_back(dlog[static_cast<std::size_t>(j - 1)]);
        for (int i = 1; i <= nprime; ++i)
            row.push_back(f.coord(i)[j]);
        m.push_back(std::move(row));
    }
    return ThetaWronskian{det(m, BigComplex::zero()), k * (k + 1) / 2};
}

// Lemma 5.8(b) numerically: Theta(f + gamma) = Theta(f), and the shift of the
// first column is the alpha-multiple of the dz_1 column.
struct TranslationInvarianceReport {
    double wronskian_residual = 0.0;
    double column_residual = 0.0;
};

inline TranslationInvarianceReport translation_invariance_check(const ThetaSeries& th,
                                                                const CurveJet<BigComplex>& f,
                                                                int nprime, const LatticeVector& g,
                                                                double divisor_tol = 1e-3)
{
    CurveJet<BigComplex> shifted = f;
    shifted.coords[0][0] += th.lattice_point(g);

    ThetaWronskian a = wronskian_theta(th, f, nprime, {}, divisor_tol);
    ThetaWronskian b = wronskian_theta(th, shifted, nprime, {}, divisor_tol);
    TranslationInvarianceReport rep;
    rep.wronskian_residual = (b.value - a.value).abs_approx();

    const int k = nprime + 1;
    std::vector<BigComplex> d0 = th.dlog_along(f.coord(1).truncated(k), divisor_tol);
    std::vector<BigComplex> d1 = th.dlog_along(shifted.coord(1).truncated(k), divisor_tol);
    BigComplex alpha = th.multiplier_alpha(g);
    for (int j = 1; j <= k; ++j) {
        BigComplex delta = d1[static_cast<std::size_t>(j - 1)] - d0[static_cast<std::size_t>(j - 1)];
        BigComplex expect = alpha * f.coord(1)[j];
        rep.column_residual = std::max(rep.column_residual, (delta - expect).abs_approx());
    }
    return rep;
}

} // namespace logjet
