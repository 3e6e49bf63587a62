#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "logjet/errors.hpp"

namespace logjet {

// Arbitrary-precision real, round-to-nearest everywhere.
class BigFloat {
  public:
    static constexpr mpfr_prec_t kDefaultPrec = 256;

    explicit BigFloat(mpfr_prec_t prec = kDefaultPrec)
    {
        mpfr_init2(x_, prec);
        mpfr_set_zero(x_, 1);
    }
    BigFloat(double v, mpfr_prec_t prec) : BigFloat(prec) { mpfr_set_d(x_, v, MPFR_RNDN); }
    BigFloat(long v, mpfr_prec_t prec) : BigFloat(prec) { mpfr_set_si(x_, v, MPFR_RNDN); }
    BigFloat(const std::string& s, mpfr_prec_t prec) : BigFloat(prec)
    {
        if (mpfr_set_str(x_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw ConfigError("bad float literal: '" + s + "'");
    }
    BigFloat(const BigFloat& o) : BigFloat(o.prec()) { mpfr_set(x_, o.x_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept
    {
        mpfr_init2(x_, o.prec());
        mpfr_swap(x_, o.x_);
    }
    BigFloat& operator=(BigFloat o) noexcept
    {
        mpfr_swap(x_, o.x_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(x_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(x_); }
    int sign() const { return mpfr_sgn(x_); }

    static BigFloat pi(mpfr_prec_t prec)
    {
        BigFloat r(prec);
        mpfr_const_pi(r.x_, MPFR_RNDN);
        return r;
    }

#define LOGJET_BF_BINOP(op, fn)                                                                    \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b)                              \
    {                                                                                              \
        BigFloat r(std::max(a.prec(), b.prec()));                                                  \
        fn(r.x_, a.x_, b.x_, MPFR_RNDN);                                                           \
        return r;                                                                                  \
    }
    LOGJET_BF_BINOP(+, mpfr_add)
    LOGJET_BF_BINOP(-, mpfr_sub)
    LOGJET_BF_BINOP(*, mpfr_mul)
    LOGJET_BF_BINOP(/, mpfr_div)
#undef LOGJET_BF_BINOP

    friend BigFloat operator-(const BigFloat& a)
    {
        BigFloat r(a.prec());
        mpfr_neg(r.x_, a.x_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.x_, b.x_); }

#define LOGJET_BF_UNFN(name, fn)                                                                   \
    friend BigFloat name(const BigFloat& a)                                                        \
    {                                                                                              \
        BigFloat r(a.prec());                                                                      \
        fn(r.x_, a.x_, MPFR_RNDN);                                                                 \
        return r;                                                                                  \
    }
    LOGJET_BF_UNFN(exp, mpfr_exp)
    LOGJET_BF_UNFN(log, mpfr_log)
    LOGJET_BF_UNFN(sin, mpfr_sin)
    LOGJET_BF_UNFN(cos, mpfr_cos)
    LOGJET_BF_UNFN(sqrt, mpfr_sqrt)
    LOGJET_BF_UNFN(abs, mpfr_abs)
#undef LOGJET_BF_UNFN

    friend BigFloat atan2(const BigFloat& y, const BigFloat& x)
    {
        BigFloat r(std::max(y.prec(), x.prec()));
        mpfr_atan2(r.x_, y.x_, x.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat hypot(const BigFloat& a, const BigFloat& b)
    {
        BigFloat r(std::max(a.prec(), b.prec()));
        mpfr_hypot(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }

    std::string to_string(int digits = 20) const
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%%.%dRg", digits);
        char out[128];
        mpfr_snprintf(out, sizeof out, buf, x_);
        return out;
    }

  private:
    mpfr_t x_;
};

// Arbitrary-precision complex built on BigFloat pairs. The precision of every
// value is recorded so reported residual tolerances are meaningful.
class BigComplex {
  public:
    BigComplex() : re_(), im_() {}
    BigComplex(long n) : re_(n, BigFloat::kDefaultPrec), im_() {}
    BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
    BigComplex(double re, double im, mpfr_prec_t prec)
        : re_(re, prec), im_(im, prec) {}

    static BigComplex zero() { return BigComplex(); }
    static BigComplex one() { return BigComplex(1); }
    static BigComplex from_int(long n) { return BigComplex(n); }
    static BigComplex i(mpfr_prec_t prec = BigFloat::kDefaultPrec)
    {
        return BigComplex(BigFloat(0L, prec), BigFloat(1L, prec));
    }
    static BigComplex pi_i(mpfr_prec_t prec)
    {
        return BigComplex(BigFloat(0L, prec), BigFloat::pi(prec));
    }

    const BigFloat& real() const { return re_; }
    const BigFloat& imag() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b)
    {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b)
    {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend BigComplex operator-(const BigComplex& a) { return {-a.re_, -a.im_}; }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b)
    {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b)
    {
        if (b.is_zero())
            throw DomainError("BigComplex: division by zero");
        BigFloat n = b.re_ * b.re_ + b.im_ * b.im_;
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }

    BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
    BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
    BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }
    BigComplex& operator/=(const BigComplex& o) { return *this = *this / o; }

    friend bool operator==(const BigComplex& a, const BigComplex& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }

    friend BigFloat abs(const BigComplex& a) { return hypot(a.re_, a.im_); }
    double abs_approx() const { return abs(*this).to_double(); }

    friend BigComplex exp(const BigComplex& a)
    {
        BigFloat m = exp(a.re_);
        return {m * cos(a.im_), m * sin(a.im_)};
    }
    // Principal branch, Im in (-pi, pi].
    friend BigComplex log(const BigComplex& a)
    {
        if (a.is_zero())
            throw DomainError("BigComplex: log of zero");
        return {log(abs(a)), atan2(a.im_, a.re_)};
    }

    std::string to_string(int digits = 20) const
    {
        return re_.to_string(digits) + (im_.sign() < 0 ? "" : "+") + im_.to_string(digits) + "i";
    }

  private:
    BigFloat re_, im_;
};

} // namespace logjet
