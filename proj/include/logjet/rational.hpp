#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "logjet/errors.hpp"

namespace logjet {

// Exact Gaussian rational: re + im*i with arbitrary-precision rational parts.
// The default field for every identity check; arithmetic never rounds.
class GaussRational {
  public:
    GaussRational() : re_(0), im_(0) {}
    GaussRational(long n) : re_(n), im_(0) {}
    GaussRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussRational zero() { return GaussRational(); }
    static GaussRational one() { return GaussRational(1); }
    static GaussRational i() { return GaussRational(mpq_class(0), mpq_class(1)); }
    static GaussRational from_int(long n) { return GaussRational(n); }
    static GaussRational from_ratio(long p, long q) { return GaussRational(mpq_class(p, q)); }

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b)
    {
        return GaussRational(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b)
    {
        return GaussRational(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend GaussRational operator-(const GaussRational& a)
    {
        return GaussRational(-a.re_, -a.im_);
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b)
    {
        return GaussRational(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b)
    {
        if (b.is_zero())
            throw DomainError("GaussRational: division by zero");
        mpq_class n = b.re_ * b.re_ + b.im_ * b.im_;
        return GaussRational((a.re_ * b.re_ + a.im_ * b.im_) / n,
                             (a.im_ * b.re_ - a.re_ * b.im_) / n);
    }

    GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
    GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
    GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }
    GaussRational& operator/=(const GaussRational& o) { return *this = *this / o; }

    friend bool operator==(const GaussRational& a, const GaussRational& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    // |re| + |im|, as a double. Only used for ranking residuals in reports;
    // exact comparisons always go through operator== / is_zero.
    double abs_approx() const
    {
        return std::abs(re_.get_d()) + std::abs(im_.get_d());
    }

    // Norm re^2 + im^2 as an exact rational.
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    // "p/q", "p", "p/q+r/si", "-ri", ... Reparsed by parse().
    std::string to_string() const
    {
        if (im_ == 0)
            return re_.get_str();
        std::string s;
        if (re_ != 0)
            s += re_.get_str() + (im_ > 0 ? "+" : "");
        s += im_.get_str() + "i";
        return s;
    }

    // Accepts integer, "p/q", finite decimals, and a+bi combinations thereof.
    static GaussRational parse(const std::string& text);

  private:
    mpq_class re_, im_;
};

namespace detail {

// Finite decimal or rational literal -> exact rational. Throws ConfigError.
inline mpq_class parse_rational_part(const std::string& s)
{
    if (s.empty())
        throw ConfigError("empty numeric literal");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw ConfigError("bad numeric literal: '" + s + "'");
        q.canonicalize();
        return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw ConfigError("bad numeric literal: '" + s + "'");
    mpz_class num;
    if (num.set_str(digits, 10) != 0)
        throw ConfigError("bad numeric literal: '" + s + "'");
    mpz_class den = 1;
    for (std::size_t p = 0; p < frac; ++p)
        den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

} // namespace detail

inline GaussRational GaussRational::parse(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.empty())
        throw ConfigError("empty scalar literal");
    // Split into at most two signed parts; the trailing one may carry 'i'.
    std::size_t split = std::string::npos;
    for (std::size_t p = 1; p < s.size(); ++p) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E' &&
            s[p - 1] != '/' && s[p - 1] != '+' && s[p - 1] != '-')
            split = p;
    }
    auto one_part = [](const std::string& part) -> GaussRational {
        if (part == "i" || part == "+i")
            return GaussRational::i();
        if (part == "-i")
            return GaussRational(mpq_class(0), mpq_class(-1));
        if (!part.empty() && part.back() == 'i')
            return GaussRational(mpq_class(0),
                                 detail::parse_rational_part(part.substr(0, part.size() - 1)));
        return GaussRational(detail::parse_rational_part(part));
    };
    if (split == std::string::npos)
        return one_part(s);
    return one_part(s.substr(0, split)) + one_part(s.substr(split));
}

} // namespace logjet
