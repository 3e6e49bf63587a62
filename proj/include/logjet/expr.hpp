#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "logjet/errors.hpp"
#include "logjet/jetdiff.hpp"
#include "logjet/polynomial.hpp"
#include "logjet/rational.hpp"

namespace logjet {

// Surface syntax for jet-differential expressions:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' int)?
//   atom   := 'Z[' int ',' int ']' | 'z[' int ']' | 'det[' rows ']'
//           | number | '(' expr ')'
//   rows   := exprlist (';' exprlist)*
// A leading '-' before an atom is accepted as an extension so canonical
// output reparses. Numbers are integers, p/q rationals or finite decimals,
// optionally suffixed with 'i'.

struct ParseResult {
    JetPolynomial<GaussRational> poly;
    std::optional<int> weight; // nullopt when non-homogeneous
    std::vector<std::string> warnings;
};

namespace detail_expr {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("syntax error at position " + std::to_string(pos) + ": " + what);
    }

    void skip_ws()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    char peek()
    {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c)
    {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!eat(c))
            fail(std::string("expected '") + c + "'");
    }

    long parse_int()
    {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+'))
            ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start)
            fail("expected integer");
        return std::stol(s.substr(start, pos - start));
    }

    GaussRational parse_number()
    {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '.' || s[pos] == '/'))
            ++pos;
        if (pos == start && peek() != 'i')
            fail("expected number");
        std::string body = s.substr(start, pos - start);
        bool imag = false;
        if (pos < s.size() && s[pos] == 'i') {
            imag = true;
            ++pos;
        }
        if (body.empty())
            return GaussRational::i(); // bare 'i'
        mpq_class q = logjet::detail::parse_rational_part(body);
        return imag ? GaussRational(mpq_class(0), q) : GaussRational(q);
    }

    using Poly = JetPolynomial<GaussRational>;

    Poly parse_expr()
    {
        Poly acc = parse_term();
        for (;;) {
            if (eat('+'))
                acc = acc + parse_term();
            else if (eat('-'))
                acc = acc - parse_term();
            else
                return acc;
        }
    }

    Poly parse_term()
    {
        Poly acc = parse_factor();
        while (eat('*'))
            acc = acc * parse_factor();
        return acc;
    }

    Poly parse_factor()
    {
        bool neg = false;
        if (peek() == '-') {
            ++pos;
            neg = true;
        }
        Poly a = parse_atom();
        if (eat('^')) {
            long e = parse_int();
            if (e < 0)
                fail("negative exponent");
            a = a.pow(static_cast<int>(e));
        }
        return neg ? -a : a;
    }

    Poly parse_atom()
    {
        char c = peek();
        if (c == 'Z') {
            ++pos;
            expect('[');
            long i = parse_int();
            expect(',');
            long j = parse_int();
            expect(']');
            return Poly::jet_var(static_cast<int>(i), static_cast<int>(j));
        }
        if (c == 'z') {
            ++pos;
            expect('[');
            long i = parse_int();
            expect(']');
            return Poly::base_var(static_cast<int>(i));
        }
        if (c == 'd' && s.compare(pos, 4, "det[") == 0) {
            pos += 4;
            std::vector<std::vector<Poly>> rows;
            rows.push_back(parse_exprlist());
            while (eat(';'))
                rows.push_back(parse_exprlist());
            expect(']');
            for (const auto& row : rows)
                if (row.size() != rows.size())
                    fail("det: matrix not square");
            return det(rows, Poly::zero());
        }
        if (c == '(') {
            ++pos;
            Poly e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'i')
            return Poly::constant(parse_number());
        fail("expected atom");
    }

    std::vector<Poly> parse_exprlist()
    {
        std::vector<Poly> out;
        out.push_back(parse_expr());
        while (eat(','))
            out.push_back(parse_expr());
        return out;
    }
};

} // namespace detail_expr

inline ParseResult parse_expression(const std::string& text)
{
    detail_expr::Parser p(text);
    ParseResult r;
    r.poly = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size())
        p.fail("trailing input");
    r.weight = r.poly.weighted_degree();
    if (!r.weight)
        r.warnings.push_back("expression is not weighted-homogeneous");
    return r;
}

} // namespace logjet
