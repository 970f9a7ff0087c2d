#include <gtest/gtest.h>

#include <random>

#include "haarfree/exprparse/parser.hpp"
#include "support/random_poly.hpp"

using namespace haarfree;
using haarfree::parse::ParseError;
using poly::Polynomial;
using cd = std::complex<double>;

namespace {
Polynomial L(const poly::Alphabet& a, int i, bool s = false) { return Polynomial::letter(a, i, s); }

std::size_t error_column(const std::string& text, int p = 2, int q = 1) {
    try {
        parse::parse(text, p, q);
    } catch (const ParseError& e) {
        return e.column();
    }
    return 0;
}
}  // namespace

TEST(Parse, Examples) {
    const poly::Alphabet a(2, 2);
    EXPECT_EQ(parse::parse("U1*U1'", 2, 0), L(a, 1) * L(a, 1, true));
    EXPECT_EQ(parse::parse("U1 + U1' + U2 + U2'", 2, 0), L(a, 1) + L(a, 1, true) + L(a, 2) + L(a, 2, true));
    const poly::Alphabet b(2, 1);
    EXPECT_EQ(parse::parse("2i*(U1*Z1)^2", 1, 1), L(b, 1) * L(b, 2) * L(b, 1) * L(b, 2) * cd(0, 2));
}

TEST(Parse, Scalars) {
    const poly::Alphabet a(1, 1);
    EXPECT_EQ(parse::parse("1.5", 1, 0), Polynomial::constant(a, 1.5));
    EXPECT_EQ(parse::parse("i", 1, 0), Polynomial::constant(a, cd(0, 1)));
    EXPECT_EQ(parse::parse("(0.5-0.5i)*U1", 1, 0), L(a, 1) * cd(0.5, -0.5));
    EXPECT_EQ(parse::parse("-U1", 1, 0), L(a, 1) * cd(-1));
    EXPECT_EQ(parse::parse("2.5e-3i", 1, 0), Polynomial::constant(a, cd(0, 2.5e-3)));
    EXPECT_TRUE(parse::parse("U1 - U1", 1, 0).is_zero());
}

TEST(Parse, PostfixLeftToRight) {
    const poly::Alphabet a(2, 2);
    const Polynomial sq = L(a, 1) * L(a, 2) * L(a, 1) * L(a, 2);
    EXPECT_EQ(parse::parse("(U1*U2)^2'", 2, 0), sq.adjoint());
    EXPECT_EQ(parse::parse("(U1*U2)'^2", 2, 0), sq.adjoint());
    EXPECT_EQ(parse::parse("U1''", 2, 0), L(a, 1));
    EXPECT_EQ(parse::parse("(2i)'", 2, 0), Polynomial::constant(a, cd(0, -2)));
}

TEST(Parse, Errors) {
    EXPECT_EQ(error_column("U1 + U3"), 6u);
    EXPECT_EQ(error_column("Z2"), 1u);
    EXPECT_EQ(error_column("U1^0"), 4u);
    EXPECT_EQ(error_column("U1^-2"), 4u);
    EXPECT_EQ(error_column("U1 $ U2"), 4u);
    EXPECT_EQ(error_column("(U1"), 4u);
    EXPECT_EQ(error_column("U1 U2"), 4u);
    EXPECT_EQ(error_column("U"), 2u);
    EXPECT_EQ(error_column("U1^1.5"), 4u);
    EXPECT_THROW(parse::parse("", 1, 0), ParseError);
    EXPECT_THROW(parse::parse("   ", 1, 0), ParseError);
    EXPECT_THROW(parse::parse("U0", 1, 0), ParseError);
}

TEST(Parse, DeepNestingIsAnErrorNotACrash) {
    std::string s(5000, '(');
    s += "U1";
    s += std::string(5000, ')');
    EXPECT_THROW(parse::parse(s, 1, 0), ParseError);
    EXPECT_THROW(parse::parse("(U1+U2+Z1)^40", 2, 1), ParseError);
}

TEST(Format, Examples) {
    const Polynomial p = parse::parse("U1*U1'", 1, 0);
    EXPECT_EQ(parse::format(p), "U1*U1'");
    EXPECT_EQ(parse::parse(parse::format(p), 1, 0), p);
    EXPECT_EQ(parse::format(Polynomial(poly::Alphabet(1, 1))), "0");
    EXPECT_EQ(parse::format(parse::parse("-U1", 1, 0)), "-U1");
    EXPECT_EQ(parse::format(parse::parse("2 - U1*Z1 + (1-2i)*Z1'", 1, 1)), "2 + (1-2i)*Z1' - U1*Z1");
    EXPECT_EQ(parse::format(parse::parse("-0.25i*U1", 1, 0)), "-0.25i*U1");
}

TEST(Format, RoundTripOnRandomPolynomials) {
    std::mt19937_64 g(12);
    std::uniform_int_distribution<int> pq(0, 3), kind(0, 3);
    std::normal_distribution<double> n(0, 3);
    int checked = 0;
    while (checked < 1000) {
        const int p = pq(g), q = pq(g);
        if (p + q == 0) continue;
        const poly::Alphabet a(p + q, p);
        Polynomial P(a);
        for (int t = 0; t < 4; ++t) {
            cd c;
            switch (kind(g)) {
                case 0: c = {std::round(n(g)), 0}; break;
                case 1: c = {0, n(g)}; break;
                case 2: c = {n(g), n(g)}; break;
                default: c = {n(g) * 1e-7, -n(g) * 1e9}; break;
            }
            P.add_term(testsupport::random_monomial(g, a, 6), c);
        }
        const std::string s = parse::format(P);
        EXPECT_EQ(parse::parse(s, p, q), P) << s;
        ++checked;
    }
}

TEST(Parse, ArbitraryBytesNeverCrash) {
    std::mt19937_64 g(13);
    std::uniform_int_distribution<int> len(0, 24), byte(0, 255), pick(0, 15);
    const std::string alphabet = "U1Z2()*+-'^i. 3e";
    for (int r = 0; r < 20000; ++r) {
        std::string s;
        const int n = len(g);
        for (int k = 0; k < n; ++k)
            s.push_back(r % 2 ? static_cast<char>(byte(g)) : alphabet[static_cast<std::size_t>(pick(g))]);
        try {
            (void)parse::parse(s, 2, 2);
        } catch (const ParseError& e) {
            EXPECT_GE(e.column(), 1u);
            EXPECT_LE(e.column(), s.size() + 1);
        }
    }
}
