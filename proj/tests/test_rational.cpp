#include "hetsched/rational.hpp"
#include "hetsched/random.hpp"

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>

using namespace hetsched;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
    EXPECT_EQ(parse_rational("4/5"), make_rational(4, 5));
    EXPECT_EQ(parse_rational("8/10"), make_rational(4, 5));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(parse_rational("2.5"), make_rational(5, 2));
    EXPECT_EQ(parse_rational("0.001"), make_rational(1, 1000));
    EXPECT_EQ(parse_rational(" 7 "), Rational(7));
    EXPECT_EQ(parse_rational(".5"), make_rational(1, 2));
}

TEST(Rational, RejectsMalformedInput) {
    for (const char* bad : {"", "abc", "1/0", "1e3", "1/-2", "--1", "1.2.3", ".", "1/"})
        EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(Rational, FormatsInLowestTerms) {
    EXPECT_EQ(format_rational(make_rational(8, 10)), "4/5");
    EXPECT_EQ(format_rational(Rational(6)), "6");
    EXPECT_EQ(format_rational(make_rational(-3, 9)), "-1/3");
}

TEST(Rational, FormatParseRoundTripProperty) {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        long num = static_cast<long>(rng.uniform_int(0, 2000000)) - 1000000;
        long den = static_cast<long>(rng.uniform_int(1, 1000000));
        Rational r = make_rational(num, den);
        EXPECT_EQ(parse_rational(format_rational(r)), r);
    }
}

TEST(Rational, DecimalParsingIsExactProperty) {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        auto whole = rng.uniform_int(0, 999);
        auto frac = rng.uniform_int(0, 999999);
        std::string digits = std::to_string(frac);
        digits.insert(0, 6 - digits.size(), '0');
        Rational r = parse_rational(std::to_string(whole) + "." + digits);
        EXPECT_EQ(r * 1000000, Rational(static_cast<long>(whole * 1000000 + frac)));
    }
}

TEST(Rational, MinMaxClamp) {
    Rational a = make_rational(1, 3), b = make_rational(1, 2);
    EXPECT_EQ(rmin(a, b), a);
    EXPECT_EQ(rmax(a, b), b);
    EXPECT_EQ(clamp(Rational(2), 0, 1), Rational(1));
    EXPECT_EQ(clamp(Rational(-2), 0, 1), Rational(0));
    EXPECT_EQ(clamp(a, 0, 1), a);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
    Rng a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs = differs || x != c.next();
    }
    EXPECT_TRUE(differs);
}

TEST(Random, UniformGridStaysInRangeProperty) {
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        Rational v = rng.uniform_grid(1, 2, 1000, true);
        EXPECT_LT(Rational(1), v);
        EXPECT_LE(v, Rational(2));
        EXPECT_EQ(Rational(v * 1000).get_den(), 1);
    }
    EXPECT_THROW(rng.uniform_grid(make_rational(1, 3), make_rational(2, 5), 2, true), std::invalid_argument);
}
