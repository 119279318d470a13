#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace deepr;
using deepr::test::run;

TEST_CASE("vectorised arithmetic with recycling") {
  CHECK(run("0:7 %% 3") == "[1] 0 1 2 0 1 2 0 1\n");
  CHECK(run("0:7 %/% 3") == "[1] 0 0 0 1 1 1 2 2\n");
  CHECK(run("c(1, 10, 100) * 1:8") ==
        "Warning in c(1, 10, 100) * 1:8: longer object length is not a "
        "multiple of\n  shorter object length\n"
        "[1]   1  20 300   4  50 600   7  80\n");
  CHECK(run("numeric(0) + 1:3") == "numeric(0)\n");
  CHECK(run("1:10 * c(-1, 1)") ==
        " [1] -1  2 -3  4 -5  6 -7  8 -9 10\n");
  CHECK(run("2^(0:10)") ==
        " [1]    1    2    4    8   16   32   64  128  256  512 1024\n");
  CHECK(run("c(1, NA_real_, 3, NA_real_) + c(NA_real_, 2, 3, NA_real_)") ==
        "[1] NA NA  6 NA\n");
}

TEST_CASE("division corner cases") {
  CHECK(run("c(0/0, 1/0, -1/0)") == "[1]  NaN  Inf -Inf\n");
  CHECK(run("0L %/% 0L") == "[1] NA\n");
  CHECK(run("5 %% 0") == "[1] NaN\n");
}

TEST_CASE("floored modulo table matches the divisor-sign convention") {
  // brute-force over operands in [-5, 5]
  for (int a = -5; a <= 5; ++a) {
    for (int b = -5; b <= 5; ++b) {
      if (b == 0) continue;
      std::string src = "c(" + std::to_string(a) + " %% " +
                        std::to_string(b) + ", " + std::to_string(a) +
                        " %/% " + std::to_string(b) + ")";
      RPtr v = test::eval_value(src);
      double m = element_as_double(*v, 0);
      double q = element_as_double(*v, 1);
      double expect_q = std::floor(static_cast<double>(a) / b);
      double expect_m = a - b * expect_q;
      CHECK(q == expect_q);
      CHECK(m == expect_m);
      if (m != 0) CHECK((m < 0) == (b < 0));
    }
  }
}

TEST_CASE("non-numeric operands are rejected") {
  CHECK(run("\"a\" + 1").find("non-numeric argument to binary operator") !=
        std::string::npos);
}

TEST_CASE("comparison operators") {
  CHECK(run("c(1, 2, 3, 4) == c(2, 2, 3, 8)") ==
        "[1] FALSE  TRUE  TRUE FALSE\n");
  CHECK(run("3 < 1:5") == "[1] FALSE FALSE FALSE  TRUE  TRUE\n");
  CHECK(run("\"a\" == NA_character_") == "[1] NA\n");
  CHECK(run("1:10 <= 10:1") ==
        " [1]  TRUE  TRUE  TRUE  TRUE  TRUE FALSE FALSE FALSE FALSE "
        "FALSE\n");
  CHECK(run("c(1, 4) == 1:4") == "[1]  TRUE FALSE FALSE  TRUE\n");
}

TEST_CASE("lexicographic string comparison by code point") {
  CHECK(run("\"spam\" < \"eggs\"") == "[1] FALSE\n");
  CHECK(run("\"bacon\" < \"eggs\"") == "[1] TRUE\n");
  CHECK(run("c(\"a\", \"b\") <= c(\"b\", \"a\")") == "[1]  TRUE FALSE\n");
}

TEST_CASE("three-valued logic truth tables") {
  const char* setup =
      "u <- c(TRUE, FALSE, NA, TRUE, FALSE, NA, TRUE, FALSE, NA)\n"
      "v <- c(TRUE, TRUE, TRUE, FALSE, FALSE, FALSE, NA, NA, NA)\n";
  CHECK(run(std::string(setup) + "u & v") ==
        "[1]  TRUE FALSE    NA FALSE FALSE FALSE    NA FALSE    NA\n");
  CHECK(run(std::string(setup) + "u | v") ==
        "[1]  TRUE  TRUE  TRUE  TRUE FALSE    NA  TRUE    NA    NA\n");
  CHECK(run(std::string(setup) + "xor(u, v)") ==
        "[1] FALSE  TRUE    NA  TRUE FALSE    NA    NA    NA    NA\n");
  CHECK(run("!c(TRUE, FALSE, NA)") == "[1] FALSE  TRUE    NA\n");
  CHECK(run("xor(NA, FALSE)") == "[1] NA\n");
}

TEST_CASE("De Morgan over the full grid") {
  const char* setup =
      "p <- rep(c(TRUE, FALSE, NA), each=3)\n"
      "q <- rep(c(TRUE, FALSE, NA), 3)\n";
  CHECK(run(std::string(setup) + "identical(!(p & q), !p | !q)") ==
        "[1] TRUE\n");
  CHECK(run(std::string(setup) + "identical(!(p | q), !p & !q)") ==
        "[1] TRUE\n");
}

TEST_CASE("character operands to logic ops fail") {
  CHECK(run("\"a\" & TRUE").find("Error") != std::string::npos);
}

TEST_CASE("unary math behaves and warns") {
  CHECK(run("abs(c(2, -1, 0, -3, NA_real_))") == "[1]  2  1  0  3 NA\n");
  CHECK(run("sqrt(c(4, 2, -1))", 5) ==
        "Warning in sqrt(c(4, 2, -1)): NaNs produced\n"
        "[1] 2.0000 1.4142    NaN\n");
  CHECK(run("floor(c(7.0001, -4.3149))") == "[1]  7 -5\n");
  CHECK(run("ceiling(c(7.0001, -4.3149))") == "[1]  8 -4\n");
  CHECK(run("trunc(c(7.0001, -4.3149))") == "[1]  7 -4\n");
}

TEST_CASE("round uses banker's rounding and digit scaling") {
  CHECK(run("round(c(0.5, 1.5, 2.5))") == "[1] 0 2 2\n");
  const char* x =
      "x <- c(7.0001, 6.9999, -4.3149, -5.19999, 123.4567, -765.4321, 0.5, "
      "1.5, 2.5)\n";
  CHECK(run(std::string(x) + "round(x)") ==
        "[1]    7    7   -4   -5  123 -765    0    2    2\n");
  CHECK(run(std::string(x) + "round(x, 1)", 5) ==
        "[1]    7.0    7.0   -4.3   -5.2  123.5 -765.4    0.5    1.5    2.5\n");
  CHECK(run(std::string(x) + "round(x, -2)") ==
        "[1]    0    0    0    0  100 -800    0    0    0\n");
}

TEST_CASE("log with bases and NaN warnings") {
  CHECK(run("log(c(0, 1, 2.7183, 7.3891, 20.0855))", 5) ==
        "[1] -Inf    0    1    2    3\n");
  CHECK(run("log(c(0, 1, 10, 100, 1000, 1e10), 10)") ==
        "[1] -Inf    0    1    2    3   10\n");
  CHECK(run("log(-1)").find("NaNs produced") != std::string::npos);
  CHECK(run("exp(c(0, 1, 2, 3))", 5) ==
        "[1]  1.0000  2.7183  7.3891 20.0855\n");
}

TEST_CASE("attributes propagate from inputs") {
  CHECK(run("x <- structure(1:4, names=c(\"a\",\"b\",\"c\",\"d\"), "
            "attrib1=\"<3\")\nround(x)") ==
        "a b c d \n1 2 3 4 \nattr(,\"attrib1\")\n[1] \"<3\"\n");
  // longer operand wins; ties merge with the first preferred
  const char* xy =
      "x <- structure(1:4, names=c(\"a\",\"b\",\"c\",\"d\"), attrib1=\"<3\")\n"
      "y <- structure(c(1, 10), names=c(\"f\", \"g\"), attrib1=\":\", "
      "attrib2=\":0\")\n";
  CHECK(run(std::string(xy) + "y * x") ==
        " a  b  c  d \n 1 20  3 40 \nattr(,\"attrib1\")\n[1] \"<3\"\n");
  CHECK(run(std::string(xy) +
            "y[c(\"h\", \"i\")] <- c(100, 1000)\nx * y") ==
        "   a    b    c    d \n   1   20  300 4000 \n"
        "attr(,\"attrib1\")\n[1] \"<3\"\nattr(,\"attrib2\")\n[1] \":0\"\n");
}

TEST_CASE("aggregates") {
  CHECK(run("sum(1:8)") == "[1] 36\n");
  CHECK(run("prod(1:8)") == "[1] 40320\n");
  CHECK(run("sum(c(TRUE, TRUE, FALSE, TRUE, FALSE))") == "[1] 3\n");
  CHECK(run("mean(c(1, NA, 3), na.rm=TRUE)") == "[1] 2\n");
  CHECK(run("mean(c(1, NA, 3))") == "[1] NA\n");
  CHECK(run("min(c(3, 2, 4, 5, 1, 6, 0))") == "[1] 0\n");
  CHECK(run("max(c(3, 2, 4, 5, 1, 6, 0))") == "[1] 6\n");
  CHECK(run("sum(1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 42)") == "[1] 108\n");
  CHECK(run("min(integer(0))").find("Inf") != std::string::npos);
  CHECK(run("sum(\"a\")").find("Error") != std::string::npos);
}

TEST_CASE("sum splits associatively over cut points") {
  RPtr x = test::eval_value("c(3, -1, 4, 1, -5, 9, 2, 6)");
  double total = 0;
  for (size_t i = 0; i < x->length(); ++i) total += reals(*x)[i];
  for (size_t k = 1; k + 1 < x->length(); ++k) {
    std::string src = "x <- c(3, -1, 4, 1, -5, 9, 2, 6)\n"
                      "sum(x[1:" + std::to_string(k) + "]) + sum(x[" +
                      std::to_string(k + 1) + ":8])";
    RPtr v = test::eval_value(src);
    CHECK(element_as_double(*v, 0) == doctest::Approx(total));
  }
}

TEST_CASE("cumulants") {
  CHECK(run("cumsum(1:8)") == "[1]  1  3  6 10 15 21 28 36\n");
  CHECK(run("cumprod(1:8)") ==
        "[1]     1     2     6    24   120   720  5040 40320\n");
  CHECK(run("cummin(c(3, 2, 4, 5, 1, 6, 0))") == "[1] 3 2 2 2 1 1 0\n");
  CHECK(run("cummax(c(3, 2, 4, 5, 1, 6, 0))") == "[1] 3 3 4 5 5 6 6\n");
  CHECK(run("cumprod(numeric(0))") == "numeric(0)\n");
  CHECK(run("cumsum(c(1, NA, 3))") == "[1]  1 NA NA\n");
  CHECK(run("cumsum(c(TRUE, TRUE, FALSE, TRUE, FALSE))") ==
        "[1] 1 2 2 3 3\n");
  CHECK(run("cummin(c(TRUE, TRUE, FALSE, TRUE, FALSE))") ==
        "[1] 1 1 0 0 0\n");
}

TEST_CASE("ifelse selects elementwise") {
  CHECK(run("z <- c(-4, 2, -1)\nifelse(z >= 0, z, -z)") == "[1] 4 2 1\n");
  CHECK(run("ifelse(c(NA, TRUE, FALSE), \"a\", \"b\")") ==
        "[1] NA  \"a\" \"b\"\n");
  CHECK(run("ifelse(logical(0), 1, 2)") == "logical(0)\n");
  CHECK(run("x <- c(-1, 0, 2)\nifelse(x > 0, x^2, 0)") == "[1] 0 0 4\n");
}

TEST_CASE("recycling oracle: explicit materialization agrees") {
  // all operand-length pairs (m, n) <= 8 for +, *, <, &
  const char* ops[] = {"+", "*", "<", "&"};
  for (const char* op : ops) {
    for (int m = 1; m <= 8; ++m) {
      for (int n = 1; n <= m; ++n) {
        std::string x = "x <- seq_len(" + std::to_string(m) + ")\n";
        std::string y = "y <- rev(seq_len(" + std::to_string(n) + "))\n";
        std::string direct = "suppressWarnings(x " + std::string(op) + " y)";
        std::string materialized =
            "suppressWarnings(x " + std::string(op) +
            " rep(y, length.out=length(x)))";
        std::string src = x + y + "identical(" + direct + ", " +
                          materialized + ")";
        CHECK(run(src) == "[1] TRUE\n");
        // warning iff max %% min != 0
        std::string warn_src = x + y + "x " + op + " y";
        bool warned = run(warn_src).find("Warning") != std::string::npos;
        CHECK(warned == (m % n != 0));
      }
    }
  }
}

TEST_CASE("min agrees with a selection-sort oracle") {
  RPtr x = test::eval_value("c(7, 3, 9, 1, 4, 1, 8)");
  RealVec v = reals(*x);
  // selection sort
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[j] < v[i]) std::swap(v[i], v[j]);
  RPtr m = test::eval_value("min(c(7, 3, 9, 1, 4, 1, 8))");
  CHECK(element_as_double(*m, 0) == v[0]);
}

TEST_CASE("pmin and pmax") {
  CHECK(run("pmin(c(1, 2, 3, 4), c(4, 2, 3, 1))") == "[1] 1 2 3 1\n");
  CHECK(run("pmin(3, 1:5)") == "[1] 1 2 3 3 3\n");
  CHECK(run("pmax(0, pmin(1, c(0.25, -2, 5, -0.5, 0, 1.3, 0.99)))", 5) ==
        "[1] 0.25 0.00 1.00 0.00 0.00 1.00 0.99\n");
}

TEST_CASE("all and any with missing data") {
  CHECK(run("all(c(TRUE, TRUE, NA))") == "[1] NA\n");
  CHECK(run("any(c(NA, FALSE, TRUE))") == "[1] TRUE\n");
  CHECK(run("all(c(TRUE, NA), na.rm=TRUE)") == "[1] TRUE\n");
  CHECK(run("any(c(FALSE, NA), na.rm=TRUE)") == "[1] FALSE\n");
}
