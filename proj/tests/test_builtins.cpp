#include <doctest.h>

#include "test_support.hpp"

using namespace deepr;
using deepr::test::run;

TEST_CASE("c combines under the common type") {
  CHECK(run("c(1, c(2, NA_real_, 4), 5, c(6, c(7, Inf)))") ==
        "[1]   1   2  NA   4   5   6   7 Inf\n");
  CHECK(run("c(1, NA, 3, NULL, 5)") == "[1]  1 NA  3  5\n");
  CHECK(run("c(-1, FALSE, TRUE, 2, NA)") == "[1] -1  0  1  2 NA\n");
  CHECK(run("c(\"zero\", TRUE, NA)") == "[1] \"zero\" \"TRUE\" NA    \n");
  CHECK(run("c()") == "NULL\n");
  CHECK(run("typeof(c(1, \"two\", identity))") == "[1] \"list\"\n");
  CHECK(run("typeof(c(list(1), list(2)))") == "[1] \"list\"\n");
}

TEST_CASE("c composes names") {
  CHECK(run("names(c(a=c(x=1, y=2), b=3, c=c(z=4)))") ==
        "[1] \"a.x\" \"a.y\" \"b\"   \"c.z\"\n");
  CHECK(run("names(c(u=list(1:2), v=list(a=3:4, b=5:6), w=7:8))") ==
        "[1] \"u\"   \"v.a\" \"v.b\" \"w1\"  \"w2\" \n");
  CHECK(run("c(a=1, b=2)") == "a b \n1 2 \n");
}

TEST_CASE("rep repeats") {
  CHECK(run("rep(1, 5)") == "[1] 1 1 1 1 1\n");
  CHECK(run("rep(c(1, 2, 3), 4)") == " [1] 1 2 3 1 2 3 1 2 3 1 2 3\n");
  CHECK(run("rep(c(1, 2, 3), c(2, 1, 4))") == "[1] 1 1 2 3 3 3 3\n");
  CHECK(run("rep(c(1, 2, 3), length.out=7)") == "[1] 1 2 3 1 2 3 1\n");
  CHECK(run("rep(c(1, 2, 3), each=3)") == "[1] 1 1 1 2 2 2 3 3 3\n");
  CHECK(run("rep(c(1, 2, 3), length.out=7, each=3)") ==
        "[1] 1 1 1 2 2 2 3\n");
  CHECK(run("rep(c(1, 2, 3), 0)") == "numeric(0)\n");
  CHECK(run("rep(c(a=1, b=2), 2)") == "a b a b \n1 2 1 2 \n");
  CHECK(run("rep(c(1, 2), c(1, 2, 3))").find("Error") != std::string::npos);
}

TEST_CASE("seq and colon generate progressions") {
  CHECK(run("seq(1, 15, 2)") == "[1]  1  3  5  7  9 11 13 15\n");
  CHECK(run("seq(from=1, to=16, by=2)") == "[1]  1  3  5  7  9 11 13 15\n");
  CHECK(run("seq(1, 0, length.out=5)") == "[1] 1.00 0.75 0.50 0.25 0.00\n");
  CHECK(run("seq(length.out=5)") == "[1] 1 2 3 4 5\n");
  CHECK(run("1:10") == " [1]  1  2  3  4  5  6  7  8  9 10\n");
  CHECK(run("-1:10") == " [1] -1  0  1  2  3  4  5  6  7  8  9 10\n");
  CHECK(run("-1:-10") == " [1]  -1  -2  -3  -4  -5  -6  -7  -8  -9 -10\n");
  CHECK(run("seq(1, 16, 2)") == "[1]  1  3  5  7  9 11 13 15\n");
  CHECK(run("seq(10, 1, -3)") == "[1] 10  7  4  1\n");
  CHECK(run("seq(1, 10, -1)").find("wrong sign in 'by' argument") !=
        std::string::npos);
  CHECK(run("seq_len(4)") == "[1] 1 2 3 4\n");
  CHECK(run("seq_along(c(\"a\", \"b\", \"c\"))") == "[1] 1 2 3\n");
  CHECK(run("typeof(1:3)") == "[1] \"integer\"\n");
}

TEST_CASE("match and %in%") {
  CHECK(run("match(c(\"spam\", \"bacon\", \"spam\", \"eggs\", \"spam\"), "
            "c(\"eggs\", \"spam\", \"ham\"))") == "[1]  2 NA  2  1  2\n");
  CHECK(run("c(\"spam\", \"bacon\", \"spam\", \"eggs\", \"spam\") %in% "
            "c(\"eggs\", \"spam\", \"ham\")") ==
        "[1]  TRUE FALSE  TRUE  TRUE  TRUE\n");
  CHECK(run("match(1, numeric(0))") == "[1] NA\n");
  CHECK(run("match(NA, c(1, NA, 3))") == "[1] 2\n");
  CHECK(run("x <- c(0.1, 0.5, 0.9, 0.95)\nmatch(TRUE, x > 0.8)") ==
        "[1] 3\n");
}

TEST_CASE("match/%in% consistency on random data") {
  uint64_t state = 7;
  auto rnd = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(state >> 33) % 10;
  };
  for (int iter = 0; iter < 50; ++iter) {
    std::string x = "c(", t = "c(";
    for (int i = 0; i < 6; ++i) x += std::to_string(rnd()) + (i < 5 ? "," : ")");
    for (int i = 0; i < 4; ++i) t += std::to_string(rnd()) + (i < 3 ? "," : ")");
    CHECK(run("x <- " + x + "\nt <- " + t +
              "\nidentical(x %in% t, !is.na(match(x, t)))") == "[1] TRUE\n");
  }
}

TEST_CASE("findInterval bins correctly") {
  CHECK(run("findInterval(c(0, 0.2, 0.25, 0.4, 0.66, 1), "
            "c(-Inf, 0.25, 0.5, 0.75, Inf))") == "[1] 1 1 2 2 3 4\n");
  CHECK(run("findInterval(c(), c(1, 2))") == "integer(0)\n");
  CHECK(run("findInterval(1, c(3, 2, 1))").find("Error") != std::string::npos);
  // linear-scan oracle on sorted knots
  for (double v : {-2.0, 0.0, 0.5, 1.0, 1.5, 2.0, 7.5}) {
    std::string src = "findInterval(" + std::to_string(v) +
                      ", c(0, 1, 1, 2, 5))";
    RPtr got = test::eval_value(src);
    double knots[] = {0, 1, 1, 2, 5};
    int expect = 0;
    for (double k : knots)
      if (k <= v) ++expect;
    CHECK(ints(*got)[0] == expect);
  }
}

TEST_CASE("order is stable with ties and NA handling") {
  CHECK(run("order(c(10, 20, 40, 10, 10, 30, 20, 10, 10))") ==
        "[1] 1 4 5 8 9 2 7 6 3\n");
  CHECK(run("x <- c(10, 20, 30, 40, 50, 60)\n"
            "y1 <- c(\"a\", \"b\", \"a\", \"a\", \"b\", \"b\")\n"
            "y2 <- c(\"w\", \"w\", \"v\", \"u\", \"u\", \"v\")\n"
            "x[order(y1, y2)]") == "[1] 40 30 10 50 60 20\n");
  CHECK(run("x <- c(10, 30, 40, 20, 10, 10, 50, 30)\n"
            "identical((x[order(x)])[order(order(x))], x)") == "[1] TRUE\n");
  CHECK(run("order(c(2, NA, 1))") == "[1] 3 1 2\n");
  CHECK(run("order(c(2, NA, 1), decreasing=TRUE)") == "[1] 1 3 2\n");
}

TEST_CASE("sort removes NAs and can reverse") {
  CHECK(run("sort(c(3, NA, 1, 2))") == "[1] 1 2 3\n");
  CHECK(run("x <- c(\"b\", \"a\", \"abs\", \"bass\", \"aaargh\")\n"
            "sort(x)") ==
        "[1] \"a\"      \"aaargh\" \"abs\"    \"b\"      \"bass\"  \n");
  CHECK(run("sort(c(1, 3, 2), decreasing=TRUE)") == "[1] 3 2 1\n");
}

TEST_CASE("which and friends") {
  CHECK(run("which(c(NA, TRUE, FALSE, TRUE, FALSE, NA, TRUE))") ==
        "[1] 2 4 7\n");
  CHECK(run("which(c(a=TRUE, b=FALSE, c=TRUE))") == "a c \n1 3 \n");
  CHECK(run("which.min(c(3, 1, 2))") == "[1] 2\n");
  CHECK(run("which.max(c(3, 1, 2))") == "[1] 1\n");
  CHECK(run("rev(1:5)") == "[1] 5 4 3 2 1\n");
}

TEST_CASE("duplicated, unique, tabulate") {
  CHECK(run("duplicated(c(10, 20, 30, 20, 40, 50, 50, 50, 20, 20, 60))") ==
        " [1] FALSE FALSE FALSE  TRUE FALSE FALSE  TRUE  TRUE  TRUE  TRUE "
        "FALSE\n");
  CHECK(run("unique(c(10, 20, 30, 20, 40, 50, 50, 50, 20, 20, 60))") ==
        "[1] 10 20 30 40 50 60\n");
  CHECK(run("tabulate(c(2, 4, 6, 2, 2, 2, 3, 6, 6, 3))") ==
        "[1] 0 4 2 1 0 3\n");
  CHECK(run("sum(tabulate(c(2, 4, 6, 0, -1, 9)))") == "[1] 4\n");
}

TEST_CASE("unique yields a subsequence of first occurrences") {
  uint64_t state = 11;
  auto rnd = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(state >> 33) % 5;
  };
  for (int iter = 0; iter < 30; ++iter) {
    std::string x = "c(";
    for (int i = 0; i < 8; ++i) x += std::to_string(rnd()) + (i < 7 ? "," : ")");
    CHECK(run("u <- unique(" + x + ")\nany(duplicated(u))") == "[1] FALSE\n");
    CHECK(run("x <- " + x + "\nu <- unique(x)\nall(u %in% x)") ==
          "[1] TRUE\n");
  }
}

TEST_CASE("paste vectorizes deeply") {
  CHECK(run("paste(c(\"a\", \"b\", \"c\"), c(\"1\", \"2\", \"3\"))") ==
        "[1] \"a 1\" \"b 2\" \"c 3\"\n");
  CHECK(run("paste(c(\"a\", \"b\", \"c\"), 1:6, c(\"!\", \"?\"))") ==
        "[1] \"a 1 !\" \"b 2 ?\" \"c 3 !\" \"a 4 ?\" \"b 5 !\" \"c 6 ?\"\n");
  CHECK(run("paste(c(\"a\", \"b\", \"c\", \"d\"), collapse=\",\")") ==
        "[1] \"a,b,c,d\"\n");
  CHECK(run("paste(c(\"a\", \"b\", \"c\", \"d\"), 1:2, sep=\"\", "
            "collapse=\"\")") == "[1] \"a1b2c1d2\"\n");
  CHECK(run("paste(c(\"A\", NA_character_, \"B\"), \"!\", sep=\"\")") ==
        "[1] \"A!\"  \"NA!\" \"B!\" \n");
  CHECK(run("paste0(\"x\", 1:3)") == "[1] \"x1\" \"x2\" \"x3\"\n");
}

TEST_CASE("nchar counts decoded code points") {
  CHECK(run("nchar(\"I \\\"love\\\" bacon\\n\\\\\\\"/\")") == "[1] 18\n");
  CHECK(run("x <- c(rep(\"spam\", 3), \"bacon\", NA_character_, \"spam\")\n"
            "nchar(x)") == "[1]  4  4  4  5 NA  4\n");
  CHECK(run("nchar(\"\\u00a1hola!\")") == "[1] 6\n");
  CHECK(run("length(c(\"spam\", \"ham\"))") == "[1] 2\n");
}

TEST_CASE("sprintf basics") {
  CHECK(run("sprintf(\"%s%s\", \"a\", c(\"X\", \"Y\", \"Z\"))") ==
        "[1] \"aX\" \"aY\" \"aZ\"\n");
  CHECK(run("sprintf(\"%d, \", 7L)") == "[1] \"7, \"\n");
  CHECK(run("sprintf(\"%.2f\", pi)") == "[1] \"3.14\"\n");
  CHECK(run("sprintf(\"%10s=%6.2f%%\", \"rate\", 2/3*100)") ==
        "[1] \"      rate= 66.67%\"\n");
  CHECK(run("sprintf(\"%.*f\", 1:5, pi)") ==
        "[1] \"3.1\"     \"3.14\"    \"3.142\"   \"3.1416\"  \"3.14159\"\n");
  CHECK(run("sprintf(\"%1$s, %2$s, %1$s\", \"spam\", \"bacon\")") ==
        "[1] \"spam, bacon, spam\"\n");
}

TEST_CASE("cat joins with sep and renders NA") {
  CHECK(run("cat(\"My hovercraft is full of eels.\\n\")") ==
        "My hovercraft is full of eels.\n");
  CHECK(run("cat(1, 2, 3)") == "1 2 3");
  CHECK(run("cat(c(\"a\", NA), \"b\", sep=\"-\")") == "a-NA-b");
  CHECK(run("cat(sqrt(2), \"\\n\")", 5) == "1.4142 \n");
}

TEST_CASE("unlist flattens recursively") {
  CHECK(run("unlist(list(list(1, 2), list(3, list(4:8)), 9))") ==
        "[1] 1 2 3 4 5 6 7 8 9\n");
  CHECK(run("unlist(list(list(1, 2), list(3, list(4:8)), \"spam\"))") ==
        "[1] \"1\"    \"2\"    \"3\"    \"4\"    \"5\"    \"6\"    \"7\"    "
        "\"8\"    \"spam\"\n");
  CHECK(run("names(unlist(list(a=list(x=1), b=2)))") ==
        "[1] \"a.x\" \"b\"  \n");
}

TEST_CASE("head and tail support negative counts") {
  CHECK(run("head(1:10, 3)") == "[1] 1 2 3\n");
  CHECK(run("head(1:10, -3)") == "[1] 1 2 3 4 5 6 7\n");
  CHECK(run("tail(1:10, 3)") == "[1]  8  9 10\n");
  CHECK(run("tail(1:10, -3)") == "[1]  4  5  6  7  8  9 10\n");
  CHECK(run("head(1:10)") == "[1] 1 2 3 4 5 6\n");
  CHECK(run("tail(letters, 2)") == "[1] \"y\" \"z\"\n");
}

TEST_CASE("functional helpers") {
  CHECK(run("Map(seq, c(1, 11, 21), c(6, 13, 29))") ==
        "[[1]]\n[1] 1 2 3 4 5 6\n\n"
        "[[2]]\n[1] 11 12 13\n\n"
        "[[3]]\n[1] 21 22 23 24 25 26 27 28 29\n\n");
  CHECK(run("x <- list(x1=1:3, x2=c(1, NA), x3=c(2, 2))\n"
            "unlist(Map(mean, x, MoreArgs=list(na.rm=TRUE)))") ==
        "x1 x2 x3 \n 2  1  2 \n");
  CHECK(run("Reduce(`+`, 1:4, 0)") == "[1] 10\n");
  CHECK(run("Reduce(function(a, b) a * b, 1:5)") == "[1] 120\n");
  CHECK(run("Filter(function(x) x > 2, c(1, 5, 2, 8))") == "[1] 5 8\n");
  CHECK(run("unlist(lapply(list(c(1, NA, 3), 4:9), mean, na.rm=TRUE))", 5) ==
        "[1] 2.0 6.5\n");
  CHECK(run("unlist(Map(`[`, list(1:5, 11:17, 21:23), 1))") ==
        "[1]  1 11 21\n");
}

TEST_CASE("Reduce left-fold agrees with a manual fold") {
  uint64_t state = 3;
  auto rnd = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(state >> 33) % 9 + 1;
  };
  for (int iter = 0; iter < 20; ++iter) {
    int vals[5];
    long expect = 0;
    std::string x = "c(";
    for (int i = 0; i < 5; ++i) {
      vals[i] = rnd();
      expect = expect + vals[i];
      x += std::to_string(vals[i]) + (i < 4 ? "," : ")");
    }
    RPtr got = test::eval_value("Reduce(`+`, " + x + ", 0)");
    CHECK(element_as_double(*got, 0) == doctest::Approx(expect));
  }
}

TEST_CASE("self-hosting oracles: book-style definitions agree") {
  // %in% has an R-level definition through match
  CHECK(run("my_in <- function(x, table) !is.na(match(x, table))\n"
            "x <- c(1, 5, 2, 9)\nt <- c(2, 9)\n"
            "identical(my_in(x, t), x %in% t)") == "[1] TRUE\n");
  // which via seq_along + logical subset
  CHECK(run("my_which <- function(l) seq_along(l)[!is.na(l) & l]\n"
            "l <- c(NA, TRUE, FALSE, TRUE)\n"
            "identical(my_which(l), which(l))") == "[1] TRUE\n");
  // Map via a for loop
  CHECK(run("x <- list(1:3, 4:5)\n"
            "n <- length(x)\nret <- vector(\"list\", n)\n"
            "for (i in seq_len(n)) ret[[i]] <- sum(x[[i]])\n"
            "identical(ret, Map(sum, x))") == "[1] TRUE\n");
}

TEST_CASE("operators are functions under backticks") {
  CHECK(run("`*`(5, 9)") == "[1] 45\n");
  CHECK(run("`<`(`+`(`*`(`-`(3), 4)), 5)") == "[1] TRUE\n");
  CHECK(run("`[`(c(10, 20, 30), 2)") == "[1] 20\n");
  CHECK(run("`%:)%` <- function(e1, e2) (e1+e2)/2\n5 %:)% 1:10", 5) ==
        " [1] 3.0 3.5 4.0 4.5 5.0 5.5 6.0 6.5 7.0 7.5\n");
  CHECK(run("x <- 1:5\nprint(`[<-`(x, c(3, 5), NA_real_))\nprint(x)") ==
        "[1]  1  2 NA  4 NA\n[1] 1 2 3 4 5\n");
}

TEST_CASE("backtick-named objects work everywhere") {
  CHECK(run("`42 a quite peculiar name :0` <- c(a=1, `b c`=2)\n"
            "sum(`42 a quite peculiar name :0`)") == "[1] 3\n");
}

TEST_CASE("vector constructors and length<-") {
  CHECK(run("vector(\"list\", 2)") == "[[1]]\nNULL\n\n[[2]]\nNULL\n\n");
  CHECK(run("numeric(3)") == "[1] 0 0 0\n");
  CHECK(run("logical(0)") == "logical(0)\n");
  CHECK(run("character(2)") == "[1] \"\" \"\"\n");
  CHECK(run("x <- 1:3\nlength(x) <- 5\nprint(x)") ==
        "[1]  1  2  3 NA NA\n");
}

TEST_CASE("lcg_next follows the fixed congruence") {
  CHECK(run("lcg_next(123)") == "[1] 9299\n");
  // X_i = (75 X_{i-1} + 74) mod 65537, independent one-liner
  uint64_t x = 123;
  for (int i = 0; i < 5; ++i) {
    x = (75 * x + 74) % 65537;
    RPtr got = test::eval_value(
        "x <- 123\nfor (i in seq_len(" + std::to_string(i + 1) +
        ")) x <- lcg_next(x)\nx");
    CHECK(element_as_double(*got, 0) == doctest::Approx(double(x)));
  }
}

TEST_CASE("environment list round trips") {
  CHECK(run("e <- as.environment(list(x=1, y=2))\n"
            "l <- as.list(e)\nidentical(sort(names(l)), c(\"x\", \"y\"))") ==
        "[1] TRUE\n");
}

TEST_CASE("options digits affects printing") {
  CHECK(run("options(digits=5)\nsqrt(2)") == "[1] 1.4142\n");
  CHECK(run("sqrt(2)", 7) == "[1] 1.414214\n");
  CHECK(run("getOption(\"digits\")", 5) == "[1] 5\n");
}

TEST_CASE("is.* predicates") {
  CHECK(run("is.na(c(NA_real_, Inf, -Inf, NaN, -1, 0, 1))") ==
        "[1]  TRUE FALSE FALSE  TRUE FALSE FALSE FALSE\n");
  CHECK(run("is.na(c(TRUE, FALSE, NA, TRUE))") ==
        "[1] FALSE FALSE  TRUE FALSE\n");
  CHECK(run("is.finite(c(NA_real_, Inf, -Inf, NaN, -1, 0, 1))") ==
        "[1] FALSE FALSE FALSE FALSE  TRUE  TRUE  TRUE\n");
  CHECK(run("is.nan(c(NA_real_, NaN, 1))") == "[1] FALSE  TRUE FALSE\n");
  CHECK(run("is.infinite(c(Inf, -Inf, 1, NA))") ==
        "[1]  TRUE  TRUE FALSE FALSE\n");
  CHECK(run("is.null(NULL)") == "[1] TRUE\n");
  CHECK(run("is.function(sum)") == "[1] TRUE\n");
  CHECK(run("is.numeric(1:3)") == "[1] TRUE\n");
  CHECK(run("is.numeric(\"a\")") == "[1] FALSE\n");
  CHECK(run("is.atomic(list())") == "[1] FALSE\n");
}
