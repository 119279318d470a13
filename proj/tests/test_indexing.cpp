#include <doctest.h>

#include "test_support.hpp"

using namespace deepr;
using deepr::test::run;

TEST_CASE("nonnegative indexers") {
  const char* x = "x <- seq(10, 100, 10)\n";
  CHECK(run(std::string(x) + "x[c(1, 2, 1, 0, 3, NA_real_, 1, 11)]") ==
        "[1] 10 20 10 30 NA 10 NA\n");
  CHECK(run(std::string(x) + "x[c()]") == "numeric(0)\n");  // seq gives doubles
  CHECK(run(std::string(x) + "x[1]") == "[1] 10\n");
  CHECK(run(std::string(x) + "x[length(x)]") == "[1] 100\n");
  CHECK(run(std::string(x) + "x[c(1, length(x))]") == "[1]  10 100\n");
  CHECK(run("c(1, 2, 3)[4]") == "[1] NA\n");
  CHECK(run(std::string(x) + "x[1.9]") == "[1] 10\n");  // truncation
}

TEST_CASE("negative indexers exclude") {
  const char* x = "x <- seq(10, 100, 10)\n";
  CHECK(run(std::string(x) + "x[-c(1, 0, 2, 1, 1, 8:100)]") ==
        "[1] 30 40 50 60 70\n");
  CHECK(run(std::string(x) + "x[-(1:3)]") ==
        "[1]  40  50  60  70  80  90 100\n");
  CHECK(run(std::string(x) + "x[-1:3]").find(
            "only 0's may be mixed with negative subscripts") !=
        std::string::npos);
}

TEST_CASE("logical indexers with recycling and NA") {
  CHECK(run("x <- seq(10, 100, 10)\n"
            "x[c(TRUE, FALSE, FALSE, FALSE, TRUE, TRUE, FALSE, TRUE, NA, "
            "TRUE)]") == "[1]  10  50  60  80  NA 100\n");
  CHECK(run("c(\"one\", \"two\", \"three\")[c(NA, TRUE, FALSE)]") ==
        "[1] NA    \"two\"\n");
  CHECK(run("x <- seq(10, 100, 10)\nx[c(FALSE, TRUE)]") ==
        "[1]  20  40  60  80 100\n");
  CHECK(run("x <- 1:10\nx[x > 6]") == "[1]  7  8  9 10\n");
}

TEST_CASE("character indexers use first name match") {
  const char* x = "x <- structure(seq(10, 100, 10), names=letters[1:10])\n";
  CHECK(run(std::string(x) + "x[c(\"a\", \"f\", \"a\", \"g\", \"z\")]") ==
        "   a    f    a    g <NA> \n  10   60   10   70   NA \n");
  CHECK(run("structure(c(1, 2, 3), names=c(\"a\", \"b\", \"a\"))[\"a\"]") ==
        "a \n1 \n");
  CHECK(run(std::string(x) + "x[\"a\"]") == " a \n10 \n");
}

TEST_CASE("subset keeps names, drops other attributes") {
  CHECK(run("x <- structure(1:4, names=c(\"a\",\"b\",\"c\",\"d\"), "
            "attrib1=\"<3\")\nx[1]") == "a \n1 \n");
  CHECK(run("x <- structure(1:4, names=c(\"a\",\"b\",\"c\",\"d\"), "
            "attrib1=\"<3\")\nx[[1]]") == "[1] 1\n");
}

TEST_CASE("lists subset to lists, extract to elements") {
  const char* y = "y <- list(1, 11:12, 21:23)\n";
  CHECK(run(std::string(y) + "y[[2]]") == "[1] 11 12\n");
  CHECK(run(std::string(y) + "y[2]") == "[[1]]\n[1] 11 12\n\n");
  CHECK(run("list(1, 2, 3)[4]") == "[[1]]\nNULL\n\n");
  CHECK(run("c(1, 2, 3)[[4]]") ==
        "Error in c(1, 2, 3)[[4]]: subscript out of bounds\n");
  CHECK(run("list(1, 2, 3)[[4]]") ==
        "Error in list(1, 2, 3)[[4]]: subscript out of bounds\n");
  CHECK(run(std::string(y) + "y[[c(3, 1)]]") == "[1] 21\n");
  CHECK(run("list(list(7))[[c(1, 1)]]") == "[1] 7\n");
  CHECK(run(std::string(y) + "y[[c(1, 3)]]") ==
        "Error in y[[c(1, 3)]]: subscript out of bounds\n");
  CHECK(run(std::string(y) + "y[-1]") ==
        "[[1]]\n[1] 11 12\n\n[[2]]\n[1] 21 22 23\n\n");
}

TEST_CASE("extract never returns names") {
  CHECK(run("x <- c(a=1, b=2)\nnames(x[[1]])") == "NULL\n");
  CHECK(run("y <- list(a=1, b=2)\nnames(y[[\"a\"]])") == "NULL\n");
}

TEST_CASE("replacement with coercion and recycling") {
  CHECK(run("x <- 1:12\nx[length(x)] <- 42\n"
            "x[c(TRUE, FALSE)] <- c(\"a\", \"b\", \"c\")\nprint(x)") ==
        " [1] \"a\"  \"2\"  \"b\"  \"4\"  \"c\"  \"6\"  \"a\"  \"8\"  \"b\"  "
        "\"10\" \"c\"  \"42\"\n");
  CHECK(run("x <- 1:6\nx[c(TRUE, FALSE)] <- c(10, 20)\nx").find("Warning") !=
        std::string::npos);
}

TEST_CASE("list deletion and null storage") {
  CHECK(run("y <- list(1, 2, 3, 4)\ny[1] <- NULL\ny[[1]] <- NULL\n"
            "y[1] <- list(NULL)\nprint(y)") ==
        "[[1]]\nNULL\n\n[[2]]\n[1] 4\n\n");
}

TEST_CASE("extending writes fill gaps") {
  CHECK(run("x <- 1:5\nx[10] <- 10\nprint(x)") ==
        " [1]  1  2  3  4  5 NA NA NA NA 10\n");
  CHECK(run("x <- 1:5\nx[length(x)+1] <- 6\nprint(x)") ==
        "[1] 1 2 3 4 5 6\n");
  CHECK(run("y <- list(1)\ny[[3]] <- 3\nlength(y)") == "[1] 3\n");
  CHECK(run("y <- list(1)\ny[[3]] <- 3\ny[[2]]") == "NULL\n");
}

TEST_CASE("named insertion appends") {
  CHECK(run("x <- c(1, 2)\nx[\"a\"] <- 11\nx[\"z\"] <- 12\nx[\"z\"] <- 14\n"
            "print(x)") == "       a  z \n 1  2 11 14 \n");
}

TEST_CASE("replacement keeps non-name attributes") {
  CHECK(run("x <- structure(1:4, names=c(\"a\",\"b\",\"c\",\"d\"), "
            "attrib1=\"<3\")\ny <- x\ny[] <- c(\"u\", \"v\")\nprint(y)") ==
        "  a   b   c   d \n\"u\" \"v\" \"u\" \"v\" \n"
        "attr(,\"attrib1\")\n[1] \"<3\"\n");
}

TEST_CASE("dollar operator") {
  CHECK(run("x <- list(spam=\"a\", eggs=\"b\")\nx$spam") == "[1] \"a\"\n");
  CHECK(run("list(a=1)$b") == "NULL\n");
  CHECK(run("x <- list(a=1)\nx$s <- \"e\"\nnames(x)") ==
        "[1] \"a\" \"s\"\n");
  CHECK(run("c(1, 2)$a").find("$ operator is invalid for atomic vectors") !=
        std::string::npos);
  // exact matching only, no partial fallback
  CHECK(run("x <- list(spam=1)\nx$s") == "NULL\n");
}

TEST_CASE("slice composition x[i][j] == x[i[j]]") {
  // brute force over all i, j on a length-5 vector
  for (int i1 = 1; i1 <= 5; ++i1) {
    for (int i2 = 1; i2 <= 5; ++i2) {
      for (int j = 1; j <= 2; ++j) {
        std::string src =
            "x <- c(10, 20, 30, 40, 50)\n"
            "i <- c(" + std::to_string(i1) + ", " + std::to_string(i2) + ")\n"
            "j <- " + std::to_string(j) + "\n"
            "identical(x[i][j], x[i[j]])";
        CHECK(run(src) == "[1] TRUE\n");
      }
    }
  }
}

TEST_CASE("logical/positional duality through which()") {
  CHECK(run("x <- c(5, 1, 4, 2, 8)\nl <- x > 3\n"
            "identical(x[l], x[which(l)])") == "[1] TRUE\n");
}

TEST_CASE("read-after-write returns the recycled value") {
  for (int len = 1; len <= 6; ++len) {
    for (int k = 1; k <= len; ++k) {
      std::string src =
          "x <- seq_len(" + std::to_string(len) + ")\n"
          "i <- " + std::to_string(k) + "\n"
          "x[i] <- 99\nidentical(x[i], 99)";
      CHECK(run(src) == "[1] TRUE\n");
    }
  }
}

TEST_CASE("matrix-style two-index subsetting on dim-2 values") {
  const char* m = "m <- structure(1:6, dim=c(2L, 3L))\n";
  CHECK(run(std::string(m) + "m[1, 2]") == "[1] 3\n");
  CHECK(run(std::string(m) + "m[2, 3]") == "[1] 6\n");
  CHECK(run(std::string(m) + "m[1, ]") == "[1] 1 3 5\n");
  CHECK(run(std::string(m) + "m[, 2]") == "[1] 3 4\n");
  // dimnames are honoured for get
  const char* mn =
      "m <- structure(1:4, dim=c(2L, 2L), dimnames=list(c(\"r1\", \"r2\"), "
      "c(\"c1\", \"c2\")))\n";
  CHECK(run(std::string(mn) + "m[\"r2\", \"c2\"]") == "[1] 4\n");
}

TEST_CASE("environments are not subsettable with [") {
  CHECK(run("e <- new.env()\ne[c(\"x\", \"y\")]").find(
            "object of type 'environment' is not subsettable") !=
        std::string::npos);
}

TEST_CASE("character indexer on unnamed vector gives NAs silently") {
  CHECK(run("c(1, 2)[\"a\"]") == "<NA> \n  NA \n");
}
