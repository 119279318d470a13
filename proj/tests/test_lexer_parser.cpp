#include <cmath>
#include <functional>
#include <doctest.h>

#include "deepr/lexer.hpp"
#include "test_support.hpp"

using namespace deepr;

TEST_CASE("numeric literals decode") {
  auto toks = tokenize("1.23e-4 0x123abc 5L 7");
  CHECK(toks[0].num == doctest::Approx(0.000123));
  CHECK(toks[1].num == doctest::Approx(1194684.0));
  CHECK(toks[2].int_suffix);
  CHECK(toks[3].num == 7.0);
}

TEST_CASE("backtick names keep their exact spelling") {
  auto toks = tokenize("`42 a quite peculiar name :0`");
  CHECK(toks[0].kind == TokKind::BacktickSymbol);
  CHECK(toks[0].text == "42 a quite peculiar name :0");
}

TEST_CASE("empty string literal") {
  auto toks = tokenize("\"\"");
  CHECK(toks[0].kind == TokKind::String);
  CHECK(toks[0].text == "");
}

TEST_CASE("escape sequences decode") {
  auto toks = tokenize(R"("I \"love\" bacon\n\\")");
  CHECK(toks[0].text == "I \"love\" bacon\n\\");
}

TEST_CASE("raw strings disable escapes") {
  auto toks = tokenize("r\"(spam\\n\\\\maps)\"");
  CHECK(toks[0].text == "spam\\n\\\\maps");
}

TEST_CASE("unterminated string is an incomplete state") {
  CHECK_THROWS_AS(tokenize("\"abc"), SyntaxError);
  try {
    tokenize("\"abc");
  } catch (const SyntaxError& e) {
    CHECK(e.incomplete);
  }
}

TEST_CASE("invalid escape is a hard error") {
  try {
    tokenize("\"\\q\"");
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(!e.incomplete);
  }
}

TEST_CASE("comments never reach the parser") {
  auto toks = tokenize("1 # comment here\n2");
  CHECK(toks[0].kind == TokKind::Number);
  CHECK(toks[1].kind == TokKind::Newline);
  CHECK(toks[2].kind == TokKind::Number);
}

// --- parser -----------------------------------------------------------------

TEST_CASE("mean(x)+2 parses as +(mean(x), 2)") {
  CHECK(test::reparse("mean(x)+2") == "mean(x) + 2");
}

TEST_CASE("-1:10 means (-1):10") {
  ParseResult pr = parse_program("-1:10");
  REQUIRE(pr.error.empty());
  const CallData& c = call(*pr.exprs[0]);
  CHECK(sym(*c.fn).name == ":");
  CHECK(c.args[0].expr->type() == Type::Call);
  CHECK(sym(*call(*c.args[0].expr).fn).name == "-");
}

TEST_CASE("2^3^4 is right-associative") {
  ParseResult pr = parse_program("2^3^4");
  REQUIRE(pr.error.empty());
  const CallData& c = call(*pr.exprs[0]);
  CHECK(sym(*c.fn).name == "^");
  CHECK(c.args[1].expr->type() == Type::Call);
}

TEST_CASE("2+ gives unexpected end of input") {
  ParseResult pr = parse_program("2+");
  CHECK(pr.error == "unexpected end of input");
  CHECK(pr.incomplete);
}

TEST_CASE("chained comparisons are rejected") {
  ParseResult pr = parse_program("1 < 2 < 3");
  CHECK(!pr.error.empty());
}

TEST_CASE("-> and ->> reverse into assignments") {
  CHECK(test::reparse("5 -> x") == "x <- 5");
  CHECK(test::reparse("5 ->> x") == "x <<- 5");
  CHECK(test::reparse("x = 5") == "x <- 5");
}

TEST_CASE("pipe desugars at parse time") {
  CHECK(test::reparse("x |> f() |> g(y)") == "g(f(x), y)");
  CHECK(test::reparse("a |> h()") == "h(a)");
  CHECK(test::reparse("x |> k(e1=w, e2=_)") == "k(e1 = w, e2 = x)");
}

TEST_CASE("pipe misuse is a syntax error") {
  CHECK(!parse_program("x |> y").error.empty());
  CHECK(!parse_program("x |> f(_)").error.empty());
  CHECK(!parse_program("x |> f(a=_, b=_)").error.empty());
}

TEST_CASE("dangling else at top level fails, inside braces is fine") {
  CHECK(!parse_program("if (TRUE) 1\nelse 2").error.empty());
  ParseResult ok = parse_program("{\nif (TRUE) 1\nelse 2\n}");
  CHECK(ok.error.empty());
}

TEST_CASE("every control form is an ordinary call") {
  ParseResult pr = parse_program("while (i < 10) i <- i + 1");
  REQUIRE(pr.error.empty());
  CHECK(pr.exprs[0]->type() == Type::Call);
  CHECK(sym(*call(*pr.exprs[0]).fn).name == "while");
}

TEST_CASE("parse-deparse-parse is a structural fixed point") {
  const char* cases[] = {
      "x <- c(1, 2, 3)",
      "if (y > 0) print(log(y^10)) else {\ny <- -y\nprint(y)\n}",
      "f <- function(x, y = 1) x + y",
      "while (i <= 3) {\ncat(i)\ni <- i + 1\n}",
      "for (i in 1:10) print(i)",
      "x[c(1, 2)] <- list(a = 1, b = 2)",
      "y <- x |> f() |> g(2)",
      "repeat break",
      "`42 weird name`(1, 2)",
      "z$a$b <- ~u + v",
      "mean(x, na.rm = TRUE)",
  };
  for (const char* src : cases) {
    ParseResult p1 = parse_program(src);
    REQUIRE(p1.error.empty());
    std::string rendered;
    for (const auto& e : p1.exprs) {
      for (const auto& l : deparse_lines(*e)) rendered += l + "\n";
    }
    ParseResult p2 = parse_program(rendered);
    REQUIRE(p2.error.empty());
    REQUIRE(p1.exprs.size() == p2.exprs.size());
    for (size_t i = 0; i < p1.exprs.size(); ++i)
      CHECK(identical(*strip_src(p1.exprs[i]), *strip_src(p2.exprs[i])));
  }
}

TEST_CASE("precedence fuzzing against a recursive arithmetic oracle") {
  // random expressions over {+,-,*,/,^,:,unary-} with integer leaves;
  // the fully parenthesized rendering must evaluate to the same number
  uint64_t state = 42;
  auto rnd = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(state >> 33);
  };
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth <= 0) return std::to_string(1 + rnd() % 5);
    switch (rnd() % 8) {
      case 0: return gen(depth - 1) + " + " + gen(depth - 1);
      case 1: return gen(depth - 1) + " - " + gen(depth - 1);
      case 2: return gen(depth - 1) + " * " + gen(depth - 1);
      case 3: return gen(depth - 1) + " / " + gen(depth - 1);
      case 4: return std::to_string(1 + rnd() % 3) + "^" +
                     std::to_string(1 + rnd() % 3);
      case 5: return "-" + gen(depth - 1);
      case 6: return std::to_string(1 + rnd() % 5) + ":" +
                     std::to_string(1 + rnd() % 5);
      default: return std::to_string(1 + rnd() % 9);
    }
  };

  // oracle: evaluate the parse tree directly with recursive arithmetic on
  // the first element of each operand
  std::function<double(const RObject&)> oracle = [&](const RObject& e) -> double {
    if (e.type() != Type::Call) return element_as_double(e, 0);
    const CallData& c = call(e);
    const std::string& op = sym(*c.fn).name;
    if (c.args.size() == 1) {
      double v = oracle(*c.args[0].expr);
      return op == "-" ? -v : v;
    }
    double a = oracle(*c.args[0].expr);
    double b = oracle(*c.args[1].expr);
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") return a / b;
    if (op == "^") return std::pow(a, b);
    if (op == ":") return a;  // first element of the range
    throw std::runtime_error("unexpected operator " + op);
  };

  for (int iter = 0; iter < 500; ++iter) {
    std::string src = gen(3);
    ParseResult pr = parse_program(src);
    REQUIRE(pr.error.empty());
    double expect = oracle(*pr.exprs[0]);
    RPtr got = test::eval_value(src);
    double val = element_as_double(*got, 0);
    if (std::isnan(expect)) {
      CHECK(std::isnan(val));
    } else {
      CHECK(val == doctest::Approx(expect));
    }
  }
}
