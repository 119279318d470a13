#include <cmath>
#include <unordered_map>

#include "deepr/interp.hpp"
#include "deepr/lexer.hpp"
#include "deepr/value.hpp"

namespace deepr {

namespace {

// binding powers, higher binds tighter
constexpr int BP_QUESTION = 2;
constexpr int BP_ASSIGN = 6;        // <- <<- -> ->> = :=  (right assoc)
constexpr int BP_TILDE = 8;
constexpr int BP_OR = 10;           // || |
constexpr int BP_AND = 12;          // && &
constexpr int BP_NOT = 14;          // unary !
constexpr int BP_COMPARE = 16;      // < > <= >= == !=  (non-chaining)
constexpr int BP_ADD = 18;          // binary + -
constexpr int BP_MUL = 20;          // * /
constexpr int BP_SPECIAL = 22;      // %op% |>
constexpr int BP_COLON = 24;        // :
constexpr int BP_UNARY = 26;        // unary + -
constexpr int BP_POWER = 28;        // ^  (right assoc)
constexpr int BP_NAMESPACE = 32;    // :: :::
constexpr int BP_POSTFIX = 34;      // $ @ [[ [ ( and call

struct OpInfo {
  int bp;
  bool right_assoc;
  bool non_assoc = false;
};

const std::unordered_map<std::string, OpInfo>& infix_table() {
  static const std::unordered_map<std::string, OpInfo> t = {
      {"?", {BP_QUESTION, false}},
      {"<-", {BP_ASSIGN, true}},
      {"<<-", {BP_ASSIGN, true}},
      {"->", {BP_ASSIGN, false}},
      {"->>", {BP_ASSIGN, false}},
      {"=", {BP_ASSIGN, true}},
      {":=", {BP_ASSIGN, true}},
      {"~", {BP_TILDE, false}},
      {"||", {BP_OR, false}},
      {"|", {BP_OR, false}},
      {"&&", {BP_AND, false}},
      {"&", {BP_AND, false}},
      {"<", {BP_COMPARE, false, true}},
      {">", {BP_COMPARE, false, true}},
      {"<=", {BP_COMPARE, false, true}},
      {">=", {BP_COMPARE, false, true}},
      {"==", {BP_COMPARE, false, true}},
      {"!=", {BP_COMPARE, false, true}},
      {"+", {BP_ADD, false}},
      {"-", {BP_ADD, false}},
      {"*", {BP_MUL, false}},
      {"/", {BP_MUL, false}},
      {"|>", {BP_SPECIAL, false}},
      {":", {BP_COLON, false}},
      {"^", {BP_POWER, true}},
      {"::", {BP_NAMESPACE, false}},
      {":::", {BP_NAMESPACE, false}},
  };
  return t;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::string& src)
      : toks_(std::move(toks)), src_(src) {}

  std::vector<RPtr> program() {
    std::vector<RPtr> out;
    while (true) {
      skip_separators();
      if (at_end()) break;
      out.push_back(statement());
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  const std::string& src_;
  size_t pos_ = 0;
  int group_depth_ = 0;  // depth of ( [ [[ — newlines ignored inside
  int brace_depth_ = 0;

  const Token& cur() {
    // inside round/square brackets newlines are plain whitespace
    while (group_depth_ > 0 && toks_[pos_].kind == TokKind::Newline) ++pos_;
    return toks_[pos_];
  }

  const Token& peek_raw() const { return toks_[pos_]; }

  bool at_end() { return cur().kind == TokKind::End; }

  Token advance() {
    Token t = cur();
    if (t.kind != TokKind::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = peek_raw();
    if (t.kind == TokKind::End)
      throw SyntaxError{"unexpected end of input", t.line, t.col, true};
    throw SyntaxError{msg, t.line, t.col, false};
  }

  [[noreturn]] void unexpected() {
    const Token& t = cur();
    if (t.kind == TokKind::End)
      throw SyntaxError{"unexpected end of input", t.line, t.col, true};
    std::string what;
    switch (t.kind) {
      case TokKind::Number: what = "unexpected numeric constant"; break;
      case TokKind::String: what = "unexpected string constant"; break;
      case TokKind::Symbol:
      case TokKind::BacktickSymbol: what = "unexpected symbol"; break;
      case TokKind::Keyword: what = "unexpected '" + t.text + "'"; break;
      default: what = "unexpected '" + t.text + "'";
    }
    throw SyntaxError{what, t.line, t.col, false};
  }

  bool is_punct(const Token& t, const char* s) {
    return t.kind == TokKind::Punct && t.text == s;
  }
  bool is_op(const Token& t, const char* s) {
    return t.kind == TokKind::Operator && t.text == s;
  }

  void skip_separators() {
    while (!at_end() &&
           (peek_raw().kind == TokKind::Newline || is_punct(peek_raw(), ";")))
      ++pos_;
  }

  void skip_newlines() {
    while (peek_raw().kind == TokKind::Newline) ++pos_;
  }

  RPtr statement() { return expr(0); }

  RPtr expr(int min_bp) {
    RPtr left = unary(min_bp);
    return infix_loop(std::move(left), min_bp);
  }

  RPtr infix_loop(RPtr left, int min_bp) {
    int last_nonassoc_bp = -1;
    while (true) {
      // a newline outside any bracket ends the expression
      if (group_depth_ == 0 && peek_raw().kind == TokKind::Newline) break;
      const Token& t = cur();
      if (t.kind == TokKind::Operator && t.text != "$" && t.text != "@") {
        std::string op = t.text;
        const auto& table = infix_table();
        auto it = table.find(op);
        OpInfo info{};
        if (it != table.end()) {
          info = it->second;
        } else if (op.size() >= 2 && op.front() == '%' && op.back() == '%') {
          info = OpInfo{BP_SPECIAL, false};
        } else {
          break;  // `!` and other prefix-only tokens
        }
        if (info.bp < min_bp) break;
        if (info.non_assoc && info.bp == last_nonassoc_bp)
          fail("unexpected '" + op + "'");
        if (op == "$" ) { /* handled in postfix */ }
        advance();
        skip_newlines();  // an operator keeps the expression open
        if (op == "|>") {
          RPtr rhs = expr(info.bp + 1);
          left = desugar_pipe_stage(std::move(left), std::move(rhs));
        } else {
          int rbp = info.right_assoc ? info.bp : info.bp + 1;
          RPtr rhs = expr(rbp);
          if (op == "->") {
            left = r_call(r_sym("<-"), {{"", rhs}, {"", left}});
          } else if (op == "->>") {
            left = r_call(r_sym("<<-"), {{"", rhs}, {"", left}});
          } else if (op == "=") {
            left = r_call(r_sym("<-"), {{"", left}, {"", rhs}});
          } else {
            left = r_call(r_sym(op), {{"", left}, {"", rhs}});
          }
        }
        last_nonassoc_bp = info.non_assoc ? info.bp : -1;
        continue;
      }
      // postfix: call, indexing, $, @
      if (BP_POSTFIX < min_bp) break;
      if (is_punct(t, "(")) {
        left = finish_call(std::move(left));
        continue;
      }
      if (is_punct(t, "[")) {
        left = finish_index(std::move(left), "[", 1);
        continue;
      }
      if (is_punct(t, "[[")) {
        left = finish_index(std::move(left), "[[", 2);
        continue;
      }
      if (t.kind == TokKind::Operator && (t.text == "$" || t.text == "@")) {
        std::string op = t.text;
        advance();
        skip_newlines();
        const Token& nm = cur();
        RPtr rhs;
        if (nm.kind == TokKind::Symbol || nm.kind == TokKind::BacktickSymbol ||
            nm.kind == TokKind::Keyword) {
          rhs = r_sym(nm.text);
          advance();
        } else if (nm.kind == TokKind::String) {
          rhs = scalar_str(nm.text);
          advance();
        } else {
          unexpected();
        }
        left = r_call(r_sym(op), {{"", std::move(left)}, {"", std::move(rhs)}});
        continue;
      }
      break;
    }
    return left;
  }

  RPtr unary(int min_bp) {
    const Token& t = cur();
    if (t.kind == TokKind::Operator) {
      if (t.text == "-" || t.text == "+") {
        advance();
        skip_newlines();
        RPtr operand = expr(BP_UNARY);
        return r_call(r_sym(t.text), {{"", std::move(operand)}});
      }
      if (t.text == "!") {
        advance();
        skip_newlines();
        RPtr operand = expr(BP_NOT);
        return r_call(r_sym("!"), {{"", std::move(operand)}});
      }
      if (t.text == "~") {
        advance();
        skip_newlines();
        RPtr operand = expr(BP_TILDE);
        return r_call(r_sym("~"), {{"", std::move(operand)}});
      }
      if (t.text == "?") {
        advance();
        skip_newlines();
        RPtr operand = expr(BP_QUESTION);
        return r_call(r_sym("?"), {{"", std::move(operand)}});
      }
    }
    return primary(min_bp);
  }

  RPtr primary(int /*min_bp*/) {
    const Token& t = cur();
    switch (t.kind) {
      case TokKind::Number: {
        Token tok = advance();
        if (tok.int_suffix) return scalar_int(static_cast<int32_t>(tok.num));
        return scalar_real(tok.num);
      }
      case TokKind::String: {
        Token tok = advance();
        return scalar_str(tok.text);
      }
      case TokKind::Symbol:
      case TokKind::BacktickSymbol: {
        Token tok = advance();
        return r_sym(tok.text);
      }
      case TokKind::Keyword: return keyword();
      case TokKind::Punct:
        if (t.text == "(") {
          advance();
          ++group_depth_;
          RPtr inner = expr(0);
          expect_punct(")");
          --group_depth_;
          return r_call(r_sym("("), {{"", std::move(inner)}});
        }
        if (t.text == "{") return brace_block();
        unexpected();
      default: unexpected();
    }
  }

  RPtr keyword() {
    Token t = advance();
    const std::string& k = t.text;
    if (k == "TRUE") return r_true();
    if (k == "FALSE") return r_false();
    if (k == "NA") return r_lgl_na();
    if (k == "NA_integer_") return scalar_int(na::INT);
    if (k == "NA_real_") return scalar_real(na::real());
    if (k == "NA_character_") return r_str({nullptr});
    if (k == "NULL") return r_null();
    if (k == "Inf") return scalar_real(HUGE_VAL);
    if (k == "NaN") return scalar_real(std::nan(""));
    if (k == "if") return if_expr();
    if (k == "while") return while_expr();
    if (k == "for") return for_expr();
    if (k == "repeat") {
      skip_newlines();
      RPtr body = expr(0);
      return r_call(r_sym("repeat"), {{"", std::move(body)}});
    }
    if (k == "function") return function_expr(t);
    if (k == "break") return r_call(r_sym("break"), {});
    if (k == "next") return r_call(r_sym("next"), {});
    if (k == "else") fail("unexpected 'else'");
    if (k == "in") fail("unexpected 'in'");
    unexpected();
  }

  void expect_punct(const char* s) {
    if (!is_punct(cur(), s)) {
      if (cur().kind == TokKind::End) {
        const Token& t = peek_raw();
        throw SyntaxError{"unexpected end of input", t.line, t.col, true};
      }
      fail(std::string("unexpected '") +
           (cur().kind == TokKind::End ? "<eof>" : cur().text) +
           "' (expected '" + s + "')");
    }
    advance();
  }

  RPtr brace_block() {
    expect_punct("{");
    ++brace_depth_;
    std::vector<NamedExpr> stmts;
    while (true) {
      skip_separators();
      if (is_punct(cur(), "}")) break;
      if (at_end()) {
        const Token& t = peek_raw();
        throw SyntaxError{"unexpected end of input", t.line, t.col, true};
      }
      stmts.push_back({"", expr(0)});
      // statement must be followed by newline, ;, or }
      if (peek_raw().kind == TokKind::Newline || is_punct(peek_raw(), ";")) {
        continue;
      }
      if (is_punct(cur(), "}")) break;
      if (cur().kind == TokKind::End) continue;
      unexpected();
    }
    expect_punct("}");
    --brace_depth_;
    return r_call(r_sym("{"), std::move(stmts));
  }

  RPtr if_expr() {
    skip_newlines();
    expect_punct("(");
    ++group_depth_;
    RPtr cond = expr(0);
    expect_punct(")");
    --group_depth_;
    skip_newlines();
    RPtr then_branch = expr(0);
    // A newline ends the `if` at top level; inside braces/brackets the
    // parser looks ahead for a trailing `else`.
    size_t save = pos_;
    if (group_depth_ > 0 || brace_depth_ > 0) skip_newlines();
    if (cur().kind == TokKind::Keyword && cur().text == "else") {
      advance();
      skip_newlines();
      RPtr else_branch = expr(0);
      return r_call(r_sym("if"), {{"", std::move(cond)},
                                  {"", std::move(then_branch)},
                                  {"", std::move(else_branch)}});
    }
    pos_ = save;
    return r_call(r_sym("if"),
                  {{"", std::move(cond)}, {"", std::move(then_branch)}});
  }

  RPtr while_expr() {
    skip_newlines();
    expect_punct("(");
    ++group_depth_;
    RPtr cond = expr(0);
    expect_punct(")");
    --group_depth_;
    skip_newlines();
    RPtr body = expr(0);
    return r_call(r_sym("while"),
                  {{"", std::move(cond)}, {"", std::move(body)}});
  }

  RPtr for_expr() {
    skip_newlines();
    expect_punct("(");
    ++group_depth_;
    const Token& v = cur();
    if (v.kind != TokKind::Symbol && v.kind != TokKind::BacktickSymbol)
      unexpected();
    RPtr var = r_sym(v.text);
    advance();
    if (!(cur().kind == TokKind::Keyword && cur().text == "in"))
      fail("expected 'in' in for loop");
    advance();
    RPtr seq = expr(0);
    expect_punct(")");
    --group_depth_;
    skip_newlines();
    RPtr body = expr(0);
    return r_call(r_sym("for"), {{"", std::move(var)},
                                 {"", std::move(seq)},
                                 {"", std::move(body)}});
  }

  RPtr function_expr(const Token& kw) {
    size_t src_from = kw.begin;
    skip_newlines();
    expect_punct("(");
    ++group_depth_;
    std::vector<NamedExpr> formals;  // name -> default (or missing marker)
    if (!is_punct(cur(), ")")) {
      while (true) {
        const Token& nm = cur();
        if (nm.kind != TokKind::Symbol && nm.kind != TokKind::BacktickSymbol)
          unexpected();
        std::string name = nm.text;
        advance();
        RPtr deflt = nullptr;
        if (is_op(cur(), "=")) {
          advance();
          skip_newlines();
          deflt = expr(0);
        }
        formals.push_back({std::move(name), std::move(deflt)});
        if (is_punct(cur(), ",")) {
          advance();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    --group_depth_;
    skip_newlines();
    RPtr body = expr(0);
    // `function` parses into a call whose operands are the formal list and
    // the body; closure construction happens at evaluation time.
    std::vector<NamedExpr> args;
    for (auto& f : formals)
      args.push_back({f.name, f.expr ? f.expr : r_sym("")});
    args.push_back({"", std::move(body)});
    RPtr node = r_call(r_sym("function"), std::move(args));
    // remember the source slice for closure printing; a trailing comment on
    // the closing line belongs to the definition
    size_t src_to = last_consumed_end();
    {
      size_t probe = src_to;
      while (probe < src_.size() && (src_[probe] == ' ' || src_[probe] == '\t'))
        ++probe;
      if (probe < src_.size() && src_[probe] == '#') {
        while (probe < src_.size() && src_[probe] != '\n') ++probe;
        src_to = probe;
      }
    }
    if (src_from != std::string::npos && src_to > src_from) {
      auto copy = std::make_shared<RObject>(*node);
      copy->attrs.emplace_back("__src__",
                               scalar_str(src_.substr(src_from, src_to - src_from)));
      return copy;
    }
    return node;
  }

  size_t last_consumed_end() const {
    return pos_ == 0 ? 0 : toks_[pos_ - 1].end;
  }

  RPtr finish_call(RPtr fn) {
    expect_punct("(");
    ++group_depth_;
    std::vector<NamedExpr> args = arg_list(")");
    expect_punct(")");
    --group_depth_;
    return r_call(std::move(fn), std::move(args));
  }

  RPtr finish_index(RPtr obj, const char* op, int closers) {
    advance();  // [ or [[
    ++group_depth_;
    std::vector<NamedExpr> args = arg_list("]");
    for (int i = 0; i < closers; ++i) expect_punct("]");
    --group_depth_;
    std::vector<NamedExpr> all;
    all.push_back({"", std::move(obj)});
    for (auto& a : args) all.push_back(std::move(a));
    return r_call(r_sym(op), std::move(all));
  }

  std::vector<NamedExpr> arg_list(const char* closer) {
    std::vector<NamedExpr> args;
    if (is_punct(cur(), closer)) return args;
    while (true) {
      if (is_punct(cur(), ",")) {
        // empty argument
        args.push_back({"", r_sym("")});
        advance();
        continue;
      }
      if (is_punct(cur(), closer)) {
        if (!args.empty()) args.push_back({"", r_sym("")});
        break;
      }
      std::string name;
      // name = value?
      const Token& t = cur();
      if ((t.kind == TokKind::Symbol || t.kind == TokKind::BacktickSymbol ||
           t.kind == TokKind::String ||
           (t.kind == TokKind::Keyword &&
            (t.text == "NULL" || t.text == "TRUE" || t.text == "FALSE" ||
             t.text == "NA" || t.text == "Inf" || t.text == "NaN")))) {
        size_t save = pos_;
        Token nm = advance();
        if (is_op(cur(), "=")) {
          advance();
          skip_newlines();
          name = nm.text;
          if (is_punct(cur(), ",") || is_punct(cur(), closer)) {
            args.push_back({name, r_sym("")});
          } else {
            args.push_back({name, expr(0)});
          }
        } else {
          pos_ = save;
          args.push_back({"", expr(0)});
        }
      } else {
        args.push_back({"", expr(0)});
      }
      if (is_punct(cur(), ",")) {
        advance();
        continue;
      }
      break;
    }
    return args;
  }

  // `lhs |> f(args)`  ==>  `f(lhs, args)`; `_` placeholder consumes the left
  // side at one named argument instead.
  RPtr desugar_pipe_stage(RPtr lhs, RPtr rhs) {
    if (rhs->type() != Type::Call || is_sym_named(*call(*rhs).fn, "(")) {
      const Token& t = peek_raw();
      throw SyntaxError{"The pipe operator requires a function call as RHS",
                        t.line, t.col, false};
    }
    const CallData& c = call(*rhs);
    int placeholder_count = 0;
    for (const auto& a : c.args)
      if (a.expr && is_sym_named(*a.expr, "_")) ++placeholder_count;
    if (placeholder_count > 1) {
      const Token& t = peek_raw();
      throw SyntaxError{"pipe placeholder may only appear once", t.line, t.col,
                        false};
    }
    if (placeholder_count == 1) {
      std::vector<NamedExpr> args;
      for (const auto& a : c.args) {
        if (a.expr && is_sym_named(*a.expr, "_")) {
          if (a.name.empty()) {
            const Token& t = peek_raw();
            throw SyntaxError{
                "pipe placeholder can only be used as a named argument",
                t.line, t.col, false};
          }
          args.push_back({a.name, lhs});
        } else {
          args.push_back(a);
        }
      }
      return r_call(c.fn, std::move(args));
    }
    std::vector<NamedExpr> args;
    args.push_back({"", std::move(lhs)});
    for (const auto& a : c.args) args.push_back(a);
    return r_call(c.fn, std::move(args));
  }
};

}  // namespace

ParseResult parse_program(const std::string& source) {
  ParseResult res;
  try {
    std::vector<Token> toks = tokenize(source);
    Parser p(std::move(toks), source);
    res.exprs = p.program();
  } catch (const SyntaxError& e) {
    res.incomplete = e.incomplete;
    res.error = e.msg;
    res.line = e.line;
    res.col = e.col;
  }
  return res;
}

}  // namespace deepr
