#include "deepr/deparse.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace deepr {

namespace {

// precedence mirror of the parser; higher binds tighter
struct OpDesc {
  int prec;
  bool right_assoc;
  bool spaced;
};

const std::unordered_map<std::string, OpDesc>& binary_ops() {
  static const std::unordered_map<std::string, OpDesc> t = {
      {"?", {2, false, true}},    {"<-", {6, true, true}},
      {"<<-", {6, true, true}},   {"~", {8, false, true}},    {"||", {10, false, true}},
      {"|", {10, false, true}},   {"&&", {12, false, true}},
      {"&", {12, false, true}},   {"<", {16, false, true}},
      {">", {16, false, true}},   {"<=", {16, false, true}},
      {">=", {16, false, true}},  {"==", {16, false, true}},
      {"!=", {16, false, true}},  {"+", {18, false, true}},
      {"-", {18, false, true}},   {"*", {20, false, true}},
      {"/", {20, false, false}},   {"%%", {22, false, false}},
      {"%/%", {22, false, false}},{":", {24, false, false}},
      {"^", {28, true, false}},   {"::", {32, false, false}},
      {":::", {32, false, false}},
  };
  return t;
}

bool is_user_binop(const std::string& s) {
  return s.size() >= 2 && s.front() == '%' && s.back() == '%';
}

const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> t = {
      "if",    "else", "repeat", "while",    "function", "for",
      "in",    "next", "break",  "TRUE",     "FALSE",    "NULL",
      "Inf",   "NaN",  "NA",     "NA_integer_", "NA_real_",
      "NA_character_"};
  return t;
}

class Deparser {
 public:
  std::vector<std::string> run(const RObject& e) {
    std::vector<std::string> out;
    render(e, 0, out, "");
    return out;
  }

 private:
  // appends rendered lines for `e`; `head` is prefix text for the first line
  void render(const RObject& e, int prec, std::vector<std::string>& out,
              std::string head, int indent = 0) {
    std::string pad(indent, ' ');
    if (e.type() != Type::Call) {
      out.push_back(pad + head + atom(e, prec));
      return;
    }
    const CallData& c = call(e);
    const std::string fname =
        c.fn->type() == Type::Sym ? sym(*c.fn).name : "";

    if (fname == "{") {
      out.push_back(pad + head + "{");
      for (const auto& a : c.args)
        render(*a.expr, 0, out, "", indent + 4);
      out.push_back(pad + "}");
      return;
    }
    if (fname == "if" && (c.args.size() == 2 || c.args.size() == 3)) {
      std::string first =
          pad + head + "if (" + inline_expr(*c.args[0].expr, 0) + ") ";
      bool then_block = is_block(*c.args[1].expr);
      bool else_block = c.args.size() == 3 && is_block(*c.args[2].expr);
      if (!then_block && !else_block) {
        std::string line = first + inline_expr(*c.args[1].expr, 0);
        if (c.args.size() == 3)
          line += " else " + inline_expr(*c.args[2].expr, 0);
        out.push_back(line);
        return;
      }
      // block branches span lines
      if (then_block) {
        std::vector<std::string> body;
        render(*c.args[1].expr, 0, body, "", indent);
        body.front() = first + body.front().substr(indent);
        if (c.args.size() == 3) {
          std::string& last = body.back();
          last += " else ";
          if (else_block) {
            std::vector<std::string> eb;
            render(*c.args[2].expr, 0, eb, "", indent);
            last += eb.front().substr(indent);
            for (size_t i = 1; i < eb.size(); ++i) body.push_back(eb[i]);
          } else {
            last += inline_expr(*c.args[2].expr, 0);
          }
        }
        for (auto& l : body) out.push_back(l);
      } else {
        out.push_back(first + inline_expr(*c.args[1].expr, 0) + " else {");
        std::vector<std::string> eb;
        render(*c.args[2].expr, 0, eb, "", indent);
        for (size_t i = 1; i + 1 < eb.size(); ++i) out.push_back(eb[i]);
        out.push_back(pad + "}");
      }
      return;
    }
    if (fname == "while" && c.args.size() == 2) {
      std::string first =
          pad + head + "while (" + inline_expr(*c.args[0].expr, 0) + ") ";
      attach_body(first, *c.args[1].expr, indent, out);
      return;
    }
    if (fname == "for" && c.args.size() == 3) {
      std::string first = pad + head + "for (" +
                          inline_expr(*c.args[0].expr, 0) + " in " +
                          inline_expr(*c.args[1].expr, 0) + ") ";
      attach_body(first, *c.args[2].expr, indent, out);
      return;
    }
    if (fname == "repeat" && c.args.size() == 1) {
      std::string first = pad + head + "repeat ";
      attach_body(first, *c.args[0].expr, indent, out);
      return;
    }
    if (fname == "function" && !c.args.empty()) {
      std::string hdr = "function(";
      for (size_t i = 0; i + 1 < c.args.size(); ++i) {
        if (i) hdr += ", ";
        hdr += maybe_backtick(c.args[i].name);
        if (!is_sym_named(*c.args[i].expr, ""))
          hdr += " = " + inline_expr(*c.args[i].expr, 0);
      }
      hdr += ") ";
      attach_body(pad + head + hdr, *c.args.back().expr, indent, out);
      return;
    }
    // all remaining forms are single-line unless a block argument appears
    out.push_back(pad + head + inline_expr(e, prec));
  }

  void attach_body(std::string first, const RObject& body, int indent,
                   std::vector<std::string>& out) {
    if (is_block(body)) {
      std::vector<std::string> lines;
      render(body, 0, lines, "", indent);
      lines.front() = first + lines.front().substr(indent);
      for (auto& l : lines) out.push_back(l);
    } else {
      out.push_back(first + inline_expr(body, 0));
    }
  }

  bool is_block(const RObject& e) {
    return e.type() == Type::Call && is_sym_named(*call(e).fn, "{");
  }

  std::string inline_expr(const RObject& e, int prec) {
    if (e.type() != Type::Call) return atom(e, prec);
    const CallData& c = call(e);
    const std::string fname =
        c.fn->type() == Type::Sym ? sym(*c.fn).name : "";

    // multi-line constructs flattened with single spaces when forced inline
    if (fname == "{" || fname == "function" || fname == "if" ||
        fname == "while" || fname == "for" || fname == "repeat") {
      std::vector<std::string> lines;
      render(e, 0, lines, "");
      std::string joined;
      for (size_t i = 0; i < lines.size(); ++i) {
        if (i) joined += " ";
        // strip indentation when flattening
        size_t k = lines[i].find_first_not_of(' ');
        joined += k == std::string::npos ? "" : lines[i].substr(k);
      }
      return joined;
    }
    if (fname == "(" && c.args.size() == 1)
      return "(" + inline_expr(*c.args[0].expr, 0) + ")";
    if (fname == "[" && !c.args.empty()) {
      std::string s = inline_expr(*c.args[0].expr, 34);
      s += "[";
      s += arg_list(c.args, 1);
      s += "]";
      return s;
    }
    if (fname == "[[" && !c.args.empty()) {
      std::string s = inline_expr(*c.args[0].expr, 34);
      s += "[[";
      s += arg_list(c.args, 1);
      s += "]]";
      return s;
    }
    if ((fname == "$" || fname == "@") && c.args.size() == 2) {
      std::string rhs;
      const RObject& r = *c.args[1].expr;
      if (r.type() == Type::Sym)
        rhs = maybe_backtick(sym(r).name);
      else
        rhs = inline_expr(r, 34);
      return inline_expr(*c.args[0].expr, 34) + fname + rhs;
    }
    if (c.args.size() == 2 && c.fn->type() == Type::Sym) {
      auto it = binary_ops().find(fname);
      if (it != binary_ops().end()) {
        const OpDesc& d = it->second;
        int lp = d.right_assoc ? d.prec + 1 : d.prec;
        int rp = d.right_assoc ? d.prec : d.prec + 1;
        std::string sep = d.spaced ? " " : "";
        std::string s = inline_expr(*c.args[0].expr, lp) + sep + fname + sep +
                        inline_expr(*c.args[1].expr, rp);
        if (d.prec < prec) s = "(" + s + ")";
        return s;
      }
      if (is_user_binop(fname)) {
        std::string s = inline_expr(*c.args[0].expr, 22) + " " + fname + " " +
                        inline_expr(*c.args[1].expr, 23);
        if (22 < prec) s = "(" + s + ")";
        return s;
      }
    }
    if (c.args.size() == 1 && c.fn->type() == Type::Sym &&
        (fname == "-" || fname == "+" || fname == "!" || fname == "~" ||
         fname == "?")) {
      int up = fname == "!" ? 14 : fname == "~" ? 8 : fname == "?" ? 2 : 26;
      // a prefix child re-parses greedily, so it never needs brackets
      const RObject& child = *c.args[0].expr;
      bool child_prefix =
          child.type() == Type::Call && call(child).args.size() == 1 &&
          call(child).fn->type() == Type::Sym &&
          (is_sym_named(*call(child).fn, "-") ||
           is_sym_named(*call(child).fn, "+") ||
           is_sym_named(*call(child).fn, "!") ||
           is_sym_named(*call(child).fn, "~"));
      std::string s =
          fname + inline_expr(child, child_prefix ? 0 : up);
      if (up < prec) s = "(" + s + ")";
      return s;
    }
    // ordinary call
    std::string fn;
    if (c.fn->type() == Type::Sym) {
      const std::string& nm = sym(*c.fn).name;
      // operators used with unusual arity print in backtick form
      fn = maybe_backtick(nm);
    } else if (c.fn->type() == Type::Call &&
               is_sym_named(*call(*c.fn).fn, "function")) {
      fn = "(" + inline_expr(*c.fn, 0) + ")";
    } else if (c.fn->type() == Type::Closure || c.fn->type() == Type::Builtin) {
      fn = "(" + atom(*c.fn, 0) + ")";
    } else {
      fn = inline_expr(*c.fn, 34);
    }
    return fn + "(" + arg_list(c.args, 0) + ")";
  }

  std::string arg_list(const std::vector<NamedExpr>& args, size_t from) {
    std::string s;
    for (size_t i = from; i < args.size(); ++i) {
      if (i > from) s += ", ";
      if (!args[i].name.empty())
        s += maybe_backtick(args[i].name) + " = ";
      s += inline_expr(*args[i].expr, 0);
    }
    return s;
  }

  std::string atom(const RObject& e, int prec) {
    switch (e.type()) {
      case Type::Null: return "NULL";
      case Type::Sym: {
        const std::string& n = sym(e).name;
        return n.empty() ? "" : maybe_backtick(n);
      }
      case Type::Lgl: return vector_literal(e);
      case Type::Int: return vector_literal(e);
      case Type::Real: {
        std::string s = vector_literal(e);
        if (!s.empty() && s[0] == '-' && prec > 18) return "(" + s + ")";
        return s;
      }
      case Type::Str: return vector_literal(e);
      case Type::List: return vector_literal(e);
      case Type::Closure: {
        std::vector<std::string> lines = deparse_closure(*closure(e));
        std::string joined;
        for (size_t i = 0; i < lines.size(); ++i) {
          if (i) joined += " ";
          joined += lines[i];
        }
        return joined;
      }
      case Type::Builtin:
        return ".Primitive(\"" + builtin(e)->name + "\")";
      case Type::Env: return "<environment>";
      case Type::Expr: {
        std::string s = "expression(";
        const auto& items = expr_items(e);
        for (size_t i = 0; i < items.size(); ++i) {
          if (i) s += ", ";
          s += inline_expr(*items[i], 0);
        }
        return s + ")";
      }
      default: return "<" + type_of(e) + ">";
    }
  }

  std::string scalar_literal(const RObject& e, size_t i) {
    switch (e.type()) {
      case Type::Lgl: {
        int8_t v = lgl(e)[i];
        return v == na::LGL ? "NA" : v ? "TRUE" : "FALSE";
      }
      case Type::Int: {
        int32_t v = ints(e)[i];
        return v == na::INT ? "NA_integer_" : int_to_string(v) + "L";
      }
      case Type::Real: {
        double v = reals(e)[i];
        if (na::is_na_real(v)) return "NA_real_";
        return real_to_string(v);
      }
      case Type::Str: {
        const RString& s = strs(e)[i];
        return s ? "\"" + escape_string(*s) + "\"" : "NA_character_";
      }
      default: return "?";
    }
  }

  std::string vector_literal(const RObject& e) {
    size_t n = e.length();
    RPtr nm = names_of(e);
    if (e.type() == Type::List) {
      std::string s = "list(";
      for (size_t i = 0; i < n; ++i) {
        if (i) s += ", ";
        if (nm && strs(*nm)[i] && !strs(*nm)[i]->empty())
          s += maybe_backtick(*strs(*nm)[i]) + " = ";
        s += atom(*list_items(e)[i], 0);
      }
      return s + ")";
    }
    if (n == 1 && !nm) {
      // bare NA renders as plain NA for logicals only
      return scalar_literal(e, 0);
    }
    // integer runs render compactly as from:to
    if (e.type() == Type::Int && !nm && n >= 2) {
      bool run = true;
      for (size_t i = 0; i < n; ++i) {
        if (ints(e)[i] == na::INT ||
            (i > 0 && ints(e)[i] != ints(e)[i - 1] + 1)) {
          run = false;
          break;
        }
      }
      if (run)
        return int_to_string(ints(e)[0]) + ":" +
               int_to_string(ints(e)[n - 1]);
    }
    std::string s = "c(";
    for (size_t i = 0; i < n; ++i) {
      if (i) s += ", ";
      if (nm && strs(*nm)[i] && !strs(*nm)[i]->empty())
        s += maybe_backtick(*strs(*nm)[i]) + " = ";
      s += scalar_literal(e, i);
    }
    if (n == 0) {
      switch (e.type()) {
        case Type::Lgl: return "logical(0)";
        case Type::Int: return "integer(0)";
        case Type::Real: return "numeric(0)";
        case Type::Str: return "character(0)";
        default: break;
      }
    }
    return s + ")";
  }
};

}  // namespace

std::string escape_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\a': out += "\\a"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\v': out += "\\v"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\%03o", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

bool is_syntactic_name(const std::string& s) {
  if (s.empty()) return false;
  if (reserved_words().count(s)) return false;
  unsigned char c0 = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(c0) || s[0] == '.' || c0 >= 0x80)) return false;
  if (s[0] == '.' && s.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(s[1])))
    return false;
  for (size_t i = 1; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!(std::isalnum(c) || s[i] == '.' || s[i] == '_' || c >= 0x80))
      return false;
  }
  return true;
}

std::string maybe_backtick(const std::string& s) {
  if (is_syntactic_name(s)) return s;
  return "`" + s + "`";
}

std::vector<std::string> deparse_lines(const RObject& e) {
  return Deparser().run(e);
}

std::string deparse1(const RObject& e) {
  std::vector<std::string> lines = deparse_lines(e);
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i) out += " ";
    size_t k = lines[i].find_first_not_of(' ');
    out += k == std::string::npos ? "" : lines[i].substr(k);
  }
  return out;
}

RPtr strip_src(RPtr e) {
  if (!e) return e;
  if (e->type() == Type::Call) {
    const CallData& c = call(*e);
    std::vector<NamedExpr> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back({a.name, strip_src(a.expr)});
    return r_call(strip_src(c.fn), std::move(args));
  }
  if (e->type() == Type::Expr) {
    std::vector<RPtr> items;
    for (const auto& i : expr_items(*e)) items.push_back(strip_src(i));
    return r_expr(std::move(items));
  }
  return e;
}

std::vector<std::string> deparse_closure(const RClosure& c) {
  std::string hdr = "function (";
  for (size_t i = 0; i < c.formals.size(); ++i) {
    if (i) hdr += ", ";
    hdr += maybe_backtick(c.formals[i].name);
    if (c.formals[i].default_expr)
      hdr += " = " + deparse1(*c.formals[i].default_expr);
  }
  hdr += ")";
  std::vector<std::string> out;
  out.push_back(hdr);
  std::vector<std::string> body = deparse_lines(*c.body);
  for (auto& l : body) out.push_back(l);
  return out;
}

}  // namespace deepr
