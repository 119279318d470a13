// Strings, output, language-object manipulation, functional programming
// helpers, options, and the R-level prelude.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "builtins_support.hpp"
#include "deepr/deparse.hpp"
#include "deepr/indexing.hpp"
#include "deepr/printer.hpp"
#include "deepr/vecops.hpp"

namespace deepr {

namespace {

// number of UTF-8 code points
int32_t utf8_count(const std::string& s) {
  int32_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string cat_render(Interp& in, const RObject& v, size_t i) {
  switch (v.type()) {
    case Type::Lgl: {
      int8_t e = lgl(v)[i];
      return e == na::LGL ? "NA" : e ? "TRUE" : "FALSE";
    }
    case Type::Int: {
      int32_t e = ints(v)[i];
      return e == na::INT ? "NA" : int_to_string(e);
    }
    case Type::Real: return format_real_element(reals(v)[i], in.opt_digits);
    case Type::Str: {
      const RString& s = strs(v)[i];
      return s ? *s : "NA";
    }
    default: return "";
  }
}

// elements of `...` arguments flattened for paste()/cat()
struct FlatArg {
  const RObject* obj;
  size_t len;
};

RPtr paste_impl(Interp& in, BuiltinCall& bc, const std::string& sep,
                RPtr collapse) {
  std::vector<RPtr> parts;
  for (const auto& d : bc.dots) {
    if (!d.second || d.second->type() == Type::Null) continue;
    if (d.second->type() == Type::List) {
      for (const auto& e : list_items(*d.second))
        parts.push_back(coerce(in, *e, Type::Str));
    } else {
      parts.push_back(coerce(in, *d.second, Type::Str));
    }
  }
  size_t out_len = 0;
  for (auto& p : parts) out_len = std::max(out_len, p->length());
  if (parts.empty()) out_len = 0;
  bool drop_empty = false;
  for (auto& p : parts)
    if (p->length() == 0) drop_empty = true;
  if (drop_empty && parts.size() == 1) out_len = 0;

  StrVec out;
  for (size_t i = 0; i < out_len; ++i) {
    std::string s;
    bool first = true;
    for (auto& p : parts) {
      if (p->length() == 0) continue;
      const RString& e = strs(*p)[i % p->length()];
      if (!first) s += sep;
      s += e ? *e : "NA";
      first = false;
    }
    out.push_back(rstring(s));
  }
  if (collapse && collapse->type() == Type::Str && strs(*collapse)[0]) {
    std::string cs = *strs(*collapse)[0];
    std::string joined;
    for (size_t i = 0; i < out.size(); ++i) {
      if (i) joined += cs;
      joined += *out[i];
    }
    return scalar_str(joined);
  }
  return r_str(std::move(out));
}

std::string sprintf_one(Interp& in, const std::string& fmt,
                        const std::vector<RPtr>& args, size_t elem) {
  std::string out;
  size_t ai = 0;
  auto next_arg = [&](size_t* which) -> const RObject* {
    size_t k = *which != 0 ? *which - 1 : ai++;
    if (k >= args.size()) in.error("too few arguments");
    return args[k].get();
  };
  size_t i = 0;
  while (i < fmt.size()) {
    char c = fmt[i++];
    if (c != '%') {
      out += c;
      continue;
    }
    if (i < fmt.size() && fmt[i] == '%') {
      out += '%';
      ++i;
      continue;
    }
    std::string spec = "%";
    size_t which = 0;
    // positional like %1$s
    size_t save = i;
    std::string digits;
    while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i])))
      digits += fmt[i++];
    if (!digits.empty() && i < fmt.size() && fmt[i] == '$') {
      which = static_cast<size_t>(std::stoul(digits));
      ++i;
    } else {
      i = save;
    }
    while (i < fmt.size() && std::strchr("-+ 0#", fmt[i])) spec += fmt[i++];
    while (i < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[i])))
      spec += fmt[i++];
    if (i < fmt.size() && fmt[i] == '.') {
      spec += fmt[i++];
      if (i < fmt.size() && fmt[i] == '*') {
        ++i;
        const RObject* a = next_arg(&which);
        which = 0;
        spec += std::to_string(
            static_cast<long>(element_as_double(*a, elem % a->length())));
      } else {
        while (i < fmt.size() &&
               std::isdigit(static_cast<unsigned char>(fmt[i])))
          spec += fmt[i++];
      }
    }
    if (i >= fmt.size()) in.error("invalid format string");
    char conv = fmt[i++];
    char buf[256];
    const RObject* a;
    switch (conv) {
      case 'd': case 'i': {
        a = next_arg(&which);
        double v = element_as_double(*a, elem % a->length());
        if (std::isnan(v)) { out += "NA"; break; }
        spec += "lld";
        std::snprintf(buf, sizeof buf, spec.c_str(),
                      static_cast<long long>(v));
        out += buf;
        break;
      }
      case 'f': case 'e': case 'g': case 'E': case 'G': {
        a = next_arg(&which);
        double v = element_as_double(*a, elem % a->length());
        if (na::is_na_real(v)) { out += "NA"; break; }
        spec += conv;
        std::snprintf(buf, sizeof buf, spec.c_str(), v);
        out += buf;
        break;
      }
      case 'x': case 'X': case 'o': {
        a = next_arg(&which);
        double v = element_as_double(*a, elem % a->length());
        spec += "ll";
        spec += conv;
        std::snprintf(buf, sizeof buf, spec.c_str(),
                      static_cast<long long>(v));
        out += buf;
        break;
      }
      case 's': {
        a = next_arg(&which);
        std::string s;
        if (a->type() == Type::Str) {
          const RString& e = strs(*a)[elem % a->length()];
          s = e ? *e : "NA";
        } else {
          s = cat_render(in, *a, elem % a->length());
        }
        spec += 's';
        if (spec == "%s") {
          out += s;
        } else {
          std::snprintf(buf, sizeof buf, spec.c_str(), s.c_str());
          out += buf;
        }
        break;
      }
      default:
        in.error(std::string("unsupported format specifier '%") + conv + "'");
    }
  }
  return out;
}

RPtr quote_arg(BuiltinCall& bc, size_t i) {
  return bc.raw && i < bc.raw->size() ? (*bc.raw)[i].expr : nullptr;
}

RPtr substitute_walk(Interp& in, RPtr e, Environment* frame, bool use_values) {
  if (!e) return e;
  if (e->type() == Type::Sym) {
    const std::string& name = sym(*e).name;
    if (name.empty() || name == "...") return e;
    const Binding* b = frame->find_local(name);
    if (!b) return e;
    if (b->promise) {
      if (b->promise->expr) return b->promise->expr;
      return b->promise->value ? b->promise->value : e;
    }
    return b->value ? b->value : e;
  }
  if (e->type() == Type::Call) {
    const CallData& c = call(*e);
    std::vector<NamedExpr> args;
    for (const auto& a : c.args)
      args.push_back({a.name, substitute_walk(in, a.expr, frame, use_values)});
    // the head symbol is substituted only when bound to a language object
    RPtr fn = c.fn;
    if (fn->type() == Type::Sym) {
      const Binding* b = frame->find_local(sym(*fn).name);
      if (b && b->promise && b->promise->expr) fn = b->promise->expr;
    } else {
      fn = substitute_walk(in, fn, frame, use_values);
    }
    return r_call(fn, std::move(args));
  }
  return e;
}

}  // namespace

void register_string_builtins(Interp& in) {
  reg(in, "paste", "(..., sep = \" \", collapse = NULL)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string sep = bc.arg[1] ? scalar_string(I, bc.arg[1], "sep") : " ";
    return paste_impl(I, bc, sep, bc.arg[2]);
  });

  reg(in, "paste0", "(..., collapse = NULL)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    return paste_impl(I, bc, "", bc.arg[1]);
  });

  reg(in, "nchar", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr s = x->type() == Type::Str ? x : coerce(I, *x, Type::Str);
    IntVec out(s->length());
    for (size_t i = 0; i < s->length(); ++i) {
      const RString& e = strs(*s)[i];
      out[i] = e ? utf8_count(*e) : na::INT;
    }
    return r_int(std::move(out));
  });

  reg(in, "sprintf", "(fmt, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr fmtv = bc.arg[0];
    if (!fmtv || fmtv->type() != Type::Str)
      I.error("'fmt' is not a character vector");
    std::vector<RPtr> args;
    size_t out_len = fmtv->length();
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      args.push_back(d.second);
      out_len = std::max(out_len, d.second->length());
    }
    for (auto& a : args)
      if (a->length() == 0) out_len = 0;
    StrVec out(out_len);
    for (size_t i = 0; i < out_len; ++i) {
      const RString& f = strs(*fmtv)[i % fmtv->length()];
      if (!f) {
        out[i] = nullptr;
        continue;
      }
      out[i] = rstring(sprintf_one(I, *f, args, i));
    }
    return r_str(std::move(out));
  });

  reg(in, "format", "(x, digits = NULL, nsmall = 0)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    int digits = I.opt_digits;
    if (bc.arg[1] && bc.arg[1]->type() != Type::Null)
      digits = static_cast<int>(scalar_double(I, bc.arg[1], "digits"));
    if (x->type() == Type::Env) {
      std::ostringstream os;
      print_value(I, *x, os);
      std::string s = os.str();
      if (!s.empty() && s.back() == '\n') s.pop_back();
      return scalar_str(s);
    }
    if (x->type() == Type::Real) {
      RealFormat f = plan_real_format(reals(*x), digits);
      StrVec out;
      for (double v : reals(*x)) out.push_back(rstring(format_real(v, f)));
      RPtr res = r_str(std::move(out));
      if (RPtr nm = names_of(*x)) res = set_attr_raw(res, "names", nm);
      return res;
    }
    RPtr s = coerce(I, *x, Type::Str);
    StrVec out;
    size_t w = 0;
    for (const auto& e : strs(*s)) w = std::max(w, e ? e->size() : 2);
    for (const auto& e : strs(*s)) {
      std::string t = e ? *e : "NA";
      if (x->type() != Type::Str) {
        out.push_back(rstring(std::string(w - t.size(), ' ') + t));
      } else {
        t.resize(std::max(t.size(), w), ' ');
        out.push_back(rstring(t));
      }
    }
    RPtr res = r_str(std::move(out));
    if (RPtr nm = names_of(*x)) res = set_attr_raw(res, "names", nm);
    return res;
  });

  reg(in, "cat", "(..., sep = \" \")", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string sep = bc.arg[1] ? scalar_string(I, bc.arg[1], "sep") : " ";
    bool first = true;
    for (const auto& d : bc.dots) {
      if (!d.second || d.second->type() == Type::Null) continue;
      const RObject& v = *d.second;
      if (!is_atomic(v) && v.type() != Type::Sym && v.type() != Type::Env)
        I.error("argument of type '" + type_of(v) +
                "' cannot be handled by 'cat'");
      if (v.type() == Type::Sym) {
        if (!first) I.write(sep);
        I.write(sym(v).name);
        first = false;
        continue;
      }
      if (v.type() == Type::Env) {
        std::ostringstream os;
        print_value(I, v, os);
        std::string s = os.str();
        if (!s.empty() && s.back() == '\n') s.pop_back();
        if (!first) I.write(sep);
        I.write(s);
        first = false;
        continue;
      }
      for (size_t i = 0; i < v.length(); ++i) {
        if (!first) I.write(sep);
        I.write(cat_render(I, v, i));
        first = false;
      }
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  reg(in, "print", "(x, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    int save_digits = I.opt_digits;
    for (const auto& d : bc.dots)
      if (d.first == "digits" && d.second)
        I.opt_digits = static_cast<int>(scalar_double(I, d.second, "digits"));
    I.fresh_line();
    print_value(I, *x, *I.out);
    I.at_line_start = true;
    I.opt_digits = save_digits;
    I.visible = false;
    return x;
  }, kInvisible);

  reg(in, "print.default", "(x, digits = NULL, ...)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    int save_digits = I.opt_digits;
    if (bc.arg[1] && bc.arg[1]->type() != Type::Null)
      I.opt_digits = static_cast<int>(scalar_double(I, bc.arg[1], "digits"));
    I.fresh_line();
    print_value(I, *x, *I.out);
    I.at_line_start = true;
    I.opt_digits = save_digits;
    I.visible = false;
    return x;
  }, kInvisible);
}

void register_meta_builtins(Interp& in) {
  // --- quoting and substitution ---------------------------------------------
  reg_special(in, "quote", "(expr)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    I.visible = true;
    RPtr e = quote_arg(bc, 0);
    return e ? strip_src(e) : r_null();
  }, kVisible);

  reg_special(in, "expression", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::vector<RPtr> items;
    if (bc.raw)
      for (const auto& a : *bc.raw) items.push_back(strip_src(a.expr));
    I.visible = true;
    return r_expr(std::move(items));
  }, kVisible);

  reg_special(in, "substitute", "(expr, env)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    I.visible = true;
    RPtr e = quote_arg(bc, 0);
    if (!e) return r_null();
    e = strip_src(e);
    RPtr env_arg = quote_arg(bc, 1);
    if (env_arg) {
      RPtr ev = I.eval(env_arg, bc.env);
      if (ev->type() == Type::Env)
        return substitute_walk(I, e, envref(*ev).get(), true);
      if (ev->type() == Type::List) {
        auto fake = std::make_shared<Environment>(nullptr);
        RPtr nm = names_of(*ev);
        if (nm) {
          const auto& items = list_items(*ev);
          for (size_t i = 0; i < items.size(); ++i)
            if (strs(*nm)[i]) fake->set(*strs(*nm)[i], items[i]);
        }
        return substitute_walk(I, e, fake.get(), true);
      }
      I.error("invalid environment specified");
    }
    if (bc.env == I.global_env) return e;
    return substitute_walk(I, e, bc.env.get(), true);
  }, kVisible);

  reg_special(in, "missing", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    I.visible = true;
    RPtr e = quote_arg(bc, 0);
    if (!e || e->type() != Type::Sym)
      I.error("invalid use of 'missing'");
    Binding* b = bc.env->find_local(sym(*e).name);
    if (!b) I.error("'missing' can only be used for arguments");
    if (b->promise && b->promise->missing_origin && !b->promise->value)
      return r_true();
    return r_false();
  }, kVisible);

  reg(in, "deparse", "(expr)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr e = bc.arg[0] ? bc.arg[0] : r_null();
    std::vector<std::string> lines = deparse_lines(*e);
    StrVec out;
    for (auto& l : lines) out.push_back(rstring(l));
    return r_str(std::move(out));
  });

  reg(in, "parse", "(file = \"\", text = NULL)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[1] || bc.arg[1]->type() == Type::Null)
      I.error("parse: only text= input is supported");
    RPtr t = coerce(I, *bc.arg[1], Type::Str);
    std::string src;
    for (size_t i = 0; i < t->length(); ++i) {
      if (i) src += "\n";
      if (strs(*t)[i]) src += *strs(*t)[i];
    }
    ParseResult pr = parse_program(src);
    if (!pr.error.empty()) {
      std::string near;
      std::istringstream is(src);
      std::string line;
      for (int k = 1; std::getline(is, line); ++k)
        if (k + 1 == pr.line || k == pr.line) {
          if (!near.empty()) near += " ";
          near += std::to_string(k) + ": " + line;
        }
      I.error("<text>:" + std::to_string(pr.line) + ":" +
              std::to_string(pr.col) + ": " + pr.error +
              (near.empty() ? "" : " " + near + " ^"));
    }
    std::vector<RPtr> items;
    for (auto& e : pr.exprs) items.push_back(strip_src(e));
    return r_expr(std::move(items));
  });

  reg(in, "eval", "(expr, envir = NULL)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr e = bc.arg[0] ? bc.arg[0] : r_null();
    EnvPtr env = bc.env;
    if (bc.arg[1] && bc.arg[1]->type() != Type::Null) {
      if (bc.arg[1]->type() == Type::Env) {
        env = envref(*bc.arg[1]);
      } else if (bc.arg[1]->type() == Type::List) {
        auto fresh = std::make_shared<Environment>(bc.env);
        RPtr nm = names_of(*bc.arg[1]);
        const auto& items = list_items(*bc.arg[1]);
        for (size_t i = 0; i < items.size(); ++i)
          if (nm && strs(*nm)[i]) fresh->set(*strs(*nm)[i], items[i]);
        env = fresh;
      } else {
        I.error("invalid 'envir' argument");
      }
    }
    if (e->type() == Type::Expr) {
      RPtr result = r_null();
      for (const auto& item : expr_items(*e)) result = I.eval(item, env);
      return result;
    }
    if (e->type() == Type::Sym || e->type() == Type::Call)
      return I.eval(e, env);
    return e;
  }, kPassthrough);

  reg_special(in, "evalq", "(expr, envir = NULL)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr e = quote_arg(bc, 0);
    EnvPtr env = bc.env;
    if (bc.raw && bc.raw->size() >= 2) {
      RPtr ev = I.eval(quote_arg(bc, 1), bc.env);
      if (ev->type() == Type::Env) env = envref(*ev);
    }
    return I.eval(e, env);
  });

  reg(in, "body", "(fun)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Closure)
      I.error("argument is not a function");
    return closure(*bc.arg[0])->body;
  });

  reg(in, "body<-", "(fun, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Closure)
      I.error("argument is not a function");
    auto c = std::make_shared<RClosure>(*closure(*bc.arg[0]));
    c->body = bc.arg[1] ? bc.arg[1] : r_null();
    c->src.clear();
    return r_closure(c);
  });

  reg(in, "formals", "(fun)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr f = bc.arg[0];
    if (!f) I.error("argument \"fun\" is missing, with no default");
    if (f->type() == Type::Str)
      f = I.eval(r_sym(*strs(*f)[0]), bc.env);
    if (f->type() == Type::Builtin) {
      const auto& fs = builtin(*f)->formals;
      std::vector<RPtr> items;
      StrVec names;
      for (const auto& fm : fs) {
        items.push_back(fm.default_expr ? fm.default_expr : r_sym(""));
        names.push_back(rstring(fm.name));
      }
      if (items.empty()) return r_null();
      RPtr out = r_list(std::move(items));
      return set_attr_raw(out, "names", r_str(std::move(names)));
    }
    if (f->type() != Type::Closure) return r_null();
    const auto& fs = closure(*f)->formals;
    if (fs.empty()) return r_null();
    std::vector<RPtr> items;
    StrVec names;
    for (const auto& fm : fs) {
      items.push_back(fm.default_expr ? fm.default_expr : r_sym(""));
      names.push_back(rstring(fm.name));
    }
    RPtr out = r_list(std::move(items));
    return set_attr_raw(out, "names", r_str(std::move(names)));
  });

  reg(in, "formals<-", "(fun, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Closure)
      I.error("argument is not a function");
    if (!bc.arg[1] || bc.arg[1]->type() != Type::List)
      I.error("invalid formal arguments");
    auto c = std::make_shared<RClosure>(*closure(*bc.arg[0]));
    c->formals.clear();
    RPtr nm = names_of(*bc.arg[1]);
    const auto& items = list_items(*bc.arg[1]);
    for (size_t i = 0; i < items.size(); ++i) {
      std::string name = nm && strs(*nm)[i] ? *strs(*nm)[i] : "";
      RPtr deflt = items[i];
      if (deflt->type() == Type::Sym && sym(*deflt).name.empty())
        deflt = nullptr;
      c->formals.push_back({name, deflt});
    }
    c->src.clear();
    return r_closure(c);
  });

  reg(in, "as.name", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return r_sym(scalar_string(I, bc.arg[0], "x"));
  });
  reg(in, "as.symbol", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return r_sym(scalar_string(I, bc.arg[0], "x"));
  });

  reg(in, "as.call", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    if (x->type() == Type::Call) return x;
    const std::vector<RPtr>* items = nullptr;
    RPtr nm;
    if (x->type() == Type::List) {
      items = &list_items(*x);
      nm = names_of(*x);
    } else if (x->type() == Type::Expr) {
      items = &expr_items(*x);
      nm = names_of(*x);
    } else {
      I.error("invalid argument list");
    }
    if (items->empty()) I.error("invalid length 0 argument");
    std::vector<NamedExpr> args;
    for (size_t i = 1; i < items->size(); ++i) {
      std::string name =
          nm && i < strs(*nm).size() && strs(*nm)[i] ? *strs(*nm)[i] : "";
      args.push_back({name, (*items)[i]});
    }
    return r_call((*items)[0], std::move(args));
  });

  reg(in, "call", "(name, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string name = scalar_string(I, bc.arg[0], "name");
    std::vector<NamedExpr> args;
    for (const auto& d : bc.dots) args.push_back({d.first, d.second});
    return r_call(r_sym(name), std::move(args));
  });

  reg(in, "do.call", "(what, args)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr what = bc.arg[0];
    if (!what) I.error("argument \"what\" is missing, with no default");
    RPtr fn = what;
    RPtr fn_label = what;
    if (what->type() == Type::Str && what->length() == 1 && strs(*what)[0]) {
      fn_label = r_sym(*strs(*what)[0]);
      Binding* b = bc.env->find(*strs(*what)[0]);
      fn = nullptr;
      for (Environment* e = bc.env.get(); e; e = e->enclosure().get()) {
        Binding* lb = e->find_local(*strs(*what)[0]);
        if (!lb) continue;
        RPtr v = lb->promise ? I.force(lb->promise) : lb->value;
        if (v && is_function(*v)) {
          fn = v;
          break;
        }
      }
      (void)b;
      if (!fn)
        I.error("could not find function \"" + *strs(*what)[0] + "\"");
    }
    if (!is_function(*fn))
      I.error("'what' must be a function or character string");
    RPtr args = bc.arg[1] ? bc.arg[1] : r_list({});
    if (args->type() != Type::List) I.error("second argument must be a list");
    std::vector<std::pair<std::string, RPtr>> pairs;
    RPtr nm = names_of(*args);
    const auto& items = list_items(*args);
    std::vector<NamedExpr> arg_exprs;
    for (size_t i = 0; i < items.size(); ++i) {
      std::string name =
          nm && i < strs(*nm).size() && strs(*nm)[i] ? *strs(*nm)[i] : "";
      pairs.push_back({name, items[i]});
      arg_exprs.push_back({name, items[i]});
    }
    RPtr call_expr = r_call(fn_label, arg_exprs);
    return I.apply(fn, std::move(pairs), bc.env, call_expr);
  }, kPassthrough);

  reg(in, "Map", "(f, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr f = bc.arg[0];
    if (!f || !is_function(*f)) I.error("'f' must be a function");
    std::vector<RPtr> inputs;
    RPtr more_args;
    for (const auto& d : bc.dots) {
      if (d.first == "MoreArgs") {
        more_args = d.second;
        continue;
      }
      inputs.push_back(d.second ? d.second : r_null());
    }
    size_t n = 0;
    for (auto& x : inputs) n = std::max(n, x->length());
    for (auto& x : inputs)
      if (x->length() == 0) n = 0;
    std::vector<RPtr> out(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::string, RPtr>> args;
      for (auto& x : inputs)
        args.push_back({"", element_at(*x, i % x->length())});
      if (more_args && more_args->type() == Type::List) {
        RPtr mn = names_of(*more_args);
        const auto& items = list_items(*more_args);
        for (size_t k = 0; k < items.size(); ++k)
          args.push_back(
              {mn && strs(*mn)[k] ? *strs(*mn)[k] : "", items[k]});
      }
      out[i] = I.apply(f, std::move(args), bc.env);
    }
    RPtr res = r_list(std::move(out));
    if (!inputs.empty()) {
      if (RPtr nm = names_of(*inputs[0])) res = set_attr_raw(res, "names", nm);
      else if (inputs[0]->type() == Type::Str && n == inputs[0]->length())
        res = set_attr_raw(res, "names", inputs[0]);
    }
    return res;
  });

  reg(in, "lapply", "(X, FUN, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr f = bc.arg[1];
    if (!f || !is_function(*f)) I.error("'FUN' must be a function");
    size_t n = x->length();
    std::vector<RPtr> out(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::string, RPtr>> args;
      args.push_back({"", element_at(*x, i)});
      for (const auto& d : bc.dots) args.push_back(d);
      out[i] = I.apply(f, std::move(args), bc.env);
    }
    RPtr res = r_list(std::move(out));
    if (RPtr nm = names_of(*x)) res = set_attr_raw(res, "names", nm);
    return res;
  });

  reg(in, "Reduce", "(f, x, init = NULL)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr f = bc.arg[0];
    if (!f || !is_function(*f)) I.error("'f' must be a function");
    RPtr x = bc.arg[1] ? bc.arg[1] : r_null();
    size_t n = x->length();
    RPtr acc;
    size_t start = 0;
    if (bc.arg[2] && bc.arg[2]->type() != Type::Null) {
      acc = bc.arg[2];
    } else {
      if (n == 0) return r_null();
      acc = element_at(*x, 0);
      start = 1;
    }
    for (size_t i = start; i < n; ++i)
      acc = I.apply(f, {{"", acc}, {"", element_at(*x, i)}}, bc.env);
    return acc;
  });

  reg(in, "Filter", "(f, x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr f = bc.arg[0];
    if (!f || !is_function(*f)) I.error("'f' must be a function");
    RPtr x = bc.arg[1] ? bc.arg[1] : r_null();
    IntVec keep;
    for (size_t i = 0; i < x->length(); ++i) {
      RPtr r = I.apply(f, {{"", element_at(*x, i)}}, bc.env);
      RPtr l = coerce(I, *r, Type::Lgl);
      if (l->length() >= 1 && lgl(*l)[0] == 1)
        keep.push_back(static_cast<int32_t>(i + 1));
    }
    return subset1(I, x, r_int(std::move(keep)));
  });

  // --- dots introspection -----------------------------------------------------
  reg_special(in, "...length", "()", [](Interp& I, BuiltinCall& bc) -> RPtr {
    Binding* b = bc.env->find("...");
    if (!b || !b->value || b->value->type() != Type::Dots)
      I.error("incorrect context: the current call has no '...' to look in");
    I.visible = true;
    return scalar_int(static_cast<int32_t>(dots(*b->value).elems.size()));
  }, kVisible);

  reg_special(in, "...names", "()", [](Interp& I, BuiltinCall& bc) -> RPtr {
    Binding* b = bc.env->find("...");
    if (!b || !b->value || b->value->type() != Type::Dots)
      I.error("incorrect context: the current call has no '...' to look in");
    StrVec out;
    for (const auto& el : dots(*b->value).elems)
      out.push_back(rstring(el.name));
    I.visible = true;
    return r_str(std::move(out));
  }, kVisible);

  reg_special(in, "...elt", "(n)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    Binding* b = bc.env->find("...");
    if (!b || !b->value || b->value->type() != Type::Dots)
      I.error("incorrect context: the current call has no '...' to look in");
    RPtr nv = I.eval(quote_arg(bc, 0), bc.env);
    int n = static_cast<int>(scalar_double(I, nv, "n"));
    const auto& elems = dots(*b->value).elems;
    if (n < 1 || static_cast<size_t>(n) > elems.size())
      I.error("the ... list does not contain " + std::to_string(n) +
              " elements");
    RPtr v = I.force(elems[n - 1].prom);
    I.visible = true;
    return v;
  }, kVisible);

  // --- frame/call reflection ----------------------------------------------------
  reg_special(in, "match.call", "()", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (I.stack.empty())
      I.error_call("match.call called from outside a function", bc.call_expr);
    FramePtr frame = I.stack.back();
    if (!frame->clos || !frame->call || frame->call->type() != Type::Call) {
      I.visible = true;
      return frame->call ? frame->call : r_null();
    }
    MatchedArgs plan =
        match_args(I, frame->clos->formals, frame->supplied, frame->call);
    std::vector<NamedExpr> args;
    for (size_t f = 0; f < frame->clos->formals.size(); ++f) {
      const std::string& fname = frame->clos->formals[f].name;
      if (fname == "...") {
        for (int di : plan.dots_supplied)
          args.push_back({frame->supplied[di].name,
                          strip_src(frame->supplied[di].expr)});
        continue;
      }
      int si = plan.formal_to_supplied[f];
      if (si < 0) continue;
      args.push_back({fname, strip_src(frame->supplied[si].expr)});
    }
    I.visible = true;
    return r_call(call(*frame->call).fn, std::move(args));
  }, kVisible);

  reg_special(in, "on.exit", "(expr, add = FALSE)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (I.stack.empty()) {
      I.visible = false;
      return r_null();
    }
    FramePtr frame = I.stack.back();
    bool add = false;
    RPtr expr;
    if (bc.raw) {
      for (size_t i = 0; i < bc.raw->size(); ++i) {
        if ((*bc.raw)[i].name == "add") {
          RPtr v = I.eval((*bc.raw)[i].expr, bc.env);
          add = scalar_flag(I, v, false);
        } else if (i == 0 || (*bc.raw)[i].name == "expr") {
          expr = (*bc.raw)[i].expr;
        }
      }
    }
    if (!add) frame->on_exit.clear();
    if (expr) frame->on_exit.push_back(expr);
    I.visible = false;
    return r_null();
  }, kInvisible);

  // --- options -------------------------------------------------------------------
  reg(in, "options", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::vector<RPtr> old_items;
    StrVec old_names;
    for (const auto& d : bc.dots) {
      if (d.first.empty()) continue;
      RPtr old;
      if (d.first == "digits") {
        old = scalar_int(I.opt_digits);
        I.opt_digits = static_cast<int>(scalar_double(I, d.second, "digits"));
      } else if (d.first == "width") {
        old = scalar_int(I.opt_width);
        I.opt_width = static_cast<int>(scalar_double(I, d.second, "width"));
      } else if (d.first == "warnPartialMatchArgs") {
        old = I.opt_warn_partial ? r_true() : r_false();
        I.opt_warn_partial = scalar_flag(I, d.second, false);
      } else {
        auto it = I.extra_options.find(d.first);
        old = it == I.extra_options.end() ? r_null() : it->second;
        I.extra_options[d.first] = d.second ? d.second : r_null();
      }
      old_items.push_back(old);
      old_names.push_back(rstring(d.first));
    }
    RPtr out = r_list(std::move(old_items));
    out = set_attr_raw(out, "names", r_str(std::move(old_names)));
    I.visible = false;
    return out;
  }, kInvisible);

  reg(in, "getOption", "(x, default = NULL)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string name = scalar_string(I, bc.arg[0], "x");
    if (name == "digits") return scalar_int(I.opt_digits);
    if (name == "width") return scalar_int(I.opt_width);
    if (name == "warnPartialMatchArgs")
      return I.opt_warn_partial ? r_true() : r_false();
    auto it = I.extra_options.find(name);
    if (it != I.extra_options.end()) return it->second;
    return bc.arg[1] ? bc.arg[1] : r_null();
  });

  reg(in, "Sys.time", "()", [](Interp&, BuiltinCall&) -> RPtr {
    // deterministic stand-in: the interpreter has no clock access
    RPtr v = scalar_real(0);
    return set_attr_raw(v, "class",
                        r_str({rstring("POSIXct"), rstring("POSIXt")}));
  });
}

void run_prelude(Interp& in) {
  static const char* kPrelude = R"PRELUDE(
pi <- 3.141592653589793
T <- TRUE
F <- FALSE
letters <- c("a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m",
             "n", "o", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z")
LETTERS <- c("A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
             "N", "O", "P", "Q", "R", "S", "T", "U", "V", "W", "X", "Y", "Z")
month.name <- c("January", "February", "March", "April", "May", "June",
                "July", "August", "September", "October", "November",
                "December")
month.abb <- c("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug",
               "Sep", "Oct", "Nov", "Dec")
`%in%` <- function(x, table) !is.na(match(x, table))
identity <- function(x) x
Negate <- function(f) function(...) !f(...)
)PRELUDE";
  ParseResult pr = parse_program(kPrelude);
  for (const auto& e : pr.exprs) {
    // prelude definitions live in base; bypass the lock during startup
    std::vector<SuppliedArg> none;
    const CallData& c = call(*e);
    RPtr value = in.eval(c.args[1].expr, in.base_env);
    in.base_env->set(sym(*c.args[0].expr).name, value);
  }
}

}  // namespace deepr
