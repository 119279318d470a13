#include "deepr/printer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>

#include "deepr/deparse.hpp"
#include "deepr/env.hpp"
#include "deepr/interp.hpp"

namespace deepr {

namespace {

// significant digits actually needed (<= digits) and the decimal exponent
// of x after rounding to `digits` significant digits
void scientific_parts(double x, int digits, int* nsig, int* kpower) {
  if (x == 0.0) {
    *nsig = 1;
    *kpower = 0;
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, std::fabs(x));
  // buf looks like d.dddddde[+-]XX
  const char* e = std::strchr(buf, 'e');
  *kpower = std::atoi(e + 1);
  int ns = 1;
  for (const char* p = e - 1; p > buf && *p != '.'; --p) {
    if (*p != '0') {
      ns = static_cast<int>(p - buf) - 1 + 1;  // minus the '.'
      break;
    }
  }
  *nsig = ns < 1 ? 1 : ns;
}

}  // namespace

RealFormat plan_real_format(const RealVec& xs, int digits) {
  bool neg = false;
  int mxsl = 1;  // digits left of the point
  int rgt = 0;   // digits right of the point
  int mxns = 1;  // significant digits (scientific candidate)
  int mxe = 2;   // exponent digits
  bool any_finite = false;
  int special_w = 0;
  for (double x : xs) {
    if (std::isnan(x)) {
      special_w = std::max(special_w, na::is_na_real(x) ? 2 : 3);
      continue;
    }
    if (std::isinf(x)) {
      special_w = std::max(special_w, x < 0 ? 4 : 3);
      continue;
    }
    any_finite = true;
    if (x < 0) neg = true;
    int nsig, kpower;
    scientific_parts(x, digits, &nsig, &kpower);
    int left = kpower + 1;
    mxsl = std::max(mxsl, left);
    rgt = std::max(rgt, nsig - left);
    mxns = std::max(mxns, nsig);
    int ew = std::abs(kpower) >= 100 ? 3 : 2;
    mxe = std::max(mxe, ew);
  }
  rgt = std::max(rgt, 0);
  RealFormat f;
  if (!any_finite) {
    f.width = std::max(special_w, 1);
    f.decimals = 0;
    f.scientific = false;
    return f;
  }
  int w_fixed = (neg ? 1 : 0) + mxsl + (rgt > 0 ? rgt + 1 : 0);
  int w_sci = (neg ? 1 : 0) + (mxns > 1 ? mxns + 1 : 1) + 2 + mxe;
  if (w_fixed <= w_sci) {
    f.scientific = false;
    f.decimals = rgt;
    f.width = std::max(w_fixed, special_w);
  } else {
    f.scientific = true;
    f.decimals = mxns - 1;
    f.width = std::max(w_sci, special_w);
  }
  return f;
}

std::string format_real(double x, const RealFormat& f) {
  if (std::isnan(x)) return na::is_na_real(x) ? "NA" : "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[512];
  if (f.scientific)
    std::snprintf(buf, sizeof buf, "%.*e", f.decimals, x);
  else
    std::snprintf(buf, sizeof buf, "%.*f", f.decimals, x);
  return buf;
}

std::string format_real_element(double x, int digits) {
  if (std::isnan(x)) return na::is_na_real(x) ? "NA" : "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

namespace {

std::string pad_left(const std::string& s, size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}
std::string pad_right(const std::string& s, size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

class Printer {
 public:
  Printer(Interp& in, std::ostream& out, RenderConfig cfg)
      : in_(in), out_(out), cfg_(cfg) {}

  void print(const RObject& v) { print_inner(v, ""); }

 private:
  Interp& in_;
  std::ostream& out_;
  RenderConfig cfg_;

  std::string env_label(const EnvPtr& e) {
    if (e == in_.global_env) return "<environment: R_GlobalEnv>";
    if (e == in_.base_env) return "<environment: base>";
    if (e == in_.empty_env) return "<environment: R_EmptyEnv>";
    if (e->print_id < 0) e->print_id = in_.next_env_ordinal();
    return "<environment: #" + std::to_string(e->print_id) + ">";
  }

  // renders one element for vector display
  std::string chr_elem(const RString& s) {
    if (!s) return "NA";
    if (!cfg_.quote) return *s;
    return "\"" + escape_string(*s) + "\"";
  }

  std::vector<std::string> atomic_elems(const RObject& v) {
    size_t n = v.length();
    std::vector<std::string> out(n);
    switch (v.type()) {
      case Type::Lgl:
        for (size_t i = 0; i < n; ++i) {
          int8_t e = lgl(v)[i];
          out[i] = e == na::LGL ? "NA" : e ? "TRUE" : "FALSE";
        }
        break;
      case Type::Int:
        for (size_t i = 0; i < n; ++i) {
          int32_t e = ints(v)[i];
          out[i] = e == na::INT ? "NA" : int_to_string(e);
        }
        break;
      case Type::Real: {
        RealFormat f = plan_real_format(reals(v), cfg_.digits);
        for (size_t i = 0; i < n; ++i) out[i] = format_real(reals(v)[i], f);
        break;
      }
      case Type::Str:
        for (size_t i = 0; i < n; ++i) out[i] = chr_elem(strs(v)[i]);
        break;
      default: break;
    }
    return out;
  }

  bool left_justified(const RObject& v) { return v.type() == Type::Str; }

  std::string empty_vector_label(const RObject& v) {
    switch (v.type()) {
      case Type::Lgl: return "logical(0)";
      case Type::Int: return "integer(0)";
      case Type::Real: return "numeric(0)";
      case Type::Str: return "character(0)";
      default: return "list()";
    }
  }

  void print_atomic(const RObject& v, const std::string& tag_prefix) {
    size_t n = v.length();
    if (n == 0) {
      out_ << empty_vector_label(v) << "\n";
      return;
    }
    RPtr dim = get_attr(v, "dim");
    if (dim && dim->type() == Type::Int && ints(*dim).size() == 2) {
      print_matrix(v, *dim);
      return;
    }
    std::vector<std::string> elems = atomic_elems(v);
    RPtr nm = names_of(v);
    if (nm && nm->type() == Type::Str) {
      print_named(elems, strs(*nm), left_justified(v));
      return;
    }
    size_t w = 0;
    for (const auto& s : elems) w = std::max(w, s.size());
    int labw = static_cast<int>(std::to_string(n).size()) + 2;
    bool left = left_justified(v);
    size_t total = labw;
    std::string line = pad_left("[1]", labw);
    size_t line_start = 0;
    for (size_t i = 0; i < n; ++i) {
      if (i > 0 && total + w + 1 > static_cast<size_t>(cfg_.width)) {
        out_ << line << "\n";
        line_start = i;
        line = pad_left("[" + std::to_string(i + 1) + "]", labw);
        total = labw;
      }
      line += " " + (left ? pad_right(elems[i], w) : pad_left(elems[i], w));
      total += w + 1;
    }
    (void)line_start;
    out_ << line << "\n";
    (void)tag_prefix;
  }

  void print_named(const std::vector<std::string>& elems, const StrVec& names,
                   bool left) {
    (void)left;  // named displays right-justify every field
    size_t n = elems.size();
    std::vector<std::string> nms(n);
    for (size_t i = 0; i < n; ++i)
      nms[i] = i < names.size() ? (names[i] ? *names[i] : "<NA>") : "";
    size_t w = 0;
    for (size_t i = 0; i < n; ++i)
      w = std::max(w, std::max(nms[i].size(), elems[i].size()));
    size_t start = 0;
    while (start < n) {
      size_t used = 0;
      size_t end = start;
      std::string row1, row2;
      while (end < n) {
        if (end > start && used + w + 1 > static_cast<size_t>(cfg_.width))
          break;
        row1 += pad_left(nms[end], w) + " ";
        row2 += pad_left(elems[end], w) + " ";
        used += w + 1;
        ++end;
      }
      out_ << row1 << "\n" << row2 << "\n";
      start = end;
    }
  }

  void print_matrix(const RObject& v, const RObject& dim) {
    int nr = ints(dim)[0], nc = ints(dim)[1];
    std::vector<std::string> elems;
    {
      RenderConfig save = cfg_;
      elems = atomic_elems(v);
      cfg_ = save;
    }
    // row/column labels, with dimnames when available
    std::vector<std::string> rlab(nr), clab(nc);
    RPtr dn = get_attr(v, "dimnames");
    RPtr rn, cn;
    if (dn && dn->type() == Type::List && list_items(*dn).size() == 2) {
      rn = list_items(*dn)[0];
      cn = list_items(*dn)[1];
    }
    for (int i = 0; i < nr; ++i)
      rlab[i] = rn && rn->type() == Type::Str && strs(*rn)[i]
                    ? *strs(*rn)[i]
                    : "[" + std::to_string(i + 1) + ",]";
    for (int j = 0; j < nc; ++j)
      clab[j] = cn && cn->type() == Type::Str && strs(*cn)[j]
                    ? *strs(*cn)[j]
                    : "[," + std::to_string(j + 1) + "]";
    size_t rw = 0;
    for (auto& s : rlab) rw = std::max(rw, s.size());
    std::vector<size_t> cw(nc);
    for (int j = 0; j < nc; ++j) {
      cw[j] = clab[j].size();
      for (int i = 0; i < nr; ++i)
        cw[j] = std::max(cw[j], elems[j * nr + i].size());
    }
    bool left = left_justified(v);
    std::string hdr = std::string(rw, ' ');
    for (int j = 0; j < nc; ++j) hdr += " " + pad_left(clab[j], cw[j]);
    out_ << hdr << "\n";
    for (int i = 0; i < nr; ++i) {
      std::string row = pad_right(rlab[i], rw);
      for (int j = 0; j < nc; ++j)
        row += " " + (left ? pad_right(elems[j * nr + i], cw[j])
                           : pad_left(elems[j * nr + i], cw[j]));
      out_ << row << "\n";
    }
  }

  void print_attrs(const RObject& v, const std::string& skip_extra = "") {
    for (const auto& kv : v.attrs) {
      if (kv.first == "names" || kv.first == "__src__") continue;
      RPtr dim = get_attr(v, "dim");
      bool matrix_like = dim && dim->length() == 2;
      if (kv.first == "dim" && matrix_like) continue;
      if (kv.first == "dimnames" && matrix_like) continue;
      if (!skip_extra.empty() && kv.first == skip_extra) continue;
      out_ << "attr(,\"" << kv.first << "\")\n";
      print_inner(*kv.second, "");
    }
  }

  void print_list(const RObject& v, const std::string& tag_prefix) {
    const auto& items = list_items(v);
    RPtr nm = names_of(v);
    if (items.empty() && !nm) {
      out_ << "list()\n";
      print_attrs(v);
      return;
    }
    for (size_t i = 0; i < items.size(); ++i) {
      std::string tag;
      RString name =
          nm && i < strs(*nm).size() ? strs(*nm)[i] : nullptr;
      if (name && !name->empty())
        tag = tag_prefix + "$" + maybe_backtick(*name);
      else
        tag = tag_prefix + "[[" + std::to_string(i + 1) + "]]";
      out_ << tag << "\n";
      print_inner(*items[i], tag);
      out_ << "\n";
    }
    print_attrs(v);
  }

  void print_function(const RObject& v) {
    if (v.type() == Type::Builtin) {
      const RBuiltin& b = *builtin(v);
      std::string hdr = "function (";
      for (size_t i = 0; i < b.formals.size(); ++i) {
        if (i) hdr += ", ";
        hdr += b.formals[i].name;
        if (b.formals[i].default_expr)
          hdr += " = " + deparse1(*b.formals[i].default_expr);
      }
      hdr += ")  .Primitive(\"" + b.name + "\")";
      out_ << hdr << "\n";
      return;
    }
    const RClosure& c = *closure(v);
    if (!c.src.empty()) {
      out_ << c.src << "\n";
    } else {
      for (const auto& line : deparse_closure(c)) out_ << line << "\n";
    }
    if (c.env == in_.base_env) {
      out_ << "<environment: namespace:base>\n";
    } else if (c.env != in_.global_env) {
      out_ << env_label(c.env) << "\n";
    }
  }

  void print_inner(const RObject& v, const std::string& tag_prefix) {
    // a classed value inside a list or attribute block still dispatches
    switch (v.type()) {
      case Type::Null:
        out_ << "NULL\n";
        return;
      case Type::Lgl:
      case Type::Int:
      case Type::Real:
      case Type::Str:
        print_atomic(v, tag_prefix);
        print_attrs(v);
        return;
      case Type::List:
        print_list(v, tag_prefix);
        return;
      case Type::Closure:
      case Type::Builtin:
        print_function(v);
        print_attrs(v);
        return;
      case Type::Env:
        out_ << env_label(envref(v)) << "\n";
        return;
      case Type::Sym:
        out_ << (sym(v).name.empty() ? "" : maybe_backtick(sym(v).name))
             << "\n";
        return;
      case Type::Call: {
        for (const auto& line : deparse_lines(v)) out_ << line << "\n";
        return;
      }
      case Type::Expr: {
        std::string s = "expression(";
        const auto& items = expr_items(v);
        for (size_t i = 0; i < items.size(); ++i) {
          if (i) s += ", ";
          s += deparse1(*items[i]);
        }
        out_ << s << ")\n";
        return;
      }
      case Type::Dots:
        out_ << "<...>\n";
        return;
    }
  }
};

}  // namespace

void print_value(Interp& in, const RObject& v, std::ostream& out,
                 const RenderConfig& cfg) {
  Printer(in, out, cfg).print(v);
}

void print_value(Interp& in, const RObject& v, std::ostream& out) {
  RenderConfig cfg;
  cfg.width = in.opt_width;
  cfg.digits = in.opt_digits;
  print_value(in, v, out, cfg);
}

}  // namespace deepr
