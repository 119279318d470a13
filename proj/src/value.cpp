#include "deepr/value.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "deepr/env.hpp"
#include "deepr/interp.hpp"

namespace deepr {

size_t RObject::length() const {
  switch (type()) {
    case Type::Null: return 0;
    case Type::Lgl: return lgl(*this).size();
    case Type::Int: return ints(*this).size();
    case Type::Real: return reals(*this).size();
    case Type::Str: return strs(*this).size();
    case Type::List: return list_items(*this).size();
    case Type::Expr: return expr_items(*this).size();
    case Type::Env: return envref(*this) ? envref(*this)->size() : 0;
    case Type::Call: return call(*this).args.size() + 1;
    case Type::Dots: return dots(*this).elems.size();
    default: return 1;
  }
}

size_t r_length(const RObject& o) { return o.length(); }

RPtr r_null() {
  static const RPtr instance = std::make_shared<RObject>();
  return instance;
}

RPtr r_lgl(LglVec v) { return std::make_shared<RObject>(RObject::Payload(std::move(v))); }
RPtr r_int(IntVec v) { return std::make_shared<RObject>(RObject::Payload(std::move(v))); }
RPtr r_real(RealVec v) { return std::make_shared<RObject>(RObject::Payload(std::move(v))); }
RPtr r_str(StrVec v) { return std::make_shared<RObject>(RObject::Payload(std::move(v))); }
RPtr r_list(std::vector<RPtr> items) {
  return std::make_shared<RObject>(RObject::Payload(ListVec{std::move(items)}));
}
RPtr r_expr(std::vector<RPtr> items) {
  return std::make_shared<RObject>(RObject::Payload(ExprVec{std::move(items)}));
}
RPtr r_sym(std::string name) {
  return std::make_shared<RObject>(RObject::Payload(SymbolData{std::move(name)}));
}
RPtr r_call(RPtr fn, std::vector<NamedExpr> args) {
  return std::make_shared<RObject>(
      RObject::Payload(CallData{std::move(fn), std::move(args)}));
}
RPtr r_closure(ClosurePtr c) {
  return std::make_shared<RObject>(RObject::Payload(std::move(c)));
}
RPtr r_builtin(BuiltinPtr b) {
  return std::make_shared<RObject>(RObject::Payload(std::move(b)));
}
RPtr r_env(EnvPtr e) {
  return std::make_shared<RObject>(RObject::Payload(std::move(e)));
}
RPtr r_dots(DotsData d) {
  return std::make_shared<RObject>(RObject::Payload(std::move(d)));
}

RPtr r_true() {
  static const RPtr v = r_lgl({1});
  return v;
}
RPtr r_false() {
  static const RPtr v = r_lgl({0});
  return v;
}
RPtr r_lgl_na() {
  static const RPtr v = r_lgl({na::LGL});
  return v;
}
RPtr scalar_lgl(int8_t v) { return r_lgl({v}); }
RPtr scalar_int(int32_t v) { return r_int({v}); }
RPtr scalar_real(double v) { return r_real({v}); }
RPtr scalar_str(std::string s) { return r_str({rstring(std::move(s))}); }
RPtr scalar_str(RString s) { return r_str({std::move(s)}); }

bool is_sym_named(const RObject& o, const char* name) {
  return o.type() == Type::Sym && sym(o).name == name;
}

std::string type_of(const RObject& o) {
  switch (o.type()) {
    case Type::Null: return "NULL";
    case Type::Lgl: return "logical";
    case Type::Int: return "integer";
    case Type::Real: return "double";
    case Type::Str: return "character";
    case Type::List: return "list";
    case Type::Closure: return "closure";
    case Type::Builtin: return "builtin";
    case Type::Env: return "environment";
    case Type::Sym: return "symbol";
    case Type::Call: return "language";
    case Type::Expr: return "expression";
    case Type::Dots: return "...";
  }
  return "?";
}

// --- attributes --------------------------------------------------------------

RPtr get_attr(const RObject& o, const std::string& name) {
  for (const auto& kv : o.attrs)
    if (kv.first == name) return kv.second;
  return nullptr;
}

RPtr names_of(const RObject& o) { return get_attr(o, "names"); }

RPtr set_attr_raw(RPtr obj, const std::string& name, RPtr value) {
  auto copy = std::make_shared<RObject>(*obj);
  if (!value || is_null(*value)) {
    copy->attrs.erase(
        std::remove_if(copy->attrs.begin(), copy->attrs.end(),
                       [&](const auto& kv) { return kv.first == name; }),
        copy->attrs.end());
    return copy;
  }
  for (auto& kv : copy->attrs) {
    if (kv.first == name) {
      kv.second = value;
      return copy;
    }
  }
  copy->attrs.emplace_back(name, value);
  return copy;
}

RPtr set_attr(Interp& in, RPtr obj, const std::string& name, RPtr value) {
  if (is_null(*obj)) {
    if (!value || is_null(*value)) return obj;
    in.error("attempt to set an attribute on NULL");
  }
  if (!value || is_null(*value)) return set_attr_raw(obj, name, value);

  if (name == "names") {
    RPtr nm = coerce(in, *value, Type::Str);
    size_t len = obj->length();
    StrVec v = strs(*nm);
    if (v.size() > len)
      in.error("'names' attribute [" + std::to_string(v.size()) +
               "] must be the same length as the vector [" +
               std::to_string(len) + "]");
    while (v.size() < len) v.push_back(nullptr);  // pad with NA
    return set_attr_raw(obj, "names", r_str(std::move(v)));
  }
  if (name == "class") {
    if (value->type() != Type::Str)
      in.error("attempt to set invalid 'class' attribute");
    return set_attr_raw(obj, "class", drop_attrs(value));
  }
  if (name == "dim") {
    RPtr dim = coerce(in, *value, Type::Int);
    size_t prod = 1;
    for (int32_t d : ints(*dim)) {
      if (d == na::INT || d < 0)
        in.error("the dims contain missing or negative values");
      prod *= static_cast<size_t>(d);
    }
    if (prod != obj->length())
      in.error("dims [product " + std::to_string(prod) +
               "] do not match the length of object [" +
               std::to_string(obj->length()) + "]");
    return set_attr_raw(obj, "dim", drop_attrs(dim));
  }
  return set_attr_raw(obj, name, value);
}

RPtr drop_attrs(RPtr obj) {
  if (obj->attrs.empty()) return obj;
  auto copy = std::make_shared<RObject>(*obj);
  copy->attrs.clear();
  return copy;
}

RPtr copy_attrs(RPtr from, RPtr to) {
  auto copy = std::make_shared<RObject>(*to);
  copy->attrs = from->attrs;
  return copy;
}

// --- coercion ----------------------------------------------------------------

int type_rank(Type t) {
  switch (t) {
    case Type::Lgl: return 1;
    case Type::Int: return 2;
    case Type::Real: return 3;
    case Type::Str: return 4;
    case Type::List: return 5;
    default: return 0;
  }
}

Type common_type(Type a, Type b) {
  return type_rank(a) >= type_rank(b) ? a : b;
}

std::string int_to_string(int32_t x) { return std::to_string(x); }

std::string real_to_string(double x) {
  if (na::is_na_real(x)) return "NA";
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  std::string s(buf);
  // %.15g writes exponents like 1e+05; R renders 1e+05 too, keep as-is
  return s;
}

namespace {

int8_t str_to_lgl(const std::string& s) {
  if (s == "TRUE" || s == "True" || s == "true" || s == "T") return 1;
  if (s == "FALSE" || s == "False" || s == "false" || s == "F") return 0;
  return na::LGL;
}

bool parse_double(const std::string& s, double* out) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return false;
  size_t b = s.find_last_not_of(" \t");
  std::string t = s.substr(a, b - a + 1);
  if (t == "NaN") { *out = std::nan(""); return true; }
  if (t == "Inf" || t == "inf") { *out = HUGE_VAL; return true; }
  if (t == "-Inf" || t == "-inf") { *out = -HUGE_VAL; return true; }
  const char* c = t.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0') return false;
  *out = v;
  return true;
}

}  // namespace

double element_as_double(const RObject& v, size_t i) {
  switch (v.type()) {
    case Type::Lgl: {
      int8_t e = lgl(v)[i];
      return e == na::LGL ? na::real() : static_cast<double>(e);
    }
    case Type::Int: {
      int32_t e = ints(v)[i];
      return e == na::INT ? na::real() : static_cast<double>(e);
    }
    case Type::Real: return reals(v)[i];
    default: return na::real();
  }
}

bool element_is_na(const RObject& v, size_t i) {
  switch (v.type()) {
    case Type::Lgl: return lgl(v)[i] == na::LGL;
    case Type::Int: return ints(v)[i] == na::INT;
    case Type::Real: return std::isnan(reals(v)[i]);
    case Type::Str: return strs(v)[i] == nullptr;
    default: return false;
  }
}

RPtr coerce(Interp& in, const RObject& v, Type target) {
  Type src = v.type();
  if (src == target) {
    // identity, attributes kept
    return std::make_shared<RObject>(v);
  }
  if (src == Type::Null) {
    switch (target) {
      case Type::Lgl: return r_lgl({});
      case Type::Int: return r_int({});
      case Type::Real: return r_real({});
      case Type::Str: return r_str({});
      case Type::List: return r_list({});
      default: break;
    }
  }
  size_t n = v.length();
  if (src == Type::List) {
    if (target != Type::List) {
      // flatten only if every element is an atomic scalar
      const auto& items = list_items(v);
      std::vector<RPtr> scalars;
      scalars.reserve(items.size());
      for (const auto& e : items) {
        if (!e || !is_atomic(*e) || e->length() != 1)
          in.error("'" + type_of(v) + "' object cannot be coerced to type '" +
                   (target == Type::Real ? "double" : target == Type::Int
                        ? "integer" : target == Type::Lgl ? "logical"
                        : "character") + "'");
        scalars.push_back(e);
      }
      // coerce elementwise through a flattened vector
      switch (target) {
        case Type::Str: {
          StrVec out;
          for (auto& e : scalars) out.push_back(strs(*coerce(in, *e, Type::Str))[0]);
          return r_str(std::move(out));
        }
        case Type::Real: {
          RealVec out;
          for (auto& e : scalars) out.push_back(reals(*coerce(in, *e, Type::Real))[0]);
          return r_real(std::move(out));
        }
        case Type::Int: {
          IntVec out;
          for (auto& e : scalars) out.push_back(ints(*coerce(in, *e, Type::Int))[0]);
          return r_int(std::move(out));
        }
        case Type::Lgl: {
          LglVec out;
          for (auto& e : scalars) out.push_back(lgl(*coerce(in, *e, Type::Lgl))[0]);
          return r_lgl(std::move(out));
        }
        default: break;
      }
    }
  }
  if (target == Type::List) {
    std::vector<RPtr> items;
    items.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      switch (src) {
        case Type::Lgl: items.push_back(r_lgl({lgl(v)[i]})); break;
        case Type::Int: items.push_back(r_int({ints(v)[i]})); break;
        case Type::Real: items.push_back(r_real({reals(v)[i]})); break;
        case Type::Str: items.push_back(r_str({strs(v)[i]})); break;
        default: in.error("cannot coerce type '" + type_of(v) + "' to list");
      }
    }
    RPtr out = r_list(std::move(items));
    if (RPtr nm = names_of(v)) out = set_attr_raw(out, "names", nm);
    return out;
  }
  if (!is_atomic(v))
    in.error("cannot coerce type '" + type_of(v) + "' to vector of type '" +
             (target == Type::Real ? "double" : target == Type::Int
                  ? "integer" : target == Type::Lgl ? "logical" : "character") +
             "'");

  switch (target) {
    case Type::Lgl: {
      LglVec out(n);
      for (size_t i = 0; i < n; ++i) {
        if (element_is_na(v, i)) { out[i] = na::LGL; continue; }
        switch (src) {
          case Type::Int: out[i] = ints(v)[i] != 0; break;
          case Type::Real: out[i] = reals(v)[i] != 0.0; break;
          case Type::Str: out[i] = str_to_lgl(*strs(v)[i]); break;
          default: out[i] = na::LGL;
        }
      }
      return r_lgl(std::move(out));
    }
    case Type::Int: {
      IntVec out(n);
      bool warned = false;
      for (size_t i = 0; i < n; ++i) {
        if (element_is_na(v, i)) { out[i] = na::INT; continue; }
        double d;
        if (src == Type::Str) {
          if (!parse_double(*strs(v)[i], &d)) {
            if (!warned) { in.warn("NAs introduced by coercion"); warned = true; }
            out[i] = na::INT;
            continue;
          }
        } else {
          d = element_as_double(v, i);
        }
        if (std::isnan(d) || d >= 2147483648.0 || d < -2147483648.0) {
          out[i] = na::INT;
          if (!std::isnan(d) && !warned) {
            in.warn("NAs introduced by coercion to integer range");
            warned = true;
          }
        } else {
          out[i] = static_cast<int32_t>(d);  // truncation toward zero
        }
      }
      return r_int(std::move(out));
    }
    case Type::Real: {
      RealVec out(n);
      bool warned = false;
      for (size_t i = 0; i < n; ++i) {
        if (element_is_na(v, i)) { out[i] = na::real(); continue; }
        if (src == Type::Str) {
          double d;
          if (parse_double(*strs(v)[i], &d)) {
            out[i] = d;
          } else {
            if (!warned) { in.warn("NAs introduced by coercion"); warned = true; }
            out[i] = na::real();
          }
        } else {
          out[i] = element_as_double(v, i);
        }
      }
      return r_real(std::move(out));
    }
    case Type::Str: {
      StrVec out(n);
      for (size_t i = 0; i < n; ++i) {
        if (element_is_na(v, i) &&
            !(src == Type::Real && !na::is_na_real(reals(v)[i]))) {
          out[i] = nullptr;
          continue;
        }
        switch (src) {
          case Type::Lgl: out[i] = rstring(lgl(v)[i] ? "TRUE" : "FALSE"); break;
          case Type::Int: out[i] = rstring(int_to_string(ints(v)[i])); break;
          case Type::Real: out[i] = rstring(real_to_string(reals(v)[i])); break;
          default: out[i] = nullptr;
        }
      }
      return r_str(std::move(out));
    }
    default: break;
  }
  in.error("unsupported coercion");
}

// --- identical ---------------------------------------------------------------

namespace {

bool attrs_identical(const Attributes& a, const Attributes& b) {
  if (a.size() != b.size()) return false;
  for (const auto& kv : a) {
    bool found = false;
    for (const auto& kw : b) {
      if (kv.first == kw.first) {
        if (!identical(*kv.second, *kw.second)) return false;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool real_identical(double x, double y) {
  uint64_t bx, by;
  std::memcpy(&bx, &x, sizeof bx);
  std::memcpy(&by, &y, sizeof by);
  if (bx == by) return true;
  // do not distinguish 0 and -0? identical(0, -0) is TRUE in R
  if (x == 0.0 && y == 0.0) return true;
  return std::isnan(x) && std::isnan(y) &&
         na::is_na_real(x) == na::is_na_real(y);
}

}  // namespace

bool identical(const RObject& a, const RObject& b) {
  if (a.type() != b.type()) return false;
  if (!attrs_identical(a.attrs, b.attrs)) return false;
  switch (a.type()) {
    case Type::Null: return true;
    case Type::Lgl: return lgl(a) == lgl(b);
    case Type::Int: return ints(a) == ints(b);
    case Type::Real: {
      if (reals(a).size() != reals(b).size()) return false;
      for (size_t i = 0; i < reals(a).size(); ++i)
        if (!real_identical(reals(a)[i], reals(b)[i])) return false;
      return true;
    }
    case Type::Str: {
      if (strs(a).size() != strs(b).size()) return false;
      for (size_t i = 0; i < strs(a).size(); ++i) {
        const RString& x = strs(a)[i];
        const RString& y = strs(b)[i];
        if (!x != !y) return false;
        if (x && *x != *y) return false;
      }
      return true;
    }
    case Type::List:
    case Type::Expr: {
      const auto& xs = a.type() == Type::List ? list_items(a) : expr_items(a);
      const auto& ys = a.type() == Type::List ? list_items(b) : expr_items(b);
      if (xs.size() != ys.size()) return false;
      for (size_t i = 0; i < xs.size(); ++i)
        if (!identical(*xs[i], *ys[i])) return false;
      return true;
    }
    case Type::Sym: return sym(a).name == sym(b).name;
    case Type::Call: {
      const CallData& x = call(a);
      const CallData& y = call(b);
      if (!identical(*x.fn, *y.fn)) return false;
      if (x.args.size() != y.args.size()) return false;
      for (size_t i = 0; i < x.args.size(); ++i) {
        if (x.args[i].name != y.args[i].name) return false;
        if (!identical(*x.args[i].expr, *y.args[i].expr)) return false;
      }
      return true;
    }
    case Type::Closure: return closure(a) == closure(b);
    case Type::Builtin: return builtin(a) == builtin(b);
    case Type::Env: return envref(a) == envref(b);
    default: return false;
  }
}

}  // namespace deepr
