// Vector construction, coercion, attributes, indexing entry points,
// arithmetic/comparison/logic operators, math, aggregation, and the
// search/order family.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "builtins_support.hpp"
#include "deepr/deparse.hpp"
#include "deepr/indexing.hpp"
#include "deepr/printer.hpp"
#include "deepr/vecops.hpp"

namespace deepr {

namespace {

Type type_from_mode(Interp& in, const std::string& mode) {
  if (mode == "logical") return Type::Lgl;
  if (mode == "integer") return Type::Int;
  if (mode == "double" || mode == "numeric") return Type::Real;
  if (mode == "character") return Type::Str;
  if (mode == "list") return Type::List;
  in.error("vector: cannot make a vector of mode '" + mode + "'");
}

RPtr empty_of(Type t) {
  switch (t) {
    case Type::Lgl: return r_lgl({});
    case Type::Int: return r_int({});
    case Type::Real: return r_real({});
    case Type::Str: return r_str({});
    default: return r_list({});
  }
}

// c(): combine values under the common type, composing names
RPtr combine(Interp& in, const std::vector<std::pair<std::string, RPtr>>& args) {
  Type ct = Type::Null;
  bool any_names = false;
  bool non_vector = false;
  for (const auto& a : args) {
    if (!a.second || a.second->type() == Type::Null) {
      if (!a.first.empty()) any_names = true;
      continue;
    }
    Type t = a.second->type();
    if (!is_atomic(*a.second) && t != Type::List) non_vector = true;
    ct = common_type(ct, t == Type::List || is_atomic(*a.second) ? t : Type::List);
    if (!a.first.empty() || names_of(*a.second)) any_names = true;
  }
  if (non_vector) ct = Type::List;
  if (ct == Type::Null) {
    // only nulls (or nothing at all)
    bool any = false;
    for (const auto& a : args)
      if (a.second && a.second->type() != Type::Null) any = true;
    if (!any) return r_null();
    ct = Type::List;
  }

  std::vector<RPtr> parts;
  std::vector<std::string> outer;
  for (const auto& a : args) {
    if (!a.second || a.second->type() == Type::Null) continue;
    parts.push_back(a.second);
    outer.push_back(a.first);
  }

  StrVec names;
  auto add_names = [&](const RPtr& part, const std::string& key) {
    size_t n = part->length();
    RPtr nm = names_of(*part);
    for (size_t i = 0; i < n; ++i) {
      std::string inner;
      if (nm && i < strs(*nm).size() && strs(*nm)[i]) inner = *strs(*nm)[i];
      std::string composed;
      if (key.empty()) {
        composed = inner;
      } else if (!inner.empty()) {
        composed = key + "." + inner;
      } else if (n == 1) {
        composed = key;
      } else {
        composed = key + std::to_string(i + 1);
      }
      names.push_back(rstring(composed));
    }
  };

  switch (ct) {
    case Type::List: {
      std::vector<RPtr> items;
      for (size_t p = 0; p < parts.size(); ++p) {
        const RPtr& part = parts[p];
        if (part->type() == Type::List) {
          for (const auto& e : list_items(*part)) items.push_back(e);
        } else if (is_atomic(*part)) {
          for (size_t i = 0; i < part->length(); ++i)
            items.push_back(drop_attrs(element_at(*part, i)));
        } else {
          items.push_back(part);
        }
        if (any_names) add_names(part, outer[p]);
      }
      RPtr out = r_list(std::move(items));
      if (any_names) out = set_attr_raw(out, "names", r_str(names));
      return out;
    }
    default: {
      RPtr out = empty_of(ct);
      auto acc = std::make_shared<RObject>(*out);
      for (size_t p = 0; p < parts.size(); ++p) {
        RPtr part = parts[p]->type() == ct ? parts[p]
                                           : coerce(in, *parts[p], ct);
        switch (ct) {
          case Type::Lgl: {
            auto& v = std::get<LglVec>(acc->data);
            v.insert(v.end(), lgl(*part).begin(), lgl(*part).end());
            break;
          }
          case Type::Int: {
            auto& v = std::get<IntVec>(acc->data);
            v.insert(v.end(), ints(*part).begin(), ints(*part).end());
            break;
          }
          case Type::Real: {
            auto& v = std::get<RealVec>(acc->data);
            v.insert(v.end(), reals(*part).begin(), reals(*part).end());
            break;
          }
          case Type::Str: {
            auto& v = std::get<StrVec>(acc->data);
            v.insert(v.end(), strs(*part).begin(), strs(*part).end());
            break;
          }
          default: break;
        }
        if (any_names) add_names(parts[p], outer[p]);
      }
      RPtr res = acc;
      if (any_names) res = set_attr_raw(res, "names", r_str(names));
      return res;
    }
  }
}

size_t value_index(Interp& in, BuiltinCall& bc, size_t formal) {
  (void)in;
  (void)bc;
  return formal;
}

// shared by order/sort: elementwise three-way comparison of key vectors
struct KeyOrder {
  std::vector<const RObject*> keys;

  // -1, 0, 1 with NA greatest (so NAs sink to the end)
  int cmp(size_t a, size_t b) const {
    for (const RObject* k : keys) {
      bool na_a = element_is_na(*k, a);
      bool na_b = element_is_na(*k, b);
      if (na_a || na_b) {
        if (na_a && na_b) continue;
        return na_a ? 1 : -1;
      }
      if (k->type() == Type::Str) {
        int c = strs(*k)[a]->compare(*strs(*k)[b]);
        if (c != 0) return c < 0 ? -1 : 1;
      } else {
        double x = element_as_double(*k, a);
        double y = element_as_double(*k, b);
        if (x < y) return -1;
        if (x > y) return 1;
      }
    }
    return 0;
  }
};

}  // namespace

void register_vector_builtins(Interp& in) {
  // --- construction ------------------------------------------------------------
  reg(in, "c", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return combine(I, bc.dots);
  });

  reg(in, "vector", "(mode = \"logical\", length = 0)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string mode = bc.arg[0] ? scalar_string(I, bc.arg[0], "mode")
                                 : "logical";
    size_t n = bc.arg[1] ? static_cast<size_t>(
                               scalar_double(I, bc.arg[1], "length"))
                         : 0;
    switch (type_from_mode(I, mode)) {
      case Type::Lgl: return r_lgl(LglVec(n, 0));
      case Type::Int: return r_int(IntVec(n, 0));
      case Type::Real: return r_real(RealVec(n, 0.0));
      case Type::Str: return r_str(StrVec(n, rstring("")));
      default: return r_list(std::vector<RPtr>(n, r_null()));
    }
  });

  reg(in, "logical", "(length = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = bc.arg[0]
                   ? static_cast<size_t>(scalar_double(I, bc.arg[0], "length"))
                   : 0;
    return r_lgl(LglVec(n, 0));
  });
  reg(in, "integer", "(length = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = bc.arg[0]
                   ? static_cast<size_t>(scalar_double(I, bc.arg[0], "length"))
                   : 0;
    return r_int(IntVec(n, 0));
  });
  reg(in, "numeric", "(length = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = bc.arg[0]
                   ? static_cast<size_t>(scalar_double(I, bc.arg[0], "length"))
                   : 0;
    return r_real(RealVec(n, 0.0));
  });
  reg(in, "double", "(length = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = bc.arg[0]
                   ? static_cast<size_t>(scalar_double(I, bc.arg[0], "length"))
                   : 0;
    return r_real(RealVec(n, 0.0));
  });
  reg(in, "character", "(length = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = bc.arg[0]
                   ? static_cast<size_t>(scalar_double(I, bc.arg[0], "length"))
                   : 0;
    return r_str(StrVec(n, rstring("")));
  });

  reg(in, "list", "(...)", [](Interp&, BuiltinCall& bc) -> RPtr {
    std::vector<RPtr> items;
    StrVec names;
    bool any = false;
    for (const auto& d : bc.dots) {
      items.push_back(d.second ? d.second : r_null());
      names.push_back(rstring(d.first));
      if (!d.first.empty()) any = true;
    }
    RPtr out = r_list(std::move(items));
    if (any) out = set_attr_raw(out, "names", r_str(std::move(names)));
    return out;
  });

  reg(in, "rep", "(x, times = 1, length.out = NA, each = 1)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    if (x->type() == Type::Null) return r_null();
    RPtr times = bc.arg[1];
    RPtr length_out = bc.arg[2] && bc.arg[2]->length() > 0 &&
                              !element_is_na(*bc.arg[2], 0)
                          ? bc.arg[2]
                          : nullptr;
    RPtr each = bc.arg[3];

    RPtr nm = names_of(*x);
    auto take = [&](const std::vector<size_t>& idx) -> RPtr {
      std::vector<std::pair<std::string, RPtr>> dummy;
      (void)dummy;
      // gather by explicit positions
      switch (x->type()) {
        case Type::Lgl: {
          LglVec out;
          for (size_t k : idx) out.push_back(lgl(*x)[k]);
          return r_lgl(std::move(out));
        }
        case Type::Int: {
          IntVec out;
          for (size_t k : idx) out.push_back(ints(*x)[k]);
          return r_int(std::move(out));
        }
        case Type::Real: {
          RealVec out;
          for (size_t k : idx) out.push_back(reals(*x)[k]);
          return r_real(std::move(out));
        }
        case Type::Str: {
          StrVec out;
          for (size_t k : idx) out.push_back(strs(*x)[k]);
          return r_str(std::move(out));
        }
        case Type::List: {
          std::vector<RPtr> out;
          for (size_t k : idx) out.push_back(list_items(*x)[k]);
          return r_list(std::move(out));
        }
        default: I.error("attempt to replicate an object of type '" +
                         type_of(*x) + "'");
      }
    };

    size_t n = x->length();
    std::vector<size_t> idx;
    // `each` first
    size_t each_n = 1;
    if (each && each->length() >= 1) {
      double e = element_as_double(*each, 0);
      if (!std::isnan(e) && e >= 0) each_n = static_cast<size_t>(e);
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < each_n; ++k) idx.push_back(i);

    // then `times`
    if (times && times->length() > 1) {
      if (each_n != 1 || times->length() != idx.size())
        I.error("invalid 'times' argument");
      std::vector<size_t> out;
      for (size_t i = 0; i < idx.size(); ++i) {
        double t = element_as_double(*times, i);
        if (std::isnan(t) || t < 0) I.error("invalid 'times' argument");
        for (size_t k = 0; k < static_cast<size_t>(t); ++k)
          out.push_back(idx[i]);
      }
      idx = std::move(out);
    } else {
      size_t t = 1;
      if (times && times->length() == 1) {
        double tv = element_as_double(*times, 0);
        if (std::isnan(tv) || tv < 0) I.error("invalid 'times' argument");
        t = static_cast<size_t>(tv);
      }
      std::vector<size_t> out;
      out.reserve(idx.size() * t);
      for (size_t k = 0; k < t; ++k)
        out.insert(out.end(), idx.begin(), idx.end());
      idx = std::move(out);
    }

    // finally truncate or recycle to `length.out`
    if (length_out && length_out->length() >= 1 &&
        !element_is_na(*length_out, 0)) {
      size_t lo = static_cast<size_t>(element_as_double(*length_out, 0));
      std::vector<size_t> out;
      if (idx.empty()) {
        // recycle the original vector
        for (size_t i = 0; i < lo; ++i) out.push_back(i % (n ? n : 1));
      } else {
        for (size_t i = 0; i < lo; ++i) out.push_back(idx[i % idx.size()]);
      }
      idx = std::move(out);
    }

    RPtr out = take(idx);
    if (nm && nm->type() == Type::Str) {
      StrVec outn;
      for (size_t k : idx) outn.push_back(strs(*nm)[k]);
      out = set_attr_raw(out, "names", r_str(std::move(outn)));
    }
    return out;
  });

  reg(in, ":", "(from, to)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    double a = scalar_double(I, bc.arg[0], "from");
    double b = scalar_double(I, bc.arg[1], "to");
    if (std::isnan(a) || std::isnan(b)) I.error("NA/NaN argument");
    bool int_ok = a == std::floor(a) && std::fabs(a) < 2147483647.0 &&
                  std::fabs(b) < 2147483647.0;
    size_t n = static_cast<size_t>(std::floor(std::fabs(b - a))) + 1;
    if (int_ok) {
      IntVec out(n);
      int32_t v = static_cast<int32_t>(a);
      int step = b >= a ? 1 : -1;
      for (size_t i = 0; i < n; ++i, v += step) out[i] = v;
      return r_int(std::move(out));
    }
    RealVec out(n);
    double step = b >= a ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) out[i] = a + step * static_cast<double>(i);
    return r_real(std::move(out));
  });

  reg(in, "seq", "(from = 1, to = 1, by = NULL, length.out = NULL)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    bool has_from = bc.has(0), has_to = bc.has(1), has_by = bc.has(2) &&
                    bc.arg[2]->type() != Type::Null;
    bool has_len = bc.has(3) && bc.arg[3]->type() != Type::Null;

    if (has_from && !has_to && !has_by && !has_len) {
      // seq(n) == seq_len(n) when n is a single value >= 1; seq(vector) is
      // seq_along
      RPtr f = bc.arg[0];
      if (f->length() == 1) {
        double n = scalar_double(I, bc.arg[0], "from");
        if (n == std::floor(n) && n >= 1) {
          IntVec out(static_cast<size_t>(n));
          std::iota(out.begin(), out.end(), 1);
          return r_int(std::move(out));
        }
        return scalar_real(n >= 1 ? 1 : n);
      }
      IntVec out(f->length());
      std::iota(out.begin(), out.end(), 1);
      return r_int(std::move(out));
    }

    double from = has_from ? scalar_double(I, bc.arg[0], "from") : 1.0;
    size_t lout = 0;
    if (has_len) {
      double lo = scalar_double(I, bc.arg[3], "length.out");
      if (lo < 0 || std::isnan(lo)) I.error("'length.out' must be a non-negative number");
      lout = static_cast<size_t>(std::ceil(lo));
    }
    if (has_len && !has_to && !has_by) {
      // seq(length.out=n) or seq(from, length.out=n): step 1
      if (lout == 0) return r_int({});
      bool int_ok = from == std::floor(from);
      if (int_ok) {
        IntVec out(lout);
        for (size_t i = 0; i < lout; ++i)
          out[i] = static_cast<int32_t>(from) + static_cast<int32_t>(i);
        return r_int(std::move(out));
      }
      RealVec out(lout);
      for (size_t i = 0; i < lout; ++i) out[i] = from + static_cast<double>(i);
      return r_real(std::move(out));
    }
    double to = has_to ? scalar_double(I, bc.arg[1], "to") : 1.0;
    if (has_len) {
      if (lout == 1) return scalar_real(from);
      double by = (to - from) / static_cast<double>(lout - 1);
      RealVec out(lout);
      for (size_t i = 0; i < lout; ++i)
        out[i] = from + by * static_cast<double>(i);
      out[lout - 1] = to;
      return r_real(std::move(out));
    }
    double by = has_by ? scalar_double(I, bc.arg[2], "by")
                       : (to >= from ? 1.0 : -1.0);
    if (by == 0 && to != from) I.error("invalid '(to - from)/by' in seq(.)");
    double del = to - from;
    if (del != 0 && ((del > 0) != (by > 0)))
      I.error("wrong sign in 'by' argument");
    size_t n = del == 0 ? 1
                        : static_cast<size_t>(
                              std::floor(del / by + 1e-10)) + 1;
    RealVec out(n);
    for (size_t i = 0; i < n; ++i) out[i] = from + by * static_cast<double>(i);
    return r_real(std::move(out));
  });

  reg(in, "seq_len", "(length.out)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    double n = scalar_double(I, bc.arg[0], "length.out");
    if (std::isnan(n) || n < 0)
      I.error("argument must be coercible to non-negative integer");
    IntVec out(static_cast<size_t>(n));
    std::iota(out.begin(), out.end(), 1);
    return r_int(std::move(out));
  });

  reg(in, "seq_along", "(along.with)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) I.error("argument \"along.with\" is missing, with no default");
    IntVec out(bc.arg[0]->length());
    std::iota(out.begin(), out.end(), 1);
    return r_int(std::move(out));
  });

  // --- basic properties ---------------------------------------------------------
  reg(in, "length", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    return scalar_int(
        bc.arg[0] ? static_cast<int32_t>(bc.arg[0]->length()) : 0);
  });

  reg(in, "length<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    size_t n = static_cast<size_t>(scalar_double(I, bc.arg[1], "value"));
    RPtr x = bc.arg[0];
    auto out = std::make_shared<RObject>(*x);
    switch (x->type()) {
      case Type::Lgl: std::get<LglVec>(out->data).resize(n, na::LGL); break;
      case Type::Int: std::get<IntVec>(out->data).resize(n, na::INT); break;
      case Type::Real: std::get<RealVec>(out->data).resize(n, na::real()); break;
      case Type::Str: std::get<StrVec>(out->data).resize(n, nullptr); break;
      case Type::List: std::get<ListVec>(out->data).items.resize(n, r_null()); break;
      default: I.error("invalid argument");
    }
    // adjust names
    for (auto& kv : out->attrs) {
      if (kv.first == "names") {
        StrVec nm = strs(*kv.second);
        nm.resize(n, nullptr);
        kv.second = r_str(std::move(nm));
      }
    }
    return out;
  });

  reg(in, "names", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) return r_null();
    if (bc.arg[0]->type() == Type::Call) {
      const CallData& c = call(*bc.arg[0]);
      bool any = false;
      for (const auto& a : c.args)
        if (!a.name.empty()) any = true;
      if (!any) return r_null();
      StrVec out;
      out.push_back(rstring(""));
      for (const auto& a : c.args) out.push_back(rstring(a.name));
      return r_str(std::move(out));
    }
    if (bc.arg[0]->type() == Type::Env) {
      std::vector<std::string> names = envref(*bc.arg[0])->names_in_order();
      std::sort(names.begin(), names.end());
      StrVec out;
      for (auto& s : names) out.push_back(rstring(s));
      return r_str(std::move(out));
    }
    RPtr nm = names_of(*bc.arg[0]);
    (void)I;
    return nm ? nm : r_null();
  });

  reg(in, "names<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return set_attr(I, bc.arg[0], "names",
                    bc.arg[1] ? bc.arg[1] : r_null());
  });

  reg(in, "attr", "(x, which, exact = FALSE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string which = scalar_string(I, bc.arg[1], "which");
    if (!bc.arg[0]) return r_null();
    RPtr v = get_attr(*bc.arg[0], which);
    return v ? v : r_null();
  });

  reg(in, "attr<-", "(x, which, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string which = scalar_string(I, bc.arg[1], "which");
    return set_attr(I, bc.arg[0], which, bc.arg[2] ? bc.arg[2] : r_null());
  });

  reg(in, "attributes", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->attrs.empty()) return r_null();
    std::vector<RPtr> items;
    StrVec names;
    for (const auto& kv : bc.arg[0]->attrs) {
      if (kv.first == "__src__") continue;
      items.push_back(kv.second);
      names.push_back(rstring(kv.first));
    }
    if (items.empty()) return r_null();
    RPtr out = r_list(std::move(items));
    return set_attr_raw(out, "names", r_str(std::move(names)));
  });

  reg(in, "attributes<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    RPtr value = bc.arg[1] ? bc.arg[1] : r_null();
    RPtr out = drop_attrs(x);
    if (value->type() == Type::Null) return out;
    if (value->type() != Type::List) I.error("attributes must be a list or NULL");
    RPtr nm = names_of(*value);
    if (!nm) I.error("attributes must be named");
    const auto& items = list_items(*value);
    for (size_t i = 0; i < items.size(); ++i) {
      RString name = strs(*nm)[i];
      if (!name || name->empty()) I.error("all attributes must have names");
      out = set_attr(I, out, *name, items[i]);
    }
    return out;
  });

  reg(in, "structure", "(.Data, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr out = bc.arg[0];
    if (!out) I.error("argument \".Data\" is missing, with no default");
    for (const auto& d : bc.dots) {
      if (d.first.empty()) I.error("attributes must be named");
      std::string key = d.first;
      if (key == ".Names") key = "names";
      out = set_attr(I, out, key, d.second ? d.second : r_null());
    }
    return out;
  });

  reg(in, "unname", "(obj)", [](Interp&, BuiltinCall& bc) -> RPtr {
    return set_attr_raw(bc.arg[0], "names", nullptr);
  });

  reg(in, "class", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) return scalar_str("NULL");
    return r_str(I.class_of(*bc.arg[0]));
  });

  reg(in, "class<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return set_attr(I, bc.arg[0], "class", bc.arg[1] ? bc.arg[1] : r_null());
  });

  reg(in, "unclass", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    return set_attr_raw(bc.arg[0], "class", nullptr);
  });

  reg(in, "inherits", "(x, what, which = FALSE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    StrVec classes = I.class_of(*bc.arg[0]);
    if (!bc.arg[1] || bc.arg[1]->type() != Type::Str)
      I.error("'what' must be a character vector");
    for (const auto& w : strs(*bc.arg[1])) {
      if (!w) continue;
      for (const auto& c : classes)
        if (c && *c == *w) return r_true();
    }
    return r_false();
  });

  reg(in, "oldClass", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr cls = bc.arg[0] ? get_attr(*bc.arg[0], "class") : nullptr;
    return cls ? cls : r_null();
  });

  reg(in, "dim", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr d = bc.arg[0] ? get_attr(*bc.arg[0], "dim") : nullptr;
    return d ? d : r_null();
  });
  reg(in, "dim<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return set_attr(I, bc.arg[0], "dim", bc.arg[1] ? bc.arg[1] : r_null());
  });
  reg(in, "dimnames", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr d = bc.arg[0] ? get_attr(*bc.arg[0], "dimnames") : nullptr;
    return d ? d : r_null();
  });
  reg(in, "dimnames<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return set_attr(I, bc.arg[0], "dimnames", bc.arg[1] ? bc.arg[1] : r_null());
  });
  reg(in, "levels", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr d = bc.arg[0] ? get_attr(*bc.arg[0], "levels") : nullptr;
    return d ? d : r_null();
  });
  reg(in, "levels<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return set_attr(I, bc.arg[0], "levels", bc.arg[1] ? bc.arg[1] : r_null());
  });

  reg(in, "typeof", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    return scalar_str(bc.arg[0] ? type_of(*bc.arg[0]) : "NULL");
  });
  reg(in, "mode", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) return scalar_str("NULL");
    std::string t = type_of(*bc.arg[0]);
    if (t == "integer" || t == "double") t = "numeric";
    if (t == "closure" || t == "builtin") t = "function";
    if (t == "symbol") t = "name";
    return scalar_str(t);
  });

  // --- predicates ----------------------------------------------------------------
  auto is_pred = [&](const std::string& name,
                     std::function<bool(const RObject&)> f) {
    reg(in, name, "(x)", [f](Interp&, BuiltinCall& bc) -> RPtr {
      return bc.arg[0] && f(*bc.arg[0]) ? r_true() : r_false();
    });
  };
  is_pred("is.null", [](const RObject& o) { return o.type() == Type::Null; });
  is_pred("is.function", [](const RObject& o) { return is_function(o); });
  is_pred("is.numeric", [](const RObject& o) {
    return o.type() == Type::Int || o.type() == Type::Real;
  });
  is_pred("is.double", [](const RObject& o) { return o.type() == Type::Real; });
  is_pred("is.integer", [](const RObject& o) { return o.type() == Type::Int; });
  is_pred("is.character", [](const RObject& o) { return o.type() == Type::Str; });
  is_pred("is.logical", [](const RObject& o) { return o.type() == Type::Lgl; });
  is_pred("is.list", [](const RObject& o) { return o.type() == Type::List; });
  is_pred("is.environment", [](const RObject& o) { return o.type() == Type::Env; });
  is_pred("is.atomic", [](const RObject& o) { return is_atomic(o); });
  is_pred("is.vector", [](const RObject& o) {
    if (!is_atomic(o) && o.type() != Type::List) return false;
    for (const auto& kv : o.attrs)
      if (kv.first != "names") return false;
    return true;
  });
  is_pred("is.call", [](const RObject& o) { return o.type() == Type::Call; });
  is_pred("is.name", [](const RObject& o) { return o.type() == Type::Sym; });
  is_pred("is.symbol", [](const RObject& o) { return o.type() == Type::Sym; });
  is_pred("is.expression",
          [](const RObject& o) { return o.type() == Type::Expr; });
  is_pred("is.language", [](const RObject& o) {
    return o.type() == Type::Sym || o.type() == Type::Call ||
           o.type() == Type::Expr;
  });
  is_pred("is.recursive", [](const RObject& o) {
    return o.type() == Type::List || is_function(o) || o.type() == Type::Call ||
           o.type() == Type::Expr || o.type() == Type::Env;
  });

  reg(in, "is.na", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    size_t n = x.length();
    LglVec out(n, 0);
    if (is_atomic(x)) {
      for (size_t i = 0; i < n; ++i) out[i] = element_is_na(x, i);
    } else if (x.type() == Type::List) {
      for (size_t i = 0; i < n; ++i) {
        const RPtr& e = list_items(x)[i];
        out[i] = is_atomic(*e) && e->length() == 1 && element_is_na(*e, 0);
      }
    }
    RPtr res = r_lgl(std::move(out));
    if (RPtr nm = names_of(x)) res = set_attr_raw(res, "names", nm);
    return res;
  });

  reg(in, "is.nan", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    size_t n = x.length();
    LglVec out(n, 0);
    if (x.type() == Type::Real)
      for (size_t i = 0; i < n; ++i)
        out[i] = std::isnan(reals(x)[i]) && !na::is_na_real(reals(x)[i]);
    return r_lgl(std::move(out));
  });

  reg(in, "is.finite", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    size_t n = x.length();
    LglVec out(n, 0);
    switch (x.type()) {
      case Type::Lgl:
        for (size_t i = 0; i < n; ++i) out[i] = lgl(x)[i] != na::LGL;
        break;
      case Type::Int:
        for (size_t i = 0; i < n; ++i) out[i] = ints(x)[i] != na::INT;
        break;
      case Type::Real:
        for (size_t i = 0; i < n; ++i) out[i] = std::isfinite(reals(x)[i]);
        break;
      default: break;
    }
    return r_lgl(std::move(out));
  });

  reg(in, "is.infinite", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    size_t n = x.length();
    LglVec out(n, 0);
    if (x.type() == Type::Real)
      for (size_t i = 0; i < n; ++i) out[i] = std::isinf(reals(x)[i]);
    return r_lgl(std::move(out));
  });

  reg(in, "identical", "(x, y)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr y = bc.arg[1] ? bc.arg[1] : r_null();
    return identical(*x, *y) ? r_true() : r_false();
  });

  // --- coercion -------------------------------------------------------------------
  auto as_fn = [&](const std::string& name, Type target) {
    reg(in, name, "(x, ...)", [target](Interp& I, BuiltinCall& bc) -> RPtr {
      RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
      RPtr out = coerce(I, *x, target);
      return drop_attrs(out);
    });
  };
  as_fn("as.logical", Type::Lgl);
  as_fn("as.integer", Type::Int);
  as_fn("as.double", Type::Real);
  as_fn("as.numeric", Type::Real);
  as_fn("as.character", Type::Str);

  reg(in, "as.vector", "(x, mode = \"any\")",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    std::string mode = bc.arg[1] ? scalar_string(I, bc.arg[1], "mode") : "any";
    if (mode == "any") {
      RPtr out = drop_attrs(x);
      if (x->type() == Type::List) {
        if (RPtr nm = names_of(*x)) out = set_attr_raw(out, "names", nm);
      }
      return out;
    }
    if (mode == "list") return coerce(I, *x, Type::List);
    return drop_attrs(coerce(I, *x, type_from_mode(I, mode)));
  });

  reg(in, "as.list", "(x, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    if (x->type() == Type::Env) {
      EnvPtr e = envref(*x);
      std::vector<RPtr> items;
      StrVec names;
      for (const std::string& nm : e->names_in_order()) {
        Binding* b = e->find_local(nm);
        items.push_back(b->promise ? I.force(b->promise) : b->value);
        names.push_back(rstring(nm));
      }
      RPtr out = r_list(std::move(items));
      return set_attr_raw(out, "names", r_str(std::move(names)));
    }
    if (x->type() == Type::List) return x;
    if (x->type() == Type::Closure)
      I.error("as.list on a closure is not supported");
    if (x->type() == Type::Expr) {
      return r_list(expr_items(*x));
    }
    return coerce(I, *x, Type::List);
  });

  // --- indexing --------------------------------------------------------------------
  reg(in, "[", "(x, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    std::vector<std::pair<std::string, RPtr>> idx;
    for (const auto& d : bc.dots)
      if (d.first != "drop") idx.push_back(d);
    if (idx.empty()) return x;
    if (idx.size() == 1) {
      // names attribute may be kept; everything else is dropped
      RPtr out = subset1(I, x, idx[0].second);
      if (x->type() == Type::List || is_atomic(*x)) {
        auto cleaned = std::make_shared<RObject>(*out);
        cleaned->attrs.erase(
            std::remove_if(cleaned->attrs.begin(), cleaned->attrs.end(),
                           [](const auto& kv) { return kv.first != "names"; }),
            cleaned->attrs.end());
        return cleaned;
      }
      return out;
    }
    if (idx.size() == 2)
      return subset_matrix(I, x, idx[0].second, idx[1].second,
                           idx[0].second == nullptr, idx[1].second == nullptr);
    I.error("incorrect number of dimensions");
  });

  reg(in, "[<-", "(x, ..., value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr value = bc.arg[2];
    if (!value && !bc.dots.empty()) {
      value = bc.dots.back().second;  // last positional argument
      bc.dots.pop_back();
    }
    if (!value) I.error("argument \"value\" is missing, with no default");
    if (bc.dots.size() > 1) I.error("incorrect number of subscripts");
    RPtr i = bc.dots.empty() ? nullptr : bc.dots[0].second;
    return subset_assign(I, x, i, value);
  });

  reg(in, "[[", "(x, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    if (bc.dots.size() != 1) I.error("incorrect number of subscripts");
    return extract(I, x, bc.dots[0].second);
  });

  reg(in, "[[<-", "(x, ..., value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr value = bc.arg[2];
    if (!value && bc.dots.size() == 2) {
      value = bc.dots.back().second;
      bc.dots.pop_back();
    }
    if (!value) value = r_null();
    if (bc.dots.size() != 1) I.error("incorrect number of subscripts");
    return extract_assign(I, x, bc.dots[0].second, value);
  });

  // --- operators ----------------------------------------------------------------
  for (const char* op : {"+", "-", "*", "/", "^", "%%", "%/%"}) {
    std::string name = op;
    reg(in, name, "(e1, e2)", [name](Interp& I, BuiltinCall& bc) -> RPtr {
      RPtr e1 = bc.arg[0];
      RPtr e2 = bc.arg[1];
      if (!e2 && (name == "+" || name == "-")) {
        if (!e1) I.error("argument \"e1\" is missing, with no default");
        return arith_unary(I, name, e1);
      }
      if (!e1 || !e2) I.error("operator needs two arguments");
      bool dispatched = false;
      RPtr r = I.ops_dispatch(name, bc.call_expr, e1, e2, bc.env, &dispatched);
      if (dispatched) return r;
      return arith(I, name, e1, e2);
    });
  }

  for (const char* op : {"==", "!=", "<", ">", "<=", ">="}) {
    std::string name = op;
    reg(in, name, "(e1, e2)", [name](Interp& I, BuiltinCall& bc) -> RPtr {
      RPtr e1 = bc.arg[0];
      RPtr e2 = bc.arg[1];
      if (!e1 || !e2) I.error("operator needs two arguments");
      bool dispatched = false;
      RPtr r = I.ops_dispatch(name, bc.call_expr, e1, e2, bc.env, &dispatched);
      if (dispatched) return r;
      return compare(I, name, e1, e2);
    });
  }

  for (const char* op : {"&", "|"}) {
    std::string name = op;
    reg(in, name, "(e1, e2)", [name](Interp& I, BuiltinCall& bc) -> RPtr {
      RPtr e1 = bc.arg[0];
      RPtr e2 = bc.arg[1];
      if (!e1 || !e2) I.error("operator needs two arguments");
      bool dispatched = false;
      RPtr r = I.ops_dispatch(name, bc.call_expr, e1, e2, bc.env, &dispatched);
      if (dispatched) return r;
      return logic2(I, name, e1, e2);
    });
  }

  reg(in, "!", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return logic_not(I, bc.arg[0]);
  });

  reg(in, "xor", "(x, y)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return logic2(I, "xor", bc.arg[0], bc.arg[1]);
  });

  reg(in, "isTRUE", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    return x.type() == Type::Lgl && x.length() == 1 && x.attrs.empty() &&
                   lgl(x)[0] == 1
               ? r_true()
               : r_false();
  });
  reg(in, "isFALSE", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    const RObject& x = *bc.arg[0];
    return x.type() == Type::Lgl && x.length() == 1 && x.attrs.empty() &&
                   lgl(x)[0] == 0
               ? r_true()
               : r_false();
  });

  // --- math ------------------------------------------------------------------------
  for (const char* f : {"abs", "sqrt", "exp", "floor", "ceiling", "trunc",
                        "sin", "cos", "tan", "asin", "acos", "atan"}) {
    std::string name = f;
    reg(in, name, "(x)", [name](Interp& I, BuiltinCall& bc) -> RPtr {
      if (!bc.arg[0]) I.error("argument \"x\" is missing, with no default");
      return math_unary(I, name, bc.arg[0]);
    });
  }

  reg(in, "round", "(x, digits = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) I.error("argument \"x\" is missing, with no default");
    return math_round(I, bc.arg[0], bc.arg[1]);
  });

  reg(in, "log", "(x, base = exp(1))", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0]) I.error("argument \"x\" is missing, with no default");
    return math_log(I, bc.arg[0], bc.arg[1]);
  });
  reg(in, "log2", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return math_log(I, bc.arg[0], scalar_real(2.0));
  });
  reg(in, "log10", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return math_log(I, bc.arg[0], scalar_real(10.0));
  });

  // --- aggregation -------------------------------------------------------------------
  auto numeric_args = [](Interp& I, BuiltinCall& bc,
                         const char* what) -> std::vector<RPtr> {
    std::vector<RPtr> parts;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      if (d.second->type() == Type::Null) continue;
      if (!is_atomic(*d.second))
        I.error(std::string("invalid 'type' (") + type_of(*d.second) +
                ") of argument");
      if (d.second->type() == Type::Str)
        I.error(std::string("invalid 'type' (character) of argument"));
      (void)what;
      parts.push_back(d.second);
    }
    return parts;
  };

  reg(in, "sum", "(..., na.rm = FALSE)", [numeric_args](Interp& I, BuiltinCall& bc) -> RPtr {
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    std::vector<RPtr> parts = numeric_args(I, bc, "sum");
    bool all_int = true;
    for (auto& p : parts)
      if (p->type() == Type::Real) all_int = false;
    double acc = 0;
    bool has_na = false;
    for (auto& p : parts) {
      for (size_t i = 0; i < p->length(); ++i) {
        double v = element_as_double(*p, i);
        if (std::isnan(v)) {
          if (na_rm) continue;
          if (na::is_na_real(v)) has_na = true;
          else acc += v;  // a true NaN poisons the accumulator
        } else {
          acc += v;
        }
      }
    }
    if (has_na) return all_int ? scalar_int(na::INT) : scalar_real(na::real());
    if (all_int) {
      if (acc > INT32_MAX || acc < -2147483648.0) {
        I.warn_call("integer overflow - use sum(as.numeric(.))");
        return scalar_int(na::INT);
      }
      return scalar_int(static_cast<int32_t>(acc));
    }
    return scalar_real(acc);
  });

  reg(in, "prod", "(..., na.rm = FALSE)", [numeric_args](Interp& I, BuiltinCall& bc) -> RPtr {
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    std::vector<RPtr> parts = numeric_args(I, bc, "prod");
    double acc = 1;
    bool has_na = false;
    for (auto& p : parts)
      for (size_t i = 0; i < p->length(); ++i) {
        double v = element_as_double(*p, i);
        if (std::isnan(v)) {
          if (na_rm) continue;
          if (na::is_na_real(v)) has_na = true;
          else acc *= v;
        } else {
          acc *= v;
        }
      }
    if (has_na) return scalar_real(na::real());
    return scalar_real(acc);
  });

  auto minmax = [numeric_args](bool is_min) {
    return [is_min, numeric_args](Interp& I, BuiltinCall& bc) -> RPtr {
      bool na_rm = scalar_flag(I, bc.arg[1], false);
      // character comparison is supported elementwise-lexicographically
      bool any_str = false;
      for (const auto& d : bc.dots)
        if (d.second && d.second->type() == Type::Str) any_str = true;
      if (any_str) {
        RString best;
        bool has_na = false;
        for (const auto& d : bc.dots) {
          if (!d.second) continue;
          RPtr s = coerce(I, *d.second, Type::Str);
          for (const auto& e : strs(*s)) {
            if (!e) {
              has_na = true;
              continue;
            }
            if (!best || (is_min ? *e < *best : *e > *best)) best = e;
          }
        }
        if (has_na && !na_rm) return r_str({nullptr});
        if (!best) I.error("no non-missing arguments to min; returning Inf");
        return scalar_str(best);
      }
      std::vector<RPtr> parts = numeric_args(I, bc, is_min ? "min" : "max");
      bool all_int = true;
      for (auto& p : parts)
        if (p->type() == Type::Real) all_int = false;
      double best = is_min ? HUGE_VAL : -HUGE_VAL;
      bool has_na = false, any = false;
      for (auto& p : parts)
        for (size_t i = 0; i < p->length(); ++i) {
          double v = element_as_double(*p, i);
          if (std::isnan(v)) {
            if (na_rm) continue;
            has_na = true;
            continue;
          }
          any = true;
          if (is_min ? v < best : v > best) best = v;
        }
      if (has_na)
        return all_int ? scalar_int(na::INT) : scalar_real(na::real());
      if (!any) {
        I.warn_call(is_min
                        ? "no non-missing arguments to min; returning Inf"
                        : "no non-missing arguments to max; returning -Inf");
        return scalar_real(is_min ? HUGE_VAL : -HUGE_VAL);
      }
      if (all_int) return scalar_int(static_cast<int32_t>(best));
      return scalar_real(best);
    };
  };
  reg(in, "min", "(..., na.rm = FALSE)", minmax(true));
  reg(in, "max", "(..., na.rm = FALSE)", minmax(false));

  reg(in, "mean", "(x, na.rm = FALSE, ...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    if (!is_atomic(*x) || x->type() == Type::Str) {
      I.warn_call("argument is not numeric or logical: returning NA");
      return scalar_real(na::real());
    }
    double acc = 0;
    size_t cnt = 0;
    for (size_t i = 0; i < x->length(); ++i) {
      double v = element_as_double(*x, i);
      if (std::isnan(v)) {
        if (na_rm) continue;
        return scalar_real(na::is_na_real(v) ? na::real() : v);
      }
      acc += v;
      ++cnt;
    }
    return scalar_real(acc / static_cast<double>(cnt));
  });

  auto cumulate = [](const std::string& kind) {
    return [kind](Interp& I, BuiltinCall& bc) -> RPtr {
      RPtr x = bc.arg[0];
      if (!x) I.error("argument \"x\" is missing, with no default");
      if (!is_atomic(*x) || x->type() == Type::Str)
        I.error("'x' must be numeric or logical");
      size_t n = x->length();
      if ((kind == "cumsum" || kind == "cumprod") && x->type() != Type::Real) {
        // integer cumsum stays integer, NA poisons the tail
        if (kind == "cumsum") {
          IntVec out(n);
          int64_t acc = 0;
          bool na_seen = false;
          for (size_t i = 0; i < n; ++i) {
            double v = element_as_double(*x, i);
            if (na_seen || std::isnan(v)) {
              na_seen = true;
              out[i] = na::INT;
              continue;
            }
            acc += static_cast<int64_t>(v);
            if (acc > INT32_MAX || acc < INT32_MIN + 1) {
              I.warn_call("integer overflow in 'cumsum'; use 'cumsum(as.numeric(.))'");
              na_seen = true;
              out[i] = na::INT;
              continue;
            }
            out[i] = static_cast<int32_t>(acc);
          }
          return r_int(std::move(out));
        }
      }
      RealVec out(n);
      double acc = kind == "cumprod" ? 1.0 : 0.0;
      if (kind == "cummin") acc = HUGE_VAL;
      if (kind == "cummax") acc = -HUGE_VAL;
      bool na_seen = false;
      for (size_t i = 0; i < n; ++i) {
        double v = element_as_double(*x, i);
        if (na_seen || na::is_na_real(v)) {
          na_seen = true;
          out[i] = na::real();
          continue;
        }
        if (kind == "cumsum") acc += v;
        else if (kind == "cumprod") acc *= v;
        else if (kind == "cummin") acc = std::min(acc, v);
        else acc = std::max(acc, v);
        out[i] = acc;
      }
      return r_real(std::move(out));
    };
  };
  reg(in, "cumsum", "(x)", cumulate("cumsum"));
  reg(in, "cumprod", "(x)", cumulate("cumprod"));
  reg(in, "cummin", "(x)", cumulate("cummin"));
  reg(in, "cummax", "(x)", cumulate("cummax"));

  reg(in, "range", "(..., na.rm = FALSE)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    bool has_na = false;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      for (size_t i = 0; i < d.second->length(); ++i) {
        double v = element_as_double(*d.second, i);
        if (std::isnan(v)) {
          if (!na_rm) has_na = true;
          continue;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (has_na) return r_real({na::real(), na::real()});
    return r_real({lo, hi});
  });

  reg(in, "pmin", "(e1, e2)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0], y = bc.arg[1];
    RecyclePlan p = plan_recycle(x->length(), y->length());
    RealVec out(p.out_len);
    for (size_t i = 0; i < p.out_len; ++i) {
      double a = element_as_double(*x, i % x->length());
      double b = element_as_double(*y, i % y->length());
      out[i] = std::isnan(a) || std::isnan(b) ? na::real() : std::min(a, b);
    }
    (void)I;
    return r_real(std::move(out));
  });
  reg(in, "pmax", "(e1, e2)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0], y = bc.arg[1];
    RecyclePlan p = plan_recycle(x->length(), y->length());
    RealVec out(p.out_len);
    for (size_t i = 0; i < p.out_len; ++i) {
      double a = element_as_double(*x, i % x->length());
      double b = element_as_double(*y, i % y->length());
      out[i] = std::isnan(a) || std::isnan(b) ? na::real() : std::max(a, b);
    }
    (void)I;
    return r_real(std::move(out));
  });

  reg(in, "all", "(..., na.rm = FALSE)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    bool has_na = false;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      RPtr l = coerce(I, *d.second, Type::Lgl);
      for (int8_t e : lgl(*l)) {
        if (e == na::LGL) {
          if (!na_rm) has_na = true;
        } else if (!e) {
          return r_false();
        }
      }
    }
    return has_na ? r_lgl_na() : r_true();
  });

  reg(in, "any", "(..., na.rm = FALSE)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    bool na_rm = scalar_flag(I, bc.arg[1], false);
    bool has_na = false;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      RPtr l = coerce(I, *d.second, Type::Lgl);
      for (int8_t e : lgl(*l)) {
        if (e == na::LGL) {
          if (!na_rm) has_na = true;
        } else if (e) {
          return r_true();
        }
      }
    }
    return has_na ? r_lgl_na() : r_false();
  });

  reg(in, "ifelse", "(test, yes, no)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr l = bc.arg[0], t = bc.arg[1], f = bc.arg[2];
    if (!l || !t || !f) I.error("missing arguments to ifelse");
    RPtr lv = l->type() == Type::Lgl ? l : coerce(I, *l, Type::Lgl);
    size_t n = lv->length();
    if (n == 0) return drop_attrs(lv);
    Type ct = common_type(t->type(), f->type());
    RPtr tv = coerce(I, *t, ct);
    RPtr fv = coerce(I, *f, ct);
    size_t tn = tv->length(), fn = fv->length();
    RPtr out = coerce(I, *lv, ct);  // shaped like l
    auto res = std::make_shared<RObject>(*drop_attrs(out));
    for (size_t i = 0; i < n; ++i) {
      int8_t sel = lgl(*lv)[i];
      const RObject* src = sel == 1 ? tv.get() : fv.get();
      size_t si = sel == 1 ? i % tn : i % fn;
      switch (ct) {
        case Type::Lgl:
          std::get<LglVec>(res->data)[i] =
              sel == na::LGL ? na::LGL : lgl(*src)[si];
          break;
        case Type::Int:
          std::get<IntVec>(res->data)[i] =
              sel == na::LGL ? na::INT : ints(*src)[si];
          break;
        case Type::Real:
          std::get<RealVec>(res->data)[i] =
              sel == na::LGL ? na::real() : reals(*src)[si];
          break;
        case Type::Str:
          std::get<StrVec>(res->data)[i] =
              sel == na::LGL ? nullptr : strs(*src)[si];
          break;
        default: I.error("invalid ifelse branches");
      }
    }
    RPtr final = res;
    // shaped like the selector: names and dim come from it
    if (RPtr nm = names_of(*lv)) final = set_attr_raw(final, "names", nm);
    return final;
  });

  // --- searching and ordering ---------------------------------------------------
  reg(in, "match", "(x, table)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    RPtr table = bc.arg[1] ? bc.arg[1] : r_null();
    Type ct = common_type(x->type(), table->type());
    if (ct == Type::Null) return r_int({});
    if (ct == Type::List) I.error("'match' does not support lists here");
    RPtr xs = coerce(I, *x, ct);
    RPtr ts = coerce(I, *table, ct);
    size_t n = xs->length(), m = ts->length();
    IntVec out(n, na::INT);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m; ++j) {
        bool eq;
        if (ct == Type::Str) {
          const RString& a = strs(*xs)[i];
          const RString& b = strs(*ts)[j];
          eq = (!a && !b) || (a && b && *a == *b);
        } else {
          bool na_a = element_is_na(*xs, i);
          bool na_b = element_is_na(*ts, j);
          if (na_a || na_b) {
            // NA matches NA; NaN matches NaN
            if (ct == Type::Real) {
              double a = element_as_double(*xs, i);
              double b = element_as_double(*ts, j);
              eq = na_a && na_b &&
                   na::is_na_real(a) == na::is_na_real(b);
            } else {
              eq = na_a && na_b;
            }
          } else {
            eq = element_as_double(*xs, i) == element_as_double(*ts, j);
          }
        }
        if (eq) {
          out[i] = static_cast<int32_t>(j + 1);
          break;
        }
      }
    }
    return r_int(std::move(out));
  });

  reg(in, "findInterval", "(x, vec)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0], v = bc.arg[1];
    if (!x || !v) I.error("missing arguments");
    size_t m = v->length();
    for (size_t j = 1; j < m; ++j) {
      double a = element_as_double(*v, j - 1);
      double b = element_as_double(*v, j);
      if (std::isnan(a) || std::isnan(b) || a > b)
        I.error("'vec' must be sorted non-decreasingly and not contain NAs");
    }
    IntVec out(x->length());
    for (size_t i = 0; i < x->length(); ++i) {
      double e = element_as_double(*x, i);
      if (std::isnan(e)) {
        out[i] = na::INT;
        continue;
      }
      // binary search: count of vec elements <= e (left-closed, right-open)
      size_t lo = 0, hi = m;
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (element_as_double(*v, mid) <= e) lo = mid + 1;
        else hi = mid;
      }
      out[i] = static_cast<int32_t>(lo);
    }
    return r_int(std::move(out));
  });

  reg(in, "order", "(..., decreasing = FALSE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    bool decreasing = scalar_flag(I, bc.arg[1], false);
    KeyOrder ko;
    size_t n = 0;
    bool first = true;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      if (first) {
        n = d.second->length();
        first = false;
      } else if (d.second->length() != n) {
        I.error("argument lengths differ");
      }
      ko.keys.push_back(d.second.get());
    }
    std::vector<int32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int32_t a, int32_t b) {
      int c = ko.cmp(a, b);
      if (c == 0) return false;
      return decreasing ? c > 0 : c < 0;
    });
    if (decreasing && !ko.keys.empty()) {
      // NAs sink to the end regardless of direction
      std::vector<int32_t> nas, rest;
      for (int32_t k : idx) {
        if (element_is_na(*ko.keys[0], k)) nas.push_back(k);
        else rest.push_back(k);
      }
      idx = rest;
      idx.insert(idx.end(), nas.begin(), nas.end());
    }
    IntVec out;
    for (int32_t k : idx) out.push_back(k + 1);
    return r_int(std::move(out));
  });

  reg(in, "sort", "(x, decreasing = FALSE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    bool decreasing = scalar_flag(I, bc.arg[1], false);
    // drop NAs first
    size_t n = x->length();
    std::vector<size_t> keep;
    for (size_t i = 0; i < n; ++i)
      if (!element_is_na(*x, i)) keep.push_back(i);
    KeyOrder ko;
    ko.keys.push_back(x.get());
    std::stable_sort(keep.begin(), keep.end(), [&](size_t a, size_t b) {
      int c = ko.cmp(a, b);
      return decreasing ? c > 0 : c < 0;
    });
    switch (x->type()) {
      case Type::Lgl: {
        LglVec out;
        for (size_t k : keep) out.push_back(lgl(*x)[k]);
        return r_lgl(std::move(out));
      }
      case Type::Int: {
        IntVec out;
        for (size_t k : keep) out.push_back(ints(*x)[k]);
        return r_int(std::move(out));
      }
      case Type::Real: {
        RealVec out;
        for (size_t k : keep) out.push_back(reals(*x)[k]);
        return r_real(std::move(out));
      }
      case Type::Str: {
        StrVec out;
        for (size_t k : keep) out.push_back(strs(*x)[k]);
        return r_str(std::move(out));
      }
      default: I.error("'x' must be atomic");
    }
  });

  reg(in, "rev", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x || x->type() == Type::Null) return r_null();
    size_t n = x->length();
    std::vector<int64_t> pos;
    for (size_t i = n; i-- > 0;) pos.push_back(static_cast<int64_t>(i));
    IntVec iv;
    for (int64_t p : pos) iv.push_back(static_cast<int32_t>(p + 1));
    return subset1(I, x, r_int(std::move(iv)));
  });

  reg(in, "which", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x || x->type() != Type::Lgl)
      I.error("argument to 'which' is not logical");
    IntVec out;
    StrVec outn;
    RPtr nm = names_of(*x);
    for (size_t i = 0; i < x->length(); ++i) {
      if (lgl(*x)[i] == 1) {
        out.push_back(static_cast<int32_t>(i + 1));
        if (nm) outn.push_back(strs(*nm)[i]);
      }
    }
    RPtr res = r_int(std::move(out));
    if (nm) res = set_attr_raw(res, "names", r_str(std::move(outn)));
    return res;
  });

  reg(in, "which.min", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    double best = HUGE_VAL;
    int32_t at = 0;
    for (size_t i = 0; i < x->length(); ++i) {
      double v = element_as_double(*x, i);
      if (!std::isnan(v) && v < best) {
        best = v;
        at = static_cast<int32_t>(i + 1);
      }
    }
    return at == 0 ? r_int({}) : r_int({at});
  });
  reg(in, "which.max", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    double best = -HUGE_VAL;
    int32_t at = 0;
    for (size_t i = 0; i < x->length(); ++i) {
      double v = element_as_double(*x, i);
      if (!std::isnan(v) && v > best) {
        best = v;
        at = static_cast<int32_t>(i + 1);
      }
    }
    return at == 0 ? r_int({}) : r_int({at});
  });

  reg(in, "duplicated", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    size_t n = x->length();
    LglVec out(n, 0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < i; ++j) {
        bool eq;
        if (x->type() == Type::List) {
          eq = identical(*list_items(*x)[i], *list_items(*x)[j]);
        } else if (x->type() == Type::Str) {
          const RString& a = strs(*x)[i];
          const RString& b = strs(*x)[j];
          eq = (!a && !b) || (a && b && *a == *b);
        } else {
          bool na_a = element_is_na(*x, i), na_b = element_is_na(*x, j);
          eq = na_a || na_b
                   ? na_a && na_b
                   : element_as_double(*x, i) == element_as_double(*x, j);
        }
        if (eq) {
          out[i] = 1;
          break;
        }
      }
    }
    return r_lgl(std::move(out));
  });

  reg(in, "unique", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"x\" is missing, with no default");
    // reuse duplicated()
    std::vector<SuppliedArg> args;
    args.push_back({"", x, Promise::forced(x)});
    Binding* b = I.base_env->find_local("duplicated");
    RPtr dup = I.call_builtin_internal(b->value, bc.call_expr, args, bc.env);
    IntVec keep;
    for (size_t i = 0; i < dup->length(); ++i)
      if (!lgl(*dup)[i]) keep.push_back(static_cast<int32_t>(i + 1));
    RPtr res = subset1(I, x, r_int(std::move(keep)));
    return set_attr_raw(res, "names", nullptr);
  });

  reg(in, "tabulate", "(bin, nbins = NULL)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("argument \"bin\" is missing, with no default");
    int32_t nbins = 0;
    if (bc.arg[1] && bc.arg[1]->type() != Type::Null) {
      nbins = static_cast<int32_t>(scalar_double(I, bc.arg[1], "nbins"));
    } else {
      for (size_t i = 0; i < x->length(); ++i) {
        double v = element_as_double(*x, i);
        if (!std::isnan(v))
          nbins = std::max(nbins, static_cast<int32_t>(std::trunc(v)));
      }
    }
    IntVec out(static_cast<size_t>(std::max(nbins, 0)), 0);
    for (size_t i = 0; i < x->length(); ++i) {
      double v = element_as_double(*x, i);
      if (std::isnan(v)) continue;
      int32_t k = static_cast<int32_t>(std::trunc(v));
      if (k >= 1 && k <= nbins) ++out[k - 1];
    }
    return r_int(std::move(out));
  });

  reg(in, "unlist", "(x, recursive = TRUE, use.names = TRUE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    bool use_names = scalar_flag(I, bc.arg[2], true);
    if (x->type() != Type::List) return x;
    // flatten recursively into (name, scalar-part) runs, then c()
    std::function<void(const RPtr&, const std::string&,
                       std::vector<std::pair<std::string, RPtr>>&)>
        walk = [&](const RPtr& node, const std::string& prefix,
                   std::vector<std::pair<std::string, RPtr>>& acc) {
          if (node->type() == Type::List) {
            RPtr nm = names_of(*node);
            const auto& items = list_items(*node);
            for (size_t i = 0; i < items.size(); ++i) {
              std::string inner;
              if (nm && strs(*nm)[i]) inner = *strs(*nm)[i];
              std::string composed = prefix;
              if (!inner.empty())
                composed = prefix.empty() ? inner : prefix + "." + inner;
              walk(items[i], composed, acc);
            }
          } else {
            acc.push_back({prefix, node});
          }
        };
    std::vector<std::pair<std::string, RPtr>> acc;
    walk(x, "", acc);
    RPtr out = combine(I, acc);
    if (!use_names) out = set_attr_raw(out, "names", nullptr);
    return out;
  });

  reg(in, "head", "(x, n = 6L)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    double n = bc.arg[1] ? scalar_double(I, bc.arg[1], "n") : 6;
    int64_t len = static_cast<int64_t>(x->length());
    int64_t k = n >= 0 ? std::min<int64_t>(static_cast<int64_t>(n), len)
                       : std::max<int64_t>(0, len + static_cast<int64_t>(n));
    IntVec idx;
    for (int64_t i = 1; i <= k; ++i) idx.push_back(static_cast<int32_t>(i));
    return subset1(I, x, r_int(std::move(idx)));
  });

  reg(in, "tail", "(x, n = 6L)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0] ? bc.arg[0] : r_null();
    double n = bc.arg[1] ? scalar_double(I, bc.arg[1], "n") : 6;
    int64_t len = static_cast<int64_t>(x->length());
    int64_t k = n >= 0 ? std::min<int64_t>(static_cast<int64_t>(n), len)
                       : std::max<int64_t>(0, len + static_cast<int64_t>(n));
    IntVec idx;
    for (int64_t i = len - k + 1; i <= len; ++i)
      idx.push_back(static_cast<int32_t>(i));
    return subset1(I, x, r_int(std::move(idx)));
  });

  reg(in, "diff", "(x, lag = 1)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x || !is_numeric_type(*x))
      I.error("'x' must be numeric");
    int lag = bc.arg[1] ? static_cast<int>(scalar_double(I, bc.arg[1], "lag"))
                        : 1;
    if (lag < 1) I.error("'lag' must be at least 1");
    size_t n = x->length();
    if (static_cast<size_t>(lag) >= n)
      return x->type() == Type::Int ? r_int({}) : r_real({});
    if (x->type() == Type::Int) {
      IntVec out;
      for (size_t i = lag; i < n; ++i) {
        int32_t a = ints(*x)[i], b = ints(*x)[i - lag];
        out.push_back(a == na::INT || b == na::INT ? na::INT : a - b);
      }
      return r_int(std::move(out));
    }
    RealVec out;
    for (size_t i = lag; i < n; ++i) {
      double a = reals(*x)[i], b = reals(*x)[i - lag];
      out.push_back(std::isnan(a) || std::isnan(b) ? na::real() : a - b);
    }
    return r_real(std::move(out));
  });

  reg(in, "lcg_next", "(state)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    double s = scalar_double(I, bc.arg[0], "state");
    if (std::isnan(s) || s < 0) I.error("invalid 'state' argument");
    uint64_t x = static_cast<uint64_t>(s);
    uint64_t next = (75u * x + 74u) % 65537u;
    return scalar_real(static_cast<double>(next));
  });

  (void)value_index;
}

}  // namespace deepr
