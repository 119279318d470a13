#include "deepr/indexing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "deepr/env.hpp"
#include "deepr/interp.hpp"

namespace deepr {

namespace {

constexpr int64_t kNAPos = std::numeric_limits<int64_t>::min();

// resolved selection: 0-based positions, kNAPos for NA/out-of-bounds slots
struct Selection {
  std::vector<int64_t> pos;
  // for character indexers that missed: the requested name (payload "" else)
  std::vector<RString> miss_names;
  bool from_character = false;
};

bool is_missing_arg(const RPtr& v) {
  return !v || (v->type() == Type::Sym && sym(*v).name.empty());
}

Selection resolve_index(Interp& in, const RObject& x, const RObject& idx,
                        bool extend_names) {
  Selection sel;
  size_t n = x.length();
  switch (idx.type()) {
    case Type::Null:
      return sel;
    case Type::Lgl: {
      size_t m = idx.length();
      size_t len = std::max(n, m);
      if (m == 0) return sel;
      for (size_t i = 0; i < len; ++i) {
        int8_t v = lgl(idx)[i % m];
        if (v == na::LGL)
          sel.pos.push_back(kNAPos);
        else if (v)
          sel.pos.push_back(i < n ? static_cast<int64_t>(i) : kNAPos);
      }
      return sel;
    }
    case Type::Int:
    case Type::Real: {
      bool has_neg = false, has_pos = false, has_na = false;
      size_t m = idx.length();
      std::vector<int64_t> raw;
      raw.reserve(m);
      for (size_t i = 0; i < m; ++i) {
        if (element_is_na(idx, i)) {
          has_na = true;
          raw.push_back(kNAPos);
          continue;
        }
        double d = element_as_double(idx, i);
        int64_t v = static_cast<int64_t>(std::trunc(d));
        if (v > 0) has_pos = true;
        if (v < 0) has_neg = true;
        raw.push_back(v);
      }
      if (has_neg && (has_pos || has_na))
        in.error("only 0's may be mixed with negative subscripts");
      if (has_neg) {
        std::vector<bool> drop(n, false);
        for (int64_t v : raw) {
          if (v == 0) continue;
          size_t k = static_cast<size_t>(-v);
          if (k >= 1 && k <= n) drop[k - 1] = true;
        }
        for (size_t i = 0; i < n; ++i)
          if (!drop[i]) sel.pos.push_back(static_cast<int64_t>(i));
        return sel;
      }
      for (int64_t v : raw) {
        if (v == kNAPos) {
          sel.pos.push_back(kNAPos);
        } else if (v == 0) {
          continue;
        } else if (static_cast<size_t>(v) <= n) {
          sel.pos.push_back(v - 1);
        } else {
          sel.pos.push_back(extend_names ? v - 1 : kNAPos);
        }
      }
      return sel;
    }
    case Type::Str: {
      sel.from_character = true;
      RPtr nm = names_of(x);
      const StrVec* names = nm && nm->type() == Type::Str ? &strs(*nm) : nullptr;
      for (size_t i = 0; i < idx.length(); ++i) {
        const RString& want = strs(idx)[i];
        int64_t found = kNAPos;
        if (want && names) {
          for (size_t k = 0; k < names->size(); ++k) {
            if ((*names)[k] && *(*names)[k] == *want) {
              found = static_cast<int64_t>(k);
              break;
            }
          }
        }
        sel.pos.push_back(found);
        sel.miss_names.push_back(found == kNAPos ? want : nullptr);
      }
      return sel;
    }
    default:
      in.error("invalid subscript type '" + type_of(idx) + "'");
  }
}

RPtr na_element_of(Type t) {
  switch (t) {
    case Type::Lgl: return r_lgl_na();
    case Type::Int: return scalar_int(na::INT);
    case Type::Real: return scalar_real(na::real());
    case Type::Str: return r_str({nullptr});
    default: return r_null();
  }
}

RPtr gather(Interp& in, const RObject& x, const Selection& sel) {
  size_t k = sel.pos.size();
  switch (x.type()) {
    case Type::Lgl: {
      LglVec out(k);
      for (size_t i = 0; i < k; ++i)
        out[i] = sel.pos[i] == kNAPos ? na::LGL : lgl(x)[sel.pos[i]];
      return r_lgl(std::move(out));
    }
    case Type::Int: {
      IntVec out(k);
      for (size_t i = 0; i < k; ++i)
        out[i] = sel.pos[i] == kNAPos ? na::INT : ints(x)[sel.pos[i]];
      return r_int(std::move(out));
    }
    case Type::Real: {
      RealVec out(k);
      for (size_t i = 0; i < k; ++i)
        out[i] = sel.pos[i] == kNAPos ? na::real() : reals(x)[sel.pos[i]];
      return r_real(std::move(out));
    }
    case Type::Str: {
      StrVec out(k);
      for (size_t i = 0; i < k; ++i)
        out[i] = sel.pos[i] == kNAPos ? nullptr : strs(x)[sel.pos[i]];
      return r_str(std::move(out));
    }
    case Type::List:
    case Type::Expr: {
      const auto& items =
          x.type() == Type::List ? list_items(x) : expr_items(x);
      std::vector<RPtr> out(k);
      for (size_t i = 0; i < k; ++i)
        out[i] = sel.pos[i] == kNAPos ? r_null() : items[sel.pos[i]];
      return x.type() == Type::List ? r_list(std::move(out))
                                    : r_expr(std::move(out));
    }
    case Type::Call: {
      // subsetting a call yields a call built from the selected pieces
      std::vector<RPtr> parts;
      std::vector<std::string> part_names;
      parts.push_back(call(x).fn);
      part_names.push_back("");
      for (const auto& a : call(x).args) {
        parts.push_back(a.expr);
        part_names.push_back(a.name);
      }
      std::vector<RPtr> picked;
      std::vector<std::string> picked_names;
      for (size_t i = 0; i < k; ++i) {
        if (sel.pos[i] == kNAPos || static_cast<size_t>(sel.pos[i]) >= parts.size())
          in.error("subscript out of bounds");
        picked.push_back(parts[sel.pos[i]]);
        picked_names.push_back(part_names[sel.pos[i]]);
      }
      if (picked.empty()) in.error("invalid call subsetting");
      std::vector<NamedExpr> args;
      for (size_t i = 1; i < picked.size(); ++i)
        args.push_back({picked_names[i], picked[i]});
      return r_call(picked[0], std::move(args));
    }
    default:
      in.error("object of type '" + type_of(x) + "' is not subsettable");
  }
}

}  // namespace

RPtr element_at(const RObject& x, size_t i) {
  switch (x.type()) {
    case Type::Lgl: return r_lgl({lgl(x)[i]});
    case Type::Int: return r_int({ints(x)[i]});
    case Type::Real: return r_real({reals(x)[i]});
    case Type::Str: return r_str({strs(x)[i]});
    case Type::List: return list_items(x)[i];
    case Type::Expr: return expr_items(x)[i];
    default: return r_null();
  }
}

RPtr subset1(Interp& in, RPtr x, RPtr i) {
  if (x->type() == Type::Env)
    in.error("object of type 'environment' is not subsettable");
  if (is_missing_arg(i)) return x;
  if (x->type() == Type::Null) return r_null();
  Selection sel = resolve_index(in, *x, *i, false);
  RPtr out = gather(in, *x, sel);
  // names travel along; other attributes are dropped
  RPtr nm = names_of(*x);
  if (!nm && sel.from_character && x->type() != Type::List) {
    StrVec misses(sel.pos.size(), nullptr);
    return set_attr_raw(out, "names", r_str(std::move(misses)));
  }
  if (nm && nm->type() == Type::Str) {
    StrVec outn(sel.pos.size());
    for (size_t k = 0; k < sel.pos.size(); ++k) {
      if (sel.pos[k] == kNAPos)
        outn[k] = nullptr;
      else
        outn[k] = strs(*nm)[sel.pos[k]];
    }
    out = set_attr_raw(out, "names", r_str(std::move(outn)));
  }
  return out;
}

RPtr subset_matrix(Interp& in, RPtr x, RPtr i, RPtr j, bool i_missing,
                   bool j_missing) {
  RPtr dim = get_attr(*x, "dim");
  if (!dim || dim->length() != 2) in.error("incorrect number of dimensions");
  int64_t nr = ints(*dim)[0], nc = ints(*dim)[1];

  RPtr dn = get_attr(*x, "dimnames");
  RPtr rn, cn;
  if (dn && dn->type() == Type::List && list_items(*dn).size() == 2) {
    rn = list_items(*dn)[0];
    cn = list_items(*dn)[1];
  }

  auto axis_select = [&](RPtr idx, bool missing, int64_t len,
                         RPtr axis_names) -> std::vector<int64_t> {
    std::vector<int64_t> out;
    if (missing) {
      for (int64_t k = 0; k < len; ++k) out.push_back(k);
      return out;
    }
    // fake a vector of the axis length so resolve_index can do the work
    RObject probe(RObject::Payload(RealVec(static_cast<size_t>(len), 0.0)));
    if (axis_names && axis_names->type() == Type::Str)
      probe.attrs.emplace_back("names", axis_names);
    Selection s = resolve_index(in, probe, *idx, false);
    for (int64_t p : s.pos) {
      if (p == kNAPos) in.error("subscript out of bounds");
      out.push_back(p);
    }
    return out;
  };

  std::vector<int64_t> rows = axis_select(i, i_missing, nr, rn);
  std::vector<int64_t> cols = axis_select(j, j_missing, nc, cn);

  Selection flat;
  for (int64_t c : cols)
    for (int64_t r : rows) flat.pos.push_back(c * nr + r);
  RPtr strip = drop_attrs(x);
  RPtr out = gather(in, *strip, flat);

  if (rows.size() == 1 || cols.size() == 1) {
    // drop to a plain vector; names come from the surviving axis
    RPtr axis_names = rows.size() == 1 ? cn : rn;
    const std::vector<int64_t>& kept = rows.size() == 1 ? cols : rows;
    if (rows.size() == 1 && cols.size() == 1) return out;
    if (axis_names && axis_names->type() == Type::Str) {
      StrVec nmv;
      for (int64_t k : kept) nmv.push_back(strs(*axis_names)[k]);
      out = set_attr_raw(out, "names", r_str(std::move(nmv)));
    }
    return out;
  }
  out = set_attr_raw(out, "dim",
                     r_int({static_cast<int32_t>(rows.size()),
                            static_cast<int32_t>(cols.size())}));
  if (rn || cn) {
    auto pick = [&](RPtr axis_names, const std::vector<int64_t>& kept) -> RPtr {
      if (!axis_names || axis_names->type() != Type::Str) return r_null();
      StrVec nmv;
      for (int64_t k : kept) nmv.push_back(strs(*axis_names)[k]);
      return r_str(std::move(nmv));
    };
    out = set_attr_raw(out, "dimnames",
                       r_list({pick(rn, rows), pick(cn, cols)}));
  }
  return out;
}

namespace {

// language objects expose their pieces: element 1 is the operator
RPtr call_part(Interp& in, const CallData& c, int64_t k) {
  if (k == 1) return c.fn;
  if (k < 1 || static_cast<size_t>(k) > c.args.size() + 1)
    in.error("subscript out of bounds");
  return c.args[static_cast<size_t>(k) - 2].expr;
}

}  // namespace

RPtr extract(Interp& in, RPtr x, RPtr i) {
  if (x->type() == Type::Env) {
    if (i->type() != Type::Str || i->length() != 1)
      in.error("wrong arguments for subsetting an environment");
    const RString& name = strs(*i)[0];
    if (!name) in.error("subscript out of bounds");
    Binding* b = envref(*x)->find_local(*name);
    if (!b) return r_null();
    return b->promise ? in.force(b->promise) : b->value;
  }
  if (is_missing_arg(i) || i->length() == 0)
    in.error("subscript out of bounds");
  if (i->length() > 1 && (i->type() == Type::Int || i->type() == Type::Real)) {
    // recursive extraction: x[[c(1, 3)]] == x[[1]][[3]]
    RPtr cur = x;
    for (size_t k = 0; k < i->length(); ++k) {
      double d = element_as_double(*i, k);
      if (std::isnan(d)) in.error("subscript out of bounds");
      cur = extract(in, cur, scalar_real(d));
    }
    return cur;
  }
  if (i->length() > 1)
    in.error("subscript out of bounds");

  if (i->type() == Type::Str) {
    const RString& want = strs(*i)[0];
    if (!want) in.error("subscript out of bounds");
    RPtr nm = names_of(*x);
    if (nm && nm->type() == Type::Str) {
      const StrVec& names = strs(*nm);
      for (size_t k = 0; k < names.size(); ++k)
        if (names[k] && *names[k] == *want) return drop_attrs(element_at(*x, k));
    }
    if (x->type() == Type::List) return r_null();
    in.error("subscript out of bounds");
  }

  if (element_is_na(*i, 0)) {
    if (x->type() == Type::List) return r_null();
    in.error("subscript out of bounds");
  }
  double d = element_as_double(*i, 0);
  int64_t v = static_cast<int64_t>(std::trunc(d));
  if (x->type() == Type::Call)
    return call_part(in, call(*x), v);
  if (v < 0) in.error("invalid negative subscript");
  if (v == 0 || static_cast<size_t>(v) > x->length())
    in.error("subscript out of bounds");
  return drop_attrs(element_at(*x, static_cast<size_t>(v - 1)));
}

namespace {

// widen x (and carry attributes over) so `value`'s type fits
RPtr widen_for_assign(Interp& in, RPtr x, const RObject& value) {
  Type ct = common_type(x->type(), value.type());
  if (value.type() == Type::Null) ct = x->type();  // handled separately
  if (!is_atomic(value) && value.type() != Type::Null &&
      value.type() != Type::List)
    ct = Type::List;
  if (x->type() == ct || x->type() == Type::Null) {
    if (x->type() == Type::Null && ct != Type::Null) {
      switch (ct) {
        case Type::Lgl: return r_lgl({});
        case Type::Int: return r_int({});
        case Type::Real: return r_real({});
        case Type::Str: return r_str({});
        case Type::List: return r_list({});
        default: return x;
      }
    }
    return x;
  }
  Attributes keep = x->attrs;
  RPtr out = coerce(in, *x, ct);
  auto copy = std::make_shared<RObject>(*out);
  copy->attrs = keep;
  return copy;
}

void set_element(std::shared_ptr<RObject>& x, size_t pos, const RObject& value,
                 size_t vi) {
  switch (x->type()) {
    case Type::Lgl: std::get<LglVec>(x->data)[pos] = lgl(value)[vi]; break;
    case Type::Int: std::get<IntVec>(x->data)[pos] = ints(value)[vi]; break;
    case Type::Real: std::get<RealVec>(x->data)[pos] = reals(value)[vi]; break;
    case Type::Str: std::get<StrVec>(x->data)[pos] = strs(value)[vi]; break;
    case Type::List:
      std::get<ListVec>(x->data).items[pos] =
          value.type() == Type::List ? list_items(value)[vi]
                                     : element_at(value, vi);
      break;
    default: break;
  }
}

void grow_to(Interp& in, std::shared_ptr<RObject>& x, size_t len) {
  switch (x->type()) {
    case Type::Lgl: std::get<LglVec>(x->data).resize(len, na::LGL); break;
    case Type::Int: std::get<IntVec>(x->data).resize(len, na::INT); break;
    case Type::Real: std::get<RealVec>(x->data).resize(len, na::real()); break;
    case Type::Str: std::get<StrVec>(x->data).resize(len, nullptr); break;
    case Type::List:
      std::get<ListVec>(x->data).items.resize(len, r_null());
      break;
    default: in.error("cannot extend this object");
  }
  // extend names with blanks
  for (auto& kv : x->attrs) {
    if (kv.first == "names") {
      StrVec nm = strs(*kv.second);
      nm.resize(len, rstring(""));
      kv.second = r_str(std::move(nm));
    }
  }
}

void ensure_names(std::shared_ptr<RObject>& x) {
  if (get_attr(*x, "names")) return;
  StrVec nm(x->length(), rstring(""));
  x->attrs.emplace_back("names", r_str(std::move(nm)));
}

void set_name_at(std::shared_ptr<RObject>& x, size_t pos, const RString& name) {
  ensure_names(x);
  for (auto& kv : x->attrs) {
    if (kv.first == "names") {
      StrVec nm = strs(*kv.second);
      if (nm.size() < x->length()) nm.resize(x->length(), rstring(""));
      nm[pos] = name;
      kv.second = r_str(std::move(nm));
    }
  }
}

}  // namespace

RPtr subset_assign(Interp& in, RPtr x, RPtr i, RPtr value) {
  if (x->type() == Type::Env)
    in.error("object of type 'environment' is not subsettable");

  bool whole = is_missing_arg(i);

  // list element deletion via NULL value
  if (value->type() == Type::Null &&
      (x->type() == Type::List || x->type() == Type::Null)) {
    if (x->type() == Type::Null) return r_null();
    Selection sel = whole ? Selection{} : resolve_index(in, *x, *i, false);
    std::vector<bool> drop(x->length(), false);
    if (whole)
      std::fill(drop.begin(), drop.end(), true);
    else
      for (int64_t p : sel.pos)
        if (p != kNAPos) drop[p] = true;
    std::vector<RPtr> items;
    StrVec names;
    RPtr nm = names_of(*x);
    for (size_t k = 0; k < x->length(); ++k) {
      if (drop[k]) continue;
      items.push_back(list_items(*x)[k]);
      if (nm) names.push_back(strs(*nm)[k]);
    }
    RPtr out = r_list(std::move(items));
    auto copy = std::make_shared<RObject>(*out);
    copy->attrs = x->attrs;
    if (nm) {
      for (auto& kv : copy->attrs)
        if (kv.first == "names") kv.second = r_str(names);
    }
    return copy;
  }
  if (value->type() == Type::Null)
    in.error("replacement has length zero");

  RPtr widened = widen_for_assign(in, x, *value);
  RPtr v = value;
  if (widened->type() != Type::List && v->type() != widened->type())
    v = coerce(in, *v, widened->type());
  if (widened->type() == Type::List && is_atomic(*v))
    v = coerce(in, *v, Type::List);

  auto out = std::make_shared<RObject>(*widened);

  Selection sel;
  if (whole) {
    for (size_t k = 0; k < out->length(); ++k)
      sel.pos.push_back(static_cast<int64_t>(k));
  } else {
    sel = resolve_index(in, *out, *i, true);
  }

  // extension: find the largest target position
  int64_t maxpos = -1;
  for (int64_t p : sel.pos)
    if (p != kNAPos) maxpos = std::max(maxpos, p);
  bool has_char_miss = false;
  for (size_t k = 0; k < sel.miss_names.size(); ++k)
    if (sel.miss_names[k]) has_char_miss = true;
  if (maxpos >= 0 && static_cast<size_t>(maxpos) >= out->length())
    grow_to(in, out, static_cast<size_t>(maxpos) + 1);
  if (has_char_miss) {
    size_t extra = 0;
    for (size_t k = 0; k < sel.miss_names.size(); ++k)
      if (sel.miss_names[k]) ++extra;
    size_t base = out->length();
    grow_to(in, out, base + extra);
    size_t next = base;
    for (size_t k = 0; k < sel.miss_names.size(); ++k) {
      if (sel.miss_names[k]) {
        set_name_at(out, next, sel.miss_names[k]);
        sel.pos[k] = static_cast<int64_t>(next);
        ++next;
      }
    }
  }

  size_t vn = v->length();
  size_t targets = 0;
  for (int64_t p : sel.pos)
    if (p != kNAPos) ++targets;
  if (vn == 0 && targets > 0) in.error("replacement has length zero");
  if (targets > 0 && vn > 0 && targets % vn != 0)
    in.warn_call(
        "number of items to replace is not a multiple of replacement length");

  size_t vi = 0;
  for (int64_t p : sel.pos) {
    if (p == kNAPos) {
      // NA subscripts only allowed when nothing is really assigned there
      if (vn > 1)
        in.error("NAs are not allowed in subscripted assignments");
      continue;
    }
    set_element(out, static_cast<size_t>(p), *v, vi % vn);
    ++vi;
  }
  return out;
}

RPtr extract_assign(Interp& in, RPtr x, RPtr i, RPtr value) {
  if (x->type() == Type::Env) {
    if (i->type() != Type::Str || i->length() != 1 || !strs(*i)[0])
      in.error("wrong args for environment subassignment");
    if (envref(*x)->locked())
      in.error("cannot change value of locked binding for '" + *strs(*i)[0] +
               "'");
    envref(*x)->set(*strs(*i)[0], value);
    return x;
  }
  if (is_missing_arg(i) || i->length() == 0)
    in.error("subscript out of bounds");

  if (x->type() == Type::Call) {
    double d = element_as_double(*i, 0);
    int64_t k = static_cast<int64_t>(std::trunc(d));
    const CallData& c = call(*x);
    if (k == 1) return r_call(value, c.args);
    if (k < 1 || static_cast<size_t>(k) > c.args.size() + 1)
      in.error("subscript out of bounds");
    std::vector<NamedExpr> args = c.args;
    args[static_cast<size_t>(k) - 2].expr = value;
    return r_call(c.fn, std::move(args));
  }

  // deletion from a list
  if (value->type() == Type::Null && x->type() == Type::List)
    return subset_assign(in, x, i, value);

  bool is_list = x->type() == Type::List || x->type() == Type::Null;
  RPtr v = value;
  RPtr base = x;
  if (is_list) {
    if (x->type() == Type::Null) base = r_list({});
  } else {
    // an atomic element assignment follows the common-type rule
    if (value->type() == Type::List || !is_atomic(*value))
      base = coerce(in, *x, Type::List), is_list = true;
  }

  auto out = std::make_shared<RObject>(
      *(is_list ? base : widen_for_assign(in, base, *v)));
  if (!is_list && v->type() != out->type()) v = coerce(in, *v, out->type());
  if (!is_list && v->length() != 1)
    in.error("more elements supplied than there are to replace");

  int64_t pos = -1;
  if (i->type() == Type::Str) {
    const RString& want = strs(*i)[0];
    if (!want) in.error("subscript out of bounds");
    RPtr nm = names_of(*out);
    if (nm) {
      const StrVec& names = strs(*nm);
      for (size_t k = 0; k < names.size(); ++k)
        if (names[k] && *names[k] == *want) {
          pos = static_cast<int64_t>(k);
          break;
        }
    }
    if (pos < 0) {
      grow_to(in, out, out->length() + 1);
      pos = static_cast<int64_t>(out->length()) - 1;
      set_name_at(out, static_cast<size_t>(pos), want);
    }
  } else {
    if (element_is_na(*i, 0)) in.error("subscript out of bounds");
    double d = element_as_double(*i, 0);
    int64_t w = static_cast<int64_t>(std::trunc(d));
    if (w <= 0) in.error("subscript out of bounds");
    if (static_cast<size_t>(w) > out->length())
      grow_to(in, out, static_cast<size_t>(w));
    pos = w - 1;
  }
  if (is_list) {
    std::get<ListVec>(out->data).items[static_cast<size_t>(pos)] = v;
  } else {
    set_element(out, static_cast<size_t>(pos), *v, 0);
  }
  return out;
}

RPtr dollar_get(Interp& in, RPtr x, const std::string& name) {
  if (x->type() == Type::Env) {
    Binding* b = envref(*x)->find_local(name);
    if (!b) return r_null();
    return b->promise ? in.force(b->promise) : b->value;
  }
  if (is_atomic(*x)) in.error("$ operator is invalid for atomic vectors");
  if (x->type() != Type::List) in.error("$ operator not supported here");
  RPtr nm = names_of(*x);
  if (!nm) return r_null();
  const StrVec& names = strs(*nm);
  for (size_t k = 0; k < names.size(); ++k)
    if (names[k] && *names[k] == name) return list_items(*x)[k];
  return r_null();
}

RPtr dollar_set(Interp& in, RPtr x, const std::string& name, RPtr value) {
  if (x->type() == Type::Env) {
    if (envref(*x)->locked())
      in.error("cannot change value of locked binding for '" + name + "'");
    envref(*x)->set(name, value);
    return x;
  }
  if (is_atomic(*x) && x->type() != Type::Null)
    in.error("$ operator is invalid for atomic vectors");
  return extract_assign(in, x->type() == Type::Null ? r_list({}) : x,
                        scalar_str(name), value);
}

}  // namespace deepr
