// Control flow, assignment, closures/promises machinery, environments,
// condition handling, and the dispatch entry points.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "builtins_support.hpp"
#include "deepr/deparse.hpp"
#include "deepr/indexing.hpp"
#include "deepr/printer.hpp"
#include "deepr/vecops.hpp"

namespace deepr {

std::vector<Formal> parse_formals(const std::string& spec) {
  ParseResult pr = parse_program("function" + spec + " 0");
  std::vector<Formal> out;
  if (!pr.error.empty() || pr.exprs.size() != 1) return out;
  const CallData& c = call(*pr.exprs[0]);
  for (size_t i = 0; i + 1 < c.args.size(); ++i) {
    RPtr deflt = is_sym_named(*c.args[i].expr, "") ? nullptr : c.args[i].expr;
    out.push_back({c.args[i].name, deflt});
  }
  return out;
}

void register_builtin(Interp& in, const std::string& name,
                      const std::string& formals_spec, int vis, bool special,
                      std::function<RPtr(Interp&, BuiltinCall&)> fn) {
  auto b = std::make_shared<RBuiltin>();
  b->name = name;
  b->formals = parse_formals(formals_spec);
  b->special = special;
  b->vis = vis;
  b->fn = std::move(fn);
  in.base_env->set(name, r_builtin(b));
}

bool scalar_flag(Interp& in, RPtr v, bool deflt) {
  if (!v || v->type() == Type::Null) return deflt;
  if (v->length() < 1) in.error("invalid argument of length 0");
  switch (v->type()) {
    case Type::Lgl: {
      int8_t e = lgl(*v)[0];
      if (e == na::LGL) in.error("missing value where TRUE/FALSE needed");
      return e != 0;
    }
    case Type::Int: return ints(*v)[0] != 0;
    case Type::Real: return reals(*v)[0] != 0.0;
    default: in.error("invalid logical argument");
  }
}

double scalar_double(Interp& in, RPtr v, const char* what) {
  if (!v || v->length() < 1 || !is_atomic(*v))
    in.error(std::string("invalid '") + what + "' argument");
  return element_as_double(*v, 0);
}

std::string scalar_string(Interp& in, RPtr v, const char* what) {
  if (!v || v->type() != Type::Str || v->length() < 1 || !strs(*v)[0])
    in.error(std::string("invalid '") + what + "' argument");
  return *strs(*v)[0];
}

bool condition_value(Interp& in, const RObject& v, RPtr call_expr) {
  size_t n = v.length();
  if (n > 1) in.error_call("the condition has length > 1", call_expr);
  if (n == 0) in.error_call("argument is of length zero", call_expr);
  int8_t r;
  switch (v.type()) {
    case Type::Lgl: r = lgl(v)[0]; break;
    case Type::Int: r = ints(v)[0] == na::INT ? na::LGL : ints(v)[0] != 0; break;
    case Type::Real:
      r = std::isnan(reals(v)[0]) ? na::LGL : reals(v)[0] != 0.0;
      break;
    case Type::Str: {
      const RString& s = strs(v)[0];
      if (!s) r = na::LGL;
      else if (*s == "TRUE" || *s == "true" || *s == "T") r = 1;
      else if (*s == "FALSE" || *s == "false" || *s == "F") r = 0;
      else in.error_call("argument is not interpretable as logical", call_expr);
      break;
    }
    default:
      in.error_call("argument is not interpretable as logical", call_expr);
  }
  if (r == na::LGL)
    in.error_call("missing value where TRUE/FALSE needed", call_expr);
  return r != 0;
}

namespace {

RPtr raw_arg(BuiltinCall& bc, size_t i) {
  return bc.raw && i < bc.raw->size() ? (*bc.raw)[i].expr : nullptr;
}

bool is_empty_marker(const RPtr& e) {
  return !e || (e->type() == Type::Sym && sym(*e).name.empty());
}

// ---------------------------------------------------------------------------
// assignment (including the replacement-function protocol)
// ---------------------------------------------------------------------------

void bind_inherit(Interp& in, EnvPtr env, const std::string& name, RPtr value) {
  for (EnvPtr e = env->enclosure(); e; e = e->enclosure()) {
    if (e->has_local(name)) {
      if (e->locked())
        in.error("cannot change value of locked binding for '" + name + "'");
      e->set(name, value);
      return;
    }
  }
  in.global_env->set(name, value);
}

void assign_value(Interp& in, EnvPtr env, const std::string& name, RPtr value,
                  bool superassign) {
  if (superassign) {
    bind_inherit(in, env, name, value);
  } else {
    if (env->locked())
      in.error("cannot add bindings to a locked environment");
    env->set(name, value);
  }
}

RPtr eval_replacement(Interp& in, RPtr lhs, RPtr value, EnvPtr env,
                      bool superassign, RPtr display_call) {
  // collect the call chain down to the base symbol
  std::vector<RPtr> chain;
  RPtr leaf = lhs;
  while (leaf->type() == Type::Call) {
    const CallData& c = call(*leaf);
    if (c.fn->type() != Type::Sym)
      in.error("invalid function in complex assignment");
    if (c.args.empty()) in.error("invalid assignment target");
    chain.push_back(leaf);
    leaf = c.args[0].expr;
  }
  if (leaf->type() == Type::Str && leaf->length() == 1 && strs(*leaf)[0])
    leaf = r_sym(*strs(*leaf)[0]);
  if (leaf->type() != Type::Sym || sym(*leaf).name.empty())
    in.error("invalid assignment target");
  const std::string base = sym(*leaf).name;

  // fetch the current value (enclosure lookup for both <- and <<-)
  RPtr cur;
  if (superassign) {
    Binding* b = env->enclosure() ? env->enclosure()->find(base) : nullptr;
    if (!b) in.error_nocall("object '" + base + "' not found");
    cur = b->promise ? in.force(b->promise) : b->value;
  } else {
    cur = in.eval(r_sym(base), env);
  }
  env->set("*tmp*", cur);

  // rebuild the target chain with `*tmp*` at the base position
  std::vector<RPtr> rewritten(chain.size() + 1);
  rewritten[chain.size()] = r_sym("*tmp*");
  for (size_t j = chain.size(); j-- > 0;) {
    const CallData& c = call(*chain[j]);
    std::vector<NamedExpr> args = c.args;
    args[0].expr = rewritten[j + 1];
    rewritten[j] = r_call(c.fn, std::move(args));
  }

  // language values must not re-evaluate when the built call runs
  RPtr value_expr = value;
  if (value->type() == Type::Sym || value->type() == Type::Call ||
      value->type() == Type::Expr)
    value_expr = r_call(r_sym("quote"), {{"", value}});
  for (size_t j = 0; j < chain.size(); ++j) {
    const CallData& c = call(*chain[j]);
    std::string setter = sym(*c.fn).name + "<-";
    std::vector<NamedExpr> args;
    args.push_back({"", rewritten[j + 1]});
    for (size_t k = 1; k < c.args.size(); ++k) args.push_back(c.args[k]);
    args.push_back({"value", value_expr});
    value_expr = r_call(r_sym(setter), std::move(args));
  }

  // errors raised by the setter chain display the surface assignment
  size_t override_base = in.call_display_overrides.size();
  if (display_call) {
    for (RPtr node = value_expr; node && node->type() == Type::Call;) {
      in.call_display_overrides.push_back({node.get(), display_call});
      const CallData& nc = call(*node);
      node = nc.args.empty() ? nullptr : nc.args[0].expr;
    }
  }
  auto drop_overrides = [&]() {
    in.call_display_overrides.resize(override_base);
  };

  RPtr result;
  try {
    result = in.eval(value_expr, env);
  } catch (...) {
    drop_overrides();
    env->remove("*tmp*");
    throw;
  }
  drop_overrides();
  env->remove("*tmp*");
  assign_value(in, env, base, result, superassign);
  return value;
}

RPtr do_assign_form(Interp& in, BuiltinCall& bc, bool superassign) {
  if (!bc.raw || bc.raw->size() != 2)
    in.error_call("invalid assignment", bc.call_expr);
  RPtr lhs = (*bc.raw)[0].expr;
  RPtr rhs = (*bc.raw)[1].expr;
  RPtr value = in.eval(rhs, bc.env);
  if (lhs->type() == Type::Sym) {
    if (sym(*lhs).name.empty()) in.error("invalid assignment target");
    assign_value(in, bc.env, sym(*lhs).name, value, superassign);
  } else if (lhs->type() == Type::Str && lhs->length() == 1 && strs(*lhs)[0]) {
    assign_value(in, bc.env, *strs(*lhs)[0], value, superassign);
  } else if (lhs->type() == Type::Call) {
    eval_replacement(in, lhs, value, bc.env, superassign, bc.call_expr);
  } else {
    in.error("invalid assignment target");
  }
  in.visible = false;
  return value;
}

// ---------------------------------------------------------------------------
// condition objects
// ---------------------------------------------------------------------------

RPtr make_condition(const std::string& cls, const std::string& message,
                    RPtr call_expr) {
  RPtr cond = r_list({scalar_str(message), call_expr ? call_expr : r_null()});
  cond = set_attr_raw(cond, "names", r_str({rstring("message"), rstring("call")}));
  cond = set_attr_raw(
      cond, "class",
      r_str({rstring(cls == "error" ? "simpleError" : "simpleWarning"),
             rstring(cls), rstring("condition")}));
  return cond;
}

}  // namespace

void register_core_builtins(Interp& in) {
  // --- grouping and control flow --------------------------------------------
  reg_special(in, "{", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr result = r_null();
    I.visible = true;
    if (bc.raw)
      for (const auto& a : *bc.raw) result = I.eval(a.expr, bc.env);
    return result;
  });

  reg_special(in, "(", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr v = I.eval(raw_arg(bc, 0), bc.env);
    return v;
  }, kVisible);

  reg_special(in, "if", "(cond, yes, no)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr cond = I.eval(raw_arg(bc, 0), bc.env);
    if (condition_value(I, *cond, bc.call_expr))
      return I.eval(raw_arg(bc, 1), bc.env);
    if (bc.raw && bc.raw->size() >= 3) return I.eval(raw_arg(bc, 2), bc.env);
    I.visible = false;
    return r_null();
  });

  reg_special(in, "while", "(cond, body)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    while (true) {
      RPtr cond = I.eval(raw_arg(bc, 0), bc.env);
      if (!condition_value(I, *cond, bc.call_expr)) break;
      try {
        I.eval(raw_arg(bc, 1), bc.env);
      } catch (LoopBreak&) {
        break;
      } catch (LoopNext&) {
        continue;
      }
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  reg_special(in, "repeat", "(body)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    while (true) {
      try {
        I.eval(raw_arg(bc, 0), bc.env);
      } catch (LoopBreak&) {
        break;
      } catch (LoopNext&) {
        continue;
      }
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  reg_special(in, "for", "(var, seq, body)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr var = raw_arg(bc, 0);
    RPtr seq = I.eval(raw_arg(bc, 1), bc.env);
    const std::string& name = sym(*var).name;
    size_t n = seq->length();
    if (seq->type() == Type::Null) n = 0;
    for (size_t i = 0; i < n; ++i) {
      bc.env->set(name, drop_attrs(element_at(*seq, i)));
      try {
        I.eval(raw_arg(bc, 2), bc.env);
      } catch (LoopBreak&) {
        break;
      } catch (LoopNext&) {
        continue;
      }
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  reg_special(in, "break", "()", [](Interp&, BuiltinCall&) -> RPtr {
    throw LoopBreak{};
  });
  reg_special(in, "next", "()", [](Interp&, BuiltinCall&) -> RPtr {
    throw LoopNext{};
  });

  reg_special(in, "return", "(value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (I.stack.empty())
      I.error_call("no function to return from, jumping to top level",
                   bc.call_expr);
    RPtr v = bc.raw && !bc.raw->empty() ? I.eval(raw_arg(bc, 0), bc.env)
                                        : r_null();
    throw ReturnUnwind{v, I.stack.back().get()};
  });

  reg_special(in, "&&", "(x, y)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr lhs = I.eval(raw_arg(bc, 0), bc.env);
    if (lhs->length() != 1 || !is_atomic(*lhs))
      I.error_call("invalid 'x' type in 'x && y'", bc.call_expr);
    int8_t a = lgl(*coerce(I, *lhs, Type::Lgl))[0];
    if (a == 0) {
      I.visible = true;
      return r_false();
    }
    RPtr rhs = I.eval(raw_arg(bc, 1), bc.env);
    if (rhs->length() != 1 || !is_atomic(*rhs))
      I.error_call("invalid 'y' type in 'x && y'", bc.call_expr);
    int8_t b = lgl(*coerce(I, *rhs, Type::Lgl))[0];
    I.visible = true;
    if (b == 0) return r_false();
    if (a == na::LGL || b == na::LGL) return r_lgl_na();
    return r_true();
  }, kVisible);

  reg_special(in, "||", "(x, y)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr lhs = I.eval(raw_arg(bc, 0), bc.env);
    if (lhs->length() != 1 || !is_atomic(*lhs))
      I.error_call("invalid 'x' type in 'x || y'", bc.call_expr);
    int8_t a = lgl(*coerce(I, *lhs, Type::Lgl))[0];
    if (a == 1) {
      I.visible = true;
      return r_true();
    }
    RPtr rhs = I.eval(raw_arg(bc, 1), bc.env);
    if (rhs->length() != 1 || !is_atomic(*rhs))
      I.error_call("invalid 'y' type in 'x || y'", bc.call_expr);
    int8_t b = lgl(*coerce(I, *rhs, Type::Lgl))[0];
    I.visible = true;
    if (b == 1) return r_true();
    if (a == na::LGL || b == na::LGL) return r_lgl_na();
    return r_false();
  }, kVisible);

  reg_special(in, "<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return do_assign_form(I, bc, false);
  }, kInvisible);
  reg_special(in, "<<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return do_assign_form(I, bc, true);
  }, kInvisible);

  reg_special(in, "function", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    auto c = std::make_shared<RClosure>();
    if (bc.raw) {
      for (size_t i = 0; i + 1 < bc.raw->size(); ++i) {
        const NamedExpr& a = (*bc.raw)[i];
        RPtr deflt = is_empty_marker(a.expr) ? nullptr : a.expr;
        c->formals.push_back({a.name, deflt});
      }
      c->body = bc.raw->empty() ? r_null() : bc.raw->back().expr;
    } else {
      c->body = r_null();
    }
    c->env = bc.env;
    if (RPtr src = get_attr(*bc.call_expr, "__src__"))
      c->src = *strs(*src)[0];
    return r_closure(c);
  }, kVisible);

  // unsupported-but-parsed operators
  for (const char* op : {"::", ":::", "@", "?", ":="}) {
    std::string name = op;
    reg_special(in, name, "(...)", [name](Interp& I, BuiltinCall& bc) -> RPtr {
      I.error_call("unsupported operator '" + name + "'", bc.call_expr);
    });
  }
  reg_special(in, "~", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr f = r_list({bc.call_expr, r_env(bc.env)});
    f = set_attr_raw(f, "names",
                     r_str({rstring("formula"), rstring("environment")}));
    f = set_attr_raw(f, "class", r_str({rstring("formula")}));
    I.visible = true;
    return f;
  });

  // --- `$` and `@` accessors -------------------------------------------------
  reg_special(in, "$", "(x, name)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = I.eval(raw_arg(bc, 0), bc.env);
    RPtr nm = raw_arg(bc, 1);
    std::string name;
    if (nm->type() == Type::Sym) name = sym(*nm).name;
    else if (nm->type() == Type::Str && strs(*nm)[0]) name = *strs(*nm)[0];
    else I.error_call("invalid subscript type", bc.call_expr);
    I.visible = true;
    return dollar_get(I, x, name);
  }, kVisible);

  reg_special(in, "$<-", "(x, name, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = I.eval(raw_arg(bc, 0), bc.env);
    RPtr nm = raw_arg(bc, 1);
    RPtr value = I.eval(raw_arg(bc, 2), bc.env);
    std::string name;
    if (nm->type() == Type::Sym) name = sym(*nm).name;
    else if (nm->type() == Type::Str && strs(*nm)[0]) name = *strs(*nm)[0];
    else I.error_call("invalid subscript type", bc.call_expr);
    return dollar_set(I, x, name, value);
  }, kVisible);

  // --- conditions -------------------------------------------------------------
  reg(in, "stop", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string msg;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      if (d.second->type() == Type::List &&
          get_attr(*d.second, "class")) {
        // a condition object: re-raise with its own message/call
        RPtr m = dollar_get(I, d.second, "message");
        RPtr c = dollar_get(I, d.second, "call");
        I.raise(RError(m->type() == Type::Str && strs(*m)[0] ? *strs(*m)[0]
                                                             : "",
                       c && c->type() != Type::Null ? c : nullptr));
      }
      RPtr s = coerce(I, *d.second, Type::Str);
      for (const auto& e : strs(*s))
        if (e) msg += *e;
    }
    RPtr at = I.stack.empty() ? nullptr : I.stack.back()->call;
    I.raise(RError(msg, at));
  });

  reg(in, "warning", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string msg;
    for (const auto& d : bc.dots) {
      if (!d.second) continue;
      RPtr s = coerce(I, *d.second, Type::Str);
      for (const auto& e : strs(*s))
        if (e) msg += *e;
    }
    RPtr at = I.stack.empty() ? nullptr : I.stack.back()->call;
    I.warn_at(msg, at);
    I.visible = false;
    return scalar_str(msg);
  }, kInvisible);

  reg_special(in, "stopifnot", "(...)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr at = I.stack.empty() ? nullptr : I.stack.back()->call;
    if (bc.raw) {
      for (const auto& a : *bc.raw) {
        RPtr v = I.eval(a.expr, bc.env);
        bool ok = v->type() == Type::Lgl && v->length() >= 1;
        if (ok)
          for (int8_t e : lgl(*v))
            if (e != 1) ok = false;
        if (!ok) {
          std::string label = !a.name.empty() ? a.name : deparse1(*a.expr);
          std::string tail =
              v->length() > 1 ? " are not all TRUE" : " is not TRUE";
          I.error_call(label + tail, at);
        }
      }
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  reg_special(in, "tryCatch", "(expr, ..., finally)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr expr, finally_expr, error_handler_expr, warning_handler_expr;
    if (bc.raw) {
      for (const auto& a : *bc.raw) {
        if (a.name == "finally") finally_expr = a.expr;
        else if (a.name == "error") error_handler_expr = a.expr;
        else if (a.name == "warning") warning_handler_expr = a.expr;
        else if (a.name.empty() || a.name == "expr") {
          if (!expr) expr = a.expr;
        } else {
          I.error_call("unsupported handler class '" + a.name + "'",
                       bc.call_expr);
        }
      }
    }
    RPtr error_handler =
        error_handler_expr ? I.eval(error_handler_expr, bc.env) : nullptr;
    RPtr warning_handler =
        warning_handler_expr ? I.eval(warning_handler_expr, bc.env) : nullptr;

    auto run_finally = [&]() {
      if (finally_expr) I.eval(finally_expr, bc.env);
    };

    size_t barrier = 0;
    if (warning_handler) {
      barrier = ++I.warning_barrier_seq;
      I.warning_barriers.push_back(barrier);
    }
    if (error_handler) ++I.error_handler_depth;
    auto pop_barrier = [&]() {
      if (warning_handler && !I.warning_barriers.empty() &&
          I.warning_barriers.back() == barrier)
        I.warning_barriers.pop_back();
      if (error_handler) --I.error_handler_depth;
    };

    RPtr result;
    try {
      result = expr ? I.eval(expr, bc.env) : r_null();
    } catch (RError& e) {
      pop_barrier();
      if (error_handler) {
        RPtr cond = make_condition("error", e.message, e.call);
        RPtr r;
        try {
          r = I.apply(error_handler, {{"", cond}}, bc.env);
        } catch (...) {
          run_finally();
          throw;
        }
        run_finally();
        return r;
      }
      run_finally();
      throw;
    } catch (WarningUnwind& w) {
      pop_barrier();
      if (warning_handler && w.target == barrier) {
        RPtr cond = make_condition("warning", w.message, w.call);
        RPtr r;
        try {
          r = I.apply(warning_handler, {{"", cond}}, bc.env);
        } catch (...) {
          run_finally();
          throw;
        }
        run_finally();
        return r;
      }
      run_finally();
      throw;
    } catch (...) {
      pop_barrier();
      run_finally();
      throw;
    }
    pop_barrier();
    run_finally();
    return result;
  });

  reg_special(in, "suppressWarnings", "(expr)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    ++I.suppress_warnings;
    RPtr v;
    try {
      v = I.eval(raw_arg(bc, 0), bc.env);
    } catch (...) {
      --I.suppress_warnings;
      throw;
    }
    --I.suppress_warnings;
    return v;
  });

  reg(in, "conditionMessage", "(c)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return dollar_get(I, bc.arg[0], "message");
  });
  reg(in, "conditionCall", "(c)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    return dollar_get(I, bc.arg[0], "call");
  });

  reg(in, "invisible", "(x)", [](Interp&, BuiltinCall& bc) -> RPtr {
    return bc.arg[0] ? bc.arg[0] : r_null();
  }, kInvisible);

  // --- environments -----------------------------------------------------------
  reg(in, "new.env", "(hash = TRUE, parent = parent.frame(), size = 29L)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    EnvPtr parent = bc.arg[1] && bc.arg[1]->type() == Type::Env
                        ? envref(*bc.arg[1])
                        : I.global_env;
    return r_env(std::make_shared<Environment>(parent));
  });

  reg(in, "globalenv", "()", [](Interp& I, BuiltinCall&) -> RPtr {
    return r_env(I.global_env);
  });
  reg(in, "baseenv", "()", [](Interp& I, BuiltinCall&) -> RPtr {
    return r_env(I.base_env);
  });
  reg(in, "emptyenv", "()", [](Interp& I, BuiltinCall&) -> RPtr {
    return r_env(I.empty_env);
  });

  reg_special(in, "environment", "(fun = NULL)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    I.visible = true;
    if (!bc.raw || bc.raw->empty() || is_empty_marker((*bc.raw)[0].expr))
      return r_env(bc.env);
    RPtr f = I.eval((*bc.raw)[0].expr, bc.env);
    if (f->type() == Type::Null) return r_env(bc.env);
    if (f->type() == Type::Closure) return r_env(closure(*f)->env);
    if (f->type() == Type::List) {
      // formula-style objects carry their environment as an element
      RPtr e = dollar_get(I, f, "environment");
      if (e->type() == Type::Env) return e;
    }
    return r_null();
  }, kVisible);

  reg(in, "environment<-", "(x, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Closure)
      I.error("environment<- requires a function");
    if (!bc.arg[1] || bc.arg[1]->type() != Type::Env)
      I.error("replacement object is not an environment");
    auto c = std::make_shared<RClosure>(*closure(*bc.arg[0]));
    c->env = envref(*bc.arg[1]);
    return r_closure(c);
  });

  reg(in, "parent.env", "(env)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Env)
      I.error("argument is not an environment");
    EnvPtr e = envref(*bc.arg[0]);
    if (e == I.empty_env) I.error("the empty environment has no parent");
    return r_env(e->enclosure());
  });

  reg(in, "parent.env<-", "(env, value)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Env)
      I.error("argument is not an environment");
    if (!bc.arg[1] || bc.arg[1]->type() != Type::Env)
      I.error("'parent' is not an environment");
    EnvPtr e = envref(*bc.arg[0]);
    if (e == I.empty_env) I.error("can not set parent of the empty environment");
    e->set_enclosure(envref(*bc.arg[1]));
    return bc.arg[0];
  });

  reg(in, "environmentName", "(env)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (!bc.arg[0] || bc.arg[0]->type() != Type::Env) return scalar_str("");
    EnvPtr e = envref(*bc.arg[0]);
    if (e == I.global_env) return scalar_str("R_GlobalEnv");
    if (e == I.base_env) return scalar_str("base");
    if (e == I.empty_env) return scalar_str("R_EmptyEnv");
    return scalar_str("");
  });

  reg(in, "as.environment", "(x)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    RPtr x = bc.arg[0];
    if (!x) I.error("invalid argument");
    if (x->type() == Type::Env) return x;
    if (x->type() != Type::List)
      I.error("invalid argument to as.environment");
    RPtr nm = names_of(*x);
    auto env = std::make_shared<Environment>(I.empty_env);
    const auto& items = list_items(*x);
    for (size_t i = 0; i < items.size(); ++i) {
      RString name = nm && i < strs(*nm).size() ? strs(*nm)[i] : nullptr;
      if (!name || name->empty())
        I.error("all elements of a list must be named to coerce to environment");
      env->set(*name, items[i]);
    }
    return r_env(env);
  });

  reg(in, "ls",
      "(envir = NULL, all.names = FALSE, sorted = TRUE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    EnvPtr e = bc.arg[0] && bc.arg[0]->type() == Type::Env ? envref(*bc.arg[0])
                                                           : bc.env;
    bool all = scalar_flag(I, bc.arg[1], false);
    std::vector<std::string> names = e->names_in_order();
    if (!all) {
      names.erase(std::remove_if(names.begin(), names.end(),
                                 [](const std::string& s) {
                                   return !s.empty() && s[0] == '.';
                                 }),
                  names.end());
    }
    std::sort(names.begin(), names.end());
    StrVec out;
    for (auto& s : names) out.push_back(rstring(s));
    return r_str(std::move(out));
  });

  reg(in, "get",
      "(x, envir = NULL, mode = \"any\", inherits = TRUE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string name = scalar_string(I, bc.arg[0], "x");
    EnvPtr e = bc.arg[1] && bc.arg[1]->type() == Type::Env ? envref(*bc.arg[1])
                                                           : bc.env;
    std::string mode = bc.arg[2] ? scalar_string(I, bc.arg[2], "mode") : "any";
    bool inherits = scalar_flag(I, bc.arg[3], true);
    for (Environment* cur = e.get(); cur;
         cur = inherits ? cur->enclosure().get() : nullptr) {
      Binding* b = cur->find_local(name);
      if (b) {
        RPtr v = b->promise ? I.force(b->promise) : b->value;
        if (mode == "function" && !is_function(*v)) continue;
        return v;
      }
      if (!inherits) break;
    }
    I.error("object '" + name + "' not found");
  });

  reg(in, "exists",
      "(x, envir = NULL, mode = \"any\", inherits = TRUE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string name = scalar_string(I, bc.arg[0], "x");
    EnvPtr e = bc.arg[1] && bc.arg[1]->type() == Type::Env ? envref(*bc.arg[1])
                                                           : bc.env;
    std::string mode = bc.arg[2] ? scalar_string(I, bc.arg[2], "mode") : "any";
    bool inherits = scalar_flag(I, bc.arg[3], true);
    for (Environment* cur = e.get(); cur;
         cur = inherits ? cur->enclosure().get() : nullptr) {
      Binding* b = cur->find_local(name);
      if (b) {
        if (mode == "function") {
          RPtr v = b->promise ? I.force(b->promise) : b->value;
          if (!is_function(*v)) continue;
        }
        return r_true();
      }
      if (!inherits) break;
    }
    return r_false();
  });

  reg(in, "assign",
      "(x, value, envir = NULL, inherits = FALSE)",
      [](Interp& I, BuiltinCall& bc) -> RPtr {
    std::string name = scalar_string(I, bc.arg[0], "x");
    EnvPtr e = bc.arg[2] && bc.arg[2]->type() == Type::Env ? envref(*bc.arg[2])
                                                           : bc.env;
    bool inherits = scalar_flag(I, bc.arg[3], false);
    RPtr value = bc.arg[1] ? bc.arg[1] : r_null();
    if (inherits) {
      bind_inherit(I, e, name, value);
    } else {
      if (e->locked())
        I.error("cannot add bindings to a locked environment");
      e->set(name, value);
    }
    I.visible = false;
    return value;
  }, kInvisible);

  // rm() receives names unevaluated
  reg_special(in, "rm", "(..., envir = NULL)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    EnvPtr target = bc.env;
    std::vector<std::string> names;
    if (bc.raw) {
      for (const auto& a : *bc.raw) {
        if (a.name == "envir") {
          RPtr e = I.eval(a.expr, bc.env);
          if (e->type() != Type::Env) I.error("invalid 'envir' argument");
          target = envref(*e);
        } else if (a.name == "list") {
          RPtr v = I.eval(a.expr, bc.env);
          if (v->type() == Type::Str)
            for (const auto& s : strs(*v))
              if (s) names.push_back(*s);
        } else if (a.expr->type() == Type::Sym) {
          names.push_back(sym(*a.expr).name);
        } else if (a.expr->type() == Type::Str && a.expr->length() == 1 &&
                   strs(*a.expr)[0]) {
          names.push_back(*strs(*a.expr)[0]);
        } else {
          I.error("... must contain names or character strings");
        }
      }
    }
    if (target->locked())
      I.error("cannot remove bindings from a locked environment");
    for (const auto& n : names) {
      if (!target->remove(n))
        I.warn_call("object '" + n + "' not found");
    }
    I.visible = false;
    return r_null();
  }, kInvisible);

  // --- frame introspection -----------------------------------------------------
  reg(in, "sys.nframe", "()", [](Interp& I, BuiltinCall&) -> RPtr {
    return scalar_int(static_cast<int32_t>(I.stack.size()));
  });

  reg(in, "sys.frame", "(which = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    int w = bc.arg[0] ? static_cast<int>(scalar_double(I, bc.arg[0], "which"))
                      : 0;
    if (w == 0) return r_env(I.global_env);
    size_t idx;
    if (w > 0) {
      if (static_cast<size_t>(w) > I.stack.size())
        I.error("not that many frames on the stack");
      idx = static_cast<size_t>(w) - 1;
    } else {
      if (static_cast<size_t>(-w) > I.stack.size())
        I.error("not that many frames on the stack");
      idx = I.stack.size() + w;
    }
    return r_env(I.stack[idx]->env);
  });

  reg(in, "sys.call", "(which = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    int w = bc.arg[0] ? static_cast<int>(scalar_double(I, bc.arg[0], "which"))
                      : 0;
    if (I.stack.empty()) return r_null();
    size_t idx;
    if (w <= 0) {
      if (static_cast<size_t>(-w) >= I.stack.size()) return r_null();
      idx = I.stack.size() - 1 + w;
    } else {
      if (static_cast<size_t>(w) > I.stack.size())
        I.error("not that many frames on the stack");
      idx = static_cast<size_t>(w) - 1;
    }
    return I.stack[idx]->call ? I.stack[idx]->call : r_null();
  });

  reg(in, "sys.function", "(which = 0)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    int w = bc.arg[0] ? static_cast<int>(scalar_double(I, bc.arg[0], "which"))
                      : 0;
    if (I.stack.empty()) I.error("sys.function called from outside a function");
    size_t idx;
    if (w <= 0) {
      idx = I.stack.size() - 1 + w;
    } else {
      idx = static_cast<size_t>(w) - 1;
    }
    if (idx >= I.stack.size()) I.error("not that many frames on the stack");
    return I.stack[idx]->fun;
  });

  reg(in, "parent.frame", "(n = 1)", [](Interp& I, BuiltinCall& bc) -> RPtr {
    int n = bc.arg[0] ? static_cast<int>(scalar_double(I, bc.arg[0], "n")) : 1;
    if (I.stack.empty()) return r_env(I.global_env);
    EnvPtr env = I.stack.back()->caller_env;
    for (int k = 1; k < n; ++k) {
      // find the frame owning `env` and step to its caller
      bool found = false;
      for (size_t j = I.stack.size(); j-- > 0;) {
        if (I.stack[j]->env == env) {
          env = I.stack[j]->caller_env;
          found = true;
          break;
        }
      }
      if (!found) return r_env(I.global_env);
    }
    return r_env(env);
  });

  // --- UseMethod / NextMethod ---------------------------------------------------
  reg_special(in, "UseMethod", "(generic, object)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (I.stack.empty())
      I.error_call("UseMethod called from outside a function", bc.call_expr);
    FramePtr frame = I.stack.back();
    RPtr gen = I.eval(raw_arg(bc, 0), bc.env);
    std::string generic = scalar_string(I, gen, "generic");

    RPtr obj;
    if (bc.raw && bc.raw->size() >= 2) {
      obj = I.eval(raw_arg(bc, 1), bc.env);
    } else if (frame->clos && !frame->clos->formals.empty() &&
               frame->clos->formals[0].name != "...") {
      obj = I.eval(r_sym(frame->clos->formals[0].name), frame->env);
    } else if (!frame->supplied.empty()) {
      obj = frame->supplied[0].prom ? I.force(frame->supplied[0].prom)
                                    : I.eval(frame->supplied[0].expr,
                                             frame->caller_env);
    } else {
      I.error_call("no applicable method for '" + generic +
                       "' applied to an object of class \"NULL\"",
                   bc.call_expr);
    }

    StrVec classes = I.class_of(*obj);
    EnvPtr defn_scope = frame->clos ? frame->clos->env : I.base_env;

    for (size_t ci = 0; ci <= classes.size(); ++ci) {
      std::string cls =
          ci < classes.size() ? (classes[ci] ? *classes[ci] : "") : "default";
      if (cls.empty()) continue;
      RPtr method = I.find_method(generic, cls, frame->caller_env, defn_scope);
      if (!method) continue;
      auto info = std::make_shared<DispatchInfo>();
      info->generic = generic;
      info->class_vec = classes;
      info->position = ci;
      info->object = obj;

      RPtr result;
      if (method->type() == Type::Closure) {
        // locals created in the generic before dispatch stay available
        EnvPtr menv = std::make_shared<Environment>(closure(*method)->env);
        for (const std::string& nm : frame->env->names_in_order()) {
          if (nm == "...") continue;
          Binding* b = frame->env->find_local(nm);
          if (!b) continue;
          if (b->promise)
            menv->set_promise(nm, b->promise);
          else
            menv->set(nm, b->value);
        }
        menv->set(".Generic", scalar_str(generic));
        StrVec rest;
        for (size_t k = ci; k < classes.size(); ++k)
          rest.push_back(classes[k]);
        menv->set(".Class", r_str(rest));

        std::vector<SuppliedArg> supplied = frame->supplied;
        if (!supplied.empty())
          supplied[0].prom = Promise::forced(obj);
        result = I.call_closure(method, frame->call, supplied,
                                frame->caller_env, info, menv);
      } else {
        std::vector<SuppliedArg> supplied = frame->supplied;
        if (!supplied.empty())
          supplied[0].prom = Promise::forced(obj);
        result = I.call_builtin(method, frame->call, supplied,
                                frame->caller_env);
      }
      throw ReturnUnwind{result, frame.get()};
    }
    std::string cls0 = classes.empty() || !classes[0] ? "NULL" : *classes[0];
    I.error_call("no applicable method for '" + generic +
                     "' applied to an object of class \"" + cls0 + "\"",
                 frame->call);
  });

  reg_special(in, "NextMethod", "(generic)",
              [](Interp& I, BuiltinCall& bc) -> RPtr {
    if (I.stack.empty() || !I.stack.back()->dispatch)
      I.error_call("NextMethod called from outside a method", bc.call_expr);
    FramePtr frame = I.stack.back();
    DispatchInfo& d = *frame->dispatch;

    // current values of the running method's formals, positionally; a formal
    // named `value` stays keyword-matched (replacement methods)
    std::vector<std::pair<std::string, RPtr>> args;
    if (frame->clos) {
      for (const Formal& f : frame->clos->formals) {
        if (f.name == "...") {
          Binding* db = frame->env->find_local("...");
          if (db && db->value && db->value->type() == Type::Dots)
            for (const auto& el : dots(*db->value).elems)
              args.push_back({el.name, I.force(el.prom)});
          continue;
        }
        Binding* b = frame->env->find_local(f.name);
        if (!b) continue;
        if (b->promise && !b->promise->value &&
            b->promise->missing_origin)
          continue;  // still missing
        RPtr v = b->promise ? I.force(b->promise) : b->value;
        args.push_back({f.name == "value" ? "value" : "", v});
      }
    }

    EnvPtr defn_scope = frame->clos ? frame->clos->env : I.base_env;
    for (size_t ci = d.position + 1; ci <= d.class_vec.size(); ++ci) {
      std::string cls = ci < d.class_vec.size()
                            ? (d.class_vec[ci] ? *d.class_vec[ci] : "")
                            : "default";
      if (cls.empty()) continue;
      RPtr method =
          I.find_method(d.generic, cls, frame->caller_env, defn_scope);
      if (!method) continue;
      auto info = std::make_shared<DispatchInfo>();
      *info = d;
      info->position = ci;
      if (method->type() == Type::Closure) {
        std::vector<SuppliedArg> supplied;
        for (auto& a : args)
          supplied.push_back({a.first, a.second, Promise::forced(a.second)});
        EnvPtr menv = std::make_shared<Environment>(closure(*method)->env);
        menv->set(".Generic", scalar_str(d.generic));
        return I.call_closure(method, frame->call, supplied,
                              frame->caller_env, info, menv);
      }
      std::vector<SuppliedArg> supplied;
      for (auto& a : args)
        supplied.push_back({a.first, a.second, Promise::forced(a.second)});
      return I.call_builtin(method, frame->call, supplied, frame->caller_env);
    }

    // internal fallback: the base builtin runs without re-dispatch
    Binding* bb = I.base_env->find_local(d.generic);
    if (bb && bb->value && bb->value->type() == Type::Builtin) {
      std::vector<SuppliedArg> supplied;
      for (auto& a : args)
        supplied.push_back({a.first, a.second, Promise::forced(a.second)});
      return I.call_builtin_internal(bb->value, frame->call, supplied,
                                     frame->caller_env);
    }
    I.error_call("no more methods for '" + d.generic + "'", bc.call_expr);
  });
}

}  // namespace deepr
