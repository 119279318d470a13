#include "deepr/interp.hpp"

#include <algorithm>
#include <cmath>

#include "deepr/deparse.hpp"
#include "deepr/env.hpp"
#include "deepr/printer.hpp"

namespace deepr {

std::string format_error_for_display(Interp& in, const std::string& msg,
                                     RPtr call);

namespace {

struct FrameGuard {
  Interp& in;
  explicit FrameGuard(Interp& i, FramePtr f) : in(i) {
    in.stack.push_back(std::move(f));
  }
  ~FrameGuard() { in.stack.pop_back(); }
};

struct CallNoteGuard {
  Interp& in;
  CallNoteGuard(Interp& i, RPtr call) : in(i) {
    in.eval_calls.push_back(std::move(call));
  }
  ~CallNoteGuard() { in.eval_calls.pop_back(); }
};

bool is_missing_marker(const RObject& o) {
  return o.type() == Type::Sym && sym(o).name.empty();
}

}  // namespace

Interp::Interp() {
  empty_env = std::make_shared<Environment>(nullptr);
  base_env = std::make_shared<Environment>(empty_env);
  global_env = std::make_shared<Environment>(base_env);
  register_builtins(*this);
  base_env->lock();
}

RPtr Interp::current_call() const {
  if (!eval_calls.empty()) return eval_calls.back();
  return nullptr;
}

void Interp::raise(RError err) {
  if (err.call) {
    for (const auto& kv : call_display_overrides)
      if (kv.first == err.call.get()) {
        err.call = kv.second;
        break;
      }
  }
  if (error_handler_depth == 0 && print_errors_at_signal && out != nullptr) {
    fresh_line();
    *out << format_error_for_display(*this, err.message, err.call) << "\n";
    at_line_start = true;
    err.printed = true;
  }
  throw err;
}

void Interp::error(const std::string& msg) {
  raise(RError(msg, current_call()));
}

void Interp::error_call(const std::string& msg, RPtr call) {
  raise(RError(msg, std::move(call)));
}

void Interp::error_nocall(const std::string& msg) { raise(RError(msg)); }

void Interp::warn_at(const std::string& msg, RPtr call) {
  if (suppress_warnings > 0) return;
  if (!warning_barriers.empty())
    throw WarningUnwind{msg, std::move(call), warning_barriers.back()};
  warnings_.push_back({msg, std::move(call)});
}

void Interp::warn(const std::string& msg) { warn_at(msg, nullptr); }

void Interp::warn_call(const std::string& msg) { warn_at(msg, current_call()); }

std::vector<WarningEntry> Interp::take_warnings() {
  std::vector<WarningEntry> out;
  out.swap(warnings_);
  return out;
}

RPtr Interp::force(const PromisePtr& p) {
  if (p->value) return p->value;
  if (p->expr && is_missing_marker(*p->expr))
    error_nocall("argument is missing, with no default");
  if (p->forcing) error_nocall("promise already under evaluation");
  p->forcing = true;
  RPtr v;
  try {
    v = eval(p->expr, p->env);
  } catch (...) {
    p->forcing = false;
    throw;
  }
  p->forcing = false;
  p->value = v;
  p->env = nullptr;
  return v;
}

namespace {

// name like ..1, ..2
int dotdot_index(const std::string& name) {
  if (name.size() < 3 || name[0] != '.' || name[1] != '.') return -1;
  int v = 0;
  for (size_t i = 2; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    v = v * 10 + (name[i] - '0');
  }
  return v;
}

}  // namespace

RPtr Interp::eval(RPtr expr, EnvPtr env) {
  if (++depth_ > max_depth) {
    --depth_;
    error_nocall("evaluation nested too deeply: infinite recursion?");
  }
  struct DepthPop {
    int& d;
    ~DepthPop() { --d; }
  } pop{depth_};

  switch (expr->type()) {
    case Type::Sym: {
      visible = true;
      const std::string& name = sym(*expr).name;
      if (name.empty())
        error_nocall("argument is missing, with no default");
      if (name == "...")
        error("'...' used in an incorrect context");
      int k = dotdot_index(name);
      if (k > 0) {
        Binding* db = env->find("...");
        if (!db || !db->value || db->value->type() != Type::Dots)
          error("..%d used in an incorrect context");
        const auto& elems = dots(*db->value).elems;
        if (static_cast<size_t>(k) > elems.size())
          error_nocall("the ... list does not contain " + std::to_string(k) +
                       " elements");
        return force(elems[k - 1].prom);
      }
      Binding* b = env->find(name);
      if (!b) error_nocall("object '" + name + "' not found");
      if (b->promise) {
        if (!b->promise->value && b->promise->expr &&
            is_missing_marker(*b->promise->expr))
          error_nocall("argument \"" + name +
                       "\" is missing, with no default");
        RPtr v = force(b->promise);
        visible = true;
        return v;
      }
      return b->value;
    }
    case Type::Call: {
      const CallData& c = call(*expr);
      return eval_call(c, expr, env);
    }
    default:
      visible = true;
      return expr;
  }
}

namespace {

// function-mode lookup: climbs the chain skipping non-function bindings
RPtr lookup_function(Interp& in, EnvPtr env, const std::string& name,
                     RPtr call_expr) {
  for (Environment* e = env.get(); e != nullptr; e = e->enclosure().get()) {
    Binding* b = e->find_local(name);
    if (!b) continue;
    RPtr v = b->promise ? in.force(b->promise) : b->value;
    if (v && is_function(*v)) return v;
  }
  in.error_call("could not find function \"" + name + "\"", call_expr);
}

}  // namespace

RPtr Interp::eval_call(const CallData& c, RPtr call_expr, EnvPtr env) {
  RPtr fn;
  if (c.fn->type() == Type::Sym) {
    fn = lookup_function(*this, env, sym(*c.fn).name, call_expr);
  } else {
    fn = eval(c.fn, env);
    if (!is_function(*fn)) error_call("attempt to apply non-function", call_expr);
  }

  // splice `...` forwarding into the supplied-argument list
  std::vector<SuppliedArg> supplied;
  supplied.reserve(c.args.size());
  bool is_special =
      fn->type() == Type::Builtin && builtin(*fn)->special;
  for (const auto& a : c.args) {
    if (!is_special && a.expr && is_sym_named(*a.expr, "...")) {
      Binding* db = env->find("...");
      if (!db || !db->value || db->value->type() != Type::Dots)
        error_call("'...' used in an incorrect context", call_expr);
      for (const auto& el : dots(*db->value).elems)
        supplied.push_back({el.name, el.prom->value ? el.prom->value
                                                    : el.prom->expr,
                            el.prom});
      continue;
    }
    supplied.push_back({a.name, a.expr, nullptr});
  }

  if (fn->type() == Type::Builtin)
    return call_builtin(fn, call_expr, supplied, env);
  return call_closure(fn, call_expr, supplied, env);
}

namespace {

RPtr builtin_common(Interp& in, RPtr fnval, RPtr call_expr,
                    std::vector<SuppliedArg>& supplied, EnvPtr env,
                    bool allow_dispatch) {
  const RBuiltin& def = *builtin(*fnval);
  BuiltinCall bc;
  bc.in = &in;
  bc.call_expr = call_expr;
  bc.env = env;
  bc.def = &def;

  CallNoteGuard note(in, call_expr);

  RPtr out;
  if (def.special) {
    bc.raw = call_expr && call_expr->type() == Type::Call
                 ? &call(*call_expr).args
                 : nullptr;
    out = def.fn(in, bc);
  } else {
    MatchedArgs plan = match_args(in, def.formals, supplied, call_expr);

    // force everything left to right in call order
    std::vector<RPtr> values(supplied.size());
    for (size_t i = 0; i < supplied.size(); ++i) {
      bool used = false;
      for (int fi : plan.formal_to_supplied)
        if (fi == static_cast<int>(i)) used = true;
      for (int di : plan.dots_supplied)
        if (di == static_cast<int>(i)) used = true;
      if (!used) continue;
      if (supplied[i].prom) {
        values[i] = in.force(supplied[i].prom);
      } else if (supplied[i].expr && is_missing_marker(*supplied[i].expr)) {
        values[i] = nullptr;  // empty argument slot
      } else {
        values[i] = in.eval(supplied[i].expr, env);
      }
    }

    // internal generic dispatch on the first argument's class
    if (allow_dispatch && !supplied.empty() && values[0] &&
        get_attr(*values[0], "class")) {
      static const std::unordered_map<std::string, int> kInternalGenerics = {
          {"print", 1}, {"format", 1}, {"[", 1}, {"[[", 1}, {"[<-", 1},
          {"[[<-", 1},  {"c", 1},      {"length", 1}, {"as.character", 1},
          {"as.double", 1}, {"as.numeric", 1}, {"sort", 1}, {"rep", 1},
          {"unique", 1}};
      if (kInternalGenerics.count(def.name)) {
        std::vector<SuppliedArg> forced;
        forced.reserve(supplied.size());
        for (size_t i = 0; i < supplied.size(); ++i) {
          PromisePtr p = Promise::forced(values[i] ? values[i] : r_null());
          forced.push_back({supplied[i].name, supplied[i].expr, p});
        }
        RPtr res = in.try_internal_dispatch(def.name, values[0], call_expr,
                                            forced, env);
        if (res) return res;
      }
    }

    bc.arg.resize(def.formals.size());
    for (size_t f = 0; f < def.formals.size(); ++f) {
      int si = plan.formal_to_supplied[f];
      bc.arg[f] = si >= 0 ? values[si] : nullptr;
    }
    for (int di : plan.dots_supplied)
      bc.dots.push_back({supplied[di].name, values[di]});

    out = def.fn(in, bc);
  }
  if (def.vis == 0)
    in.visible = true;
  else if (def.vis == 1)
    in.visible = false;
  return out;
}

}  // namespace

RPtr Interp::call_builtin(RPtr fnval, RPtr call_expr,
                          std::vector<SuppliedArg>& supplied, EnvPtr env) {
  return builtin_common(*this, fnval, call_expr, supplied, env, true);
}

RPtr Interp::call_builtin_internal(RPtr fnval, RPtr call_expr,
                                   std::vector<SuppliedArg>& supplied,
                                   EnvPtr env) {
  return builtin_common(*this, fnval, call_expr, supplied, env, false);
}

// ---------------------------------------------------------------------------
// argument matching (exact keyword, partial keyword, positional, dots)
// ---------------------------------------------------------------------------

MatchedArgs match_args(Interp& in, const std::vector<Formal>& formals,
                       const std::vector<SuppliedArg>& supplied,
                       RPtr call_expr) {
  MatchedArgs m;
  m.formal_to_supplied.assign(formals.size(), -1);
  for (size_t f = 0; f < formals.size(); ++f)
    if (formals[f].name == "...") m.dots_pos = static_cast<int>(f);

  std::vector<bool> used(supplied.size(), false);

  // 1. exact keyword
  for (size_t i = 0; i < supplied.size(); ++i) {
    if (supplied[i].name.empty()) continue;
    for (size_t f = 0; f < formals.size(); ++f) {
      if (formals[f].name == "...") continue;
      if (formals[f].name == supplied[i].name) {
        if (m.formal_to_supplied[f] != -1)
          in.error_call("formal argument \"" + formals[f].name +
                            "\" matched by multiple actual arguments",
                        call_expr);
        m.formal_to_supplied[f] = static_cast<int>(i);
        used[i] = true;
        break;
      }
    }
  }

  // 2. partial keyword, only formals before `...`
  size_t partial_limit = m.dots_pos >= 0 ? static_cast<size_t>(m.dots_pos)
                                         : formals.size();
  for (size_t i = 0; i < supplied.size(); ++i) {
    if (used[i] || supplied[i].name.empty()) continue;
    int hit = -1;
    bool multiple = false;
    for (size_t f = 0; f < partial_limit; ++f) {
      if (m.formal_to_supplied[f] != -1) continue;
      const std::string& fn = formals[f].name;
      const std::string& an = supplied[i].name;
      if (an.size() < fn.size() && fn.compare(0, an.size(), an) == 0) {
        if (hit >= 0) {
          multiple = true;
          break;
        }
        hit = static_cast<int>(f);
      }
    }
    if (hit >= 0) {
      if (in.opt_warn_partial)
        in.warn_at("partial argument match of '" + supplied[i].name +
                       "' to '" + formals[hit].name + "'",
                   call_expr);
      if (multiple)
        in.error_call("argument " + std::to_string(i + 1) +
                          " matches multiple formal arguments",
                      call_expr);
      m.formal_to_supplied[hit] = static_cast<int>(i);
      used[i] = true;
    } else if (multiple) {
      in.error_call("argument " + std::to_string(i + 1) +
                        " matches multiple formal arguments",
                    call_expr);
    }
  }

  // 3. positional
  size_t next_supplied = 0;
  for (size_t f = 0; f < formals.size(); ++f) {
    if (formals[f].name == "...") break;
    if (m.formal_to_supplied[f] != -1) continue;
    while (next_supplied < supplied.size() &&
           (used[next_supplied] || !supplied[next_supplied].name.empty()))
      ++next_supplied;
    if (next_supplied >= supplied.size()) break;
    m.formal_to_supplied[f] = static_cast<int>(next_supplied);
    used[next_supplied] = true;
  }

  // 4. ellipsis absorbs the rest
  if (m.dots_pos >= 0) {
    for (size_t i = 0; i < supplied.size(); ++i)
      if (!used[i]) m.dots_supplied.push_back(static_cast<int>(i));
  } else {
    std::string unused;
    for (size_t i = 0; i < supplied.size(); ++i) {
      if (used[i]) continue;
      if (!unused.empty()) unused += ", ";
      if (!supplied[i].name.empty()) unused += supplied[i].name + " = ";
      if (supplied[i].expr) unused += deparse1(*supplied[i].expr);
    }
    if (!unused.empty())
      in.error_call((unused.find(", ") == std::string::npos
                         ? "unused argument ("
                         : "unused arguments (") +
                        unused + ")",
                    call_expr);
  }
  return m;
}

RPtr Interp::call_closure(RPtr fnval, RPtr call_expr,
                          std::vector<SuppliedArg>& supplied, EnvPtr caller,
                          std::shared_ptr<DispatchInfo> dispatch,
                          EnvPtr pre_bound_env) {
  const RClosure& clos = *closure(*fnval);
  MatchedArgs plan = match_args(*this, clos.formals, supplied, call_expr);

  EnvPtr local = pre_bound_env
                     ? pre_bound_env
                     : std::make_shared<Environment>(clos.env);
  if (pre_bound_env) local->set_enclosure(clos.env);

  for (size_t f = 0; f < clos.formals.size(); ++f) {
    const Formal& fm = clos.formals[f];
    if (fm.name == "...") {
      DotsData dd;
      for (int di : plan.dots_supplied) {
        PromisePtr p = supplied[di].prom
                           ? supplied[di].prom
                           : Promise::make(supplied[di].expr, caller);
        supplied[di].prom = p;
        dd.elems.push_back({supplied[di].name, p});
      }
      local->set(fm.name, r_dots(std::move(dd)));
      continue;
    }
    int si = plan.formal_to_supplied[f];
    if (si >= 0 && !(supplied[si].expr &&
                     is_missing_marker(*supplied[si].expr) &&
                     !supplied[si].prom)) {
      PromisePtr p = supplied[si].prom
                         ? supplied[si].prom
                         : Promise::make(supplied[si].expr, caller);
      supplied[si].prom = p;  // kept for UseMethod re-matching
      local->set_promise(fm.name, p);
    } else if (fm.default_expr) {
      // defaults evaluate in the local environment
      PromisePtr p = Promise::make(fm.default_expr, local);
      p->missing_origin = true;
      local->set_promise(fm.name, p);
    } else {
      PromisePtr p = Promise::make(r_sym(""), nullptr);
      p->missing_origin = true;
      local->set_promise(fm.name, p);
    }
  }

  auto frame = std::make_shared<Frame>();
  frame->call = call_expr;
  frame->fun = fnval;
  frame->env = local;
  frame->caller_env = caller;
  frame->supplied = supplied;
  frame->dispatch = std::move(dispatch);
  frame->clos = &clos;
  frame->frame_number = static_cast<int>(stack.size()) + 1;

  FrameGuard guard(*this, frame);
  CallNoteGuard note(*this, call_expr);

  RPtr result;
  auto run_on_exit = [&]() {
    // handlers run in registration order; errors inside them propagate;
    // the call's result visibility survives whatever they print
    std::vector<RPtr> handlers = frame->on_exit;
    frame->on_exit.clear();
    bool saved_visible = visible;
    for (const RPtr& h : handlers) eval(h, local);
    visible = saved_visible;
  };

  try {
    result = eval(clos.body, local);
  } catch (ReturnUnwind& r) {
    if (r.frame_token == frame.get()) {
      result = r.value;
      run_on_exit();
      return result;
    }
    run_on_exit();
    throw;
  } catch (LoopBreak&) {
    run_on_exit();
    error_call("no loop for break/next, jumping to top level", call_expr);
  } catch (LoopNext&) {
    run_on_exit();
    error_call("no loop for break/next, jumping to top level", call_expr);
  } catch (...) {
    run_on_exit();
    throw;
  }
  run_on_exit();
  return result;
}

RPtr Interp::call_function(RPtr fn, RPtr call_expr,
                           std::vector<SuppliedArg> supplied,
                           EnvPtr caller_env) {
  if (fn->type() == Type::Builtin)
    return call_builtin(fn, call_expr, supplied, caller_env);
  if (fn->type() == Type::Closure)
    return call_closure(fn, call_expr, supplied, caller_env);
  error_call("attempt to apply non-function", call_expr);
}

RPtr Interp::apply(RPtr fn, std::vector<std::pair<std::string, RPtr>> args,
                   EnvPtr caller_env, RPtr call_expr) {
  std::vector<SuppliedArg> supplied;
  std::vector<NamedExpr> arg_exprs;
  for (auto& a : args) {
    PromisePtr p = Promise::forced(a.second);
    supplied.push_back({a.first, a.second, p});
    arg_exprs.push_back({a.first, a.second});
  }
  if (!call_expr) call_expr = r_call(fn, arg_exprs);
  return call_function(fn, call_expr, std::move(supplied), caller_env);
}

RPtr Interp::eval_top(RPtr expr) {
  visible = true;
  return eval(std::move(expr), global_env);
}

// ---------------------------------------------------------------------------
// S3 dispatch
// ---------------------------------------------------------------------------

StrVec Interp::class_of(const RObject& v) {
  if (RPtr cls = get_attr(v, "class")) {
    if (cls->type() == Type::Str) return strs(*cls);
  }
  StrVec out;
  if (RPtr dim = get_attr(v, "dim")) {
    if (dim->length() == 2) out.push_back(rstring("matrix"));
    out.push_back(rstring("array"));
    return out;
  }
  switch (v.type()) {
    case Type::Null: out.push_back(rstring("NULL")); break;
    case Type::Lgl: out.push_back(rstring("logical")); break;
    case Type::Int: out.push_back(rstring("integer")); break;
    case Type::Real: out.push_back(rstring("numeric")); break;
    case Type::Str: out.push_back(rstring("character")); break;
    case Type::List: out.push_back(rstring("list")); break;
    case Type::Closure:
    case Type::Builtin: out.push_back(rstring("function")); break;
    case Type::Env: out.push_back(rstring("environment")); break;
    case Type::Sym: out.push_back(rstring("name")); break;
    case Type::Call: out.push_back(rstring("call")); break;
    case Type::Expr: out.push_back(rstring("expression")); break;
    default: out.push_back(rstring("?")); break;
  }
  return out;
}

RPtr Interp::find_method(const std::string& generic, const std::string& cls,
                         EnvPtr scope1, EnvPtr scope2) {
  std::string name = generic + "." + cls;
  for (EnvPtr scope : {scope1, scope2}) {
    if (!scope) continue;
    for (Environment* e = scope.get(); e != nullptr;
         e = e->enclosure().get()) {
      Binding* b = e->find_local(name);
      if (!b) continue;
      RPtr v = b->promise ? force(b->promise) : b->value;
      if (v && is_function(*v)) return v;
    }
  }
  return nullptr;
}

RPtr Interp::try_internal_dispatch(const std::string& generic, RPtr obj,
                                   RPtr call_expr,
                                   const std::vector<SuppliedArg>& supplied,
                                   EnvPtr caller_env) {
  StrVec classes = class_of(*obj);
  EnvPtr scope2 = base_env;
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    if (!classes[ci]) continue;
    RPtr method = find_method(generic, *classes[ci], caller_env, scope2);
    if (!method) continue;
    auto info = std::make_shared<DispatchInfo>();
    info->generic = generic;
    info->class_vec = classes;
    info->position = ci;
    info->object = obj;
    std::vector<SuppliedArg> args = supplied;
    if (method->type() == Type::Closure) {
      RPtr res = call_closure(method, call_expr, args, caller_env, info);
      return res;
    }
    return call_builtin(method, call_expr, args, caller_env);
  }
  return nullptr;
}

RPtr Interp::ops_dispatch(const std::string& op, RPtr call_expr, RPtr e1,
                          RPtr e2, EnvPtr env, bool* dispatched) {
  *dispatched = false;
  struct Found {
    RPtr fn;
    size_t pos = 0;
    StrVec classes;
    bool group = false;
  };
  auto find_for = [&](RPtr operand) -> Found {
    Found f;
    if (!operand || !get_attr(*operand, "class")) return f;
    f.classes = class_of(*operand);
    for (size_t ci = 0; ci < f.classes.size(); ++ci) {
      if (!f.classes[ci]) continue;
      if (RPtr m = find_method(op, *f.classes[ci], env, base_env)) {
        f.fn = m;
        f.pos = ci;
        return f;
      }
      if (RPtr m = find_method("Ops", *f.classes[ci], env, base_env)) {
        f.fn = m;
        f.pos = ci;
        f.group = true;
        return f;
      }
    }
    return f;
  };

  Found f1 = find_for(e1);
  Found f2 = e2 ? find_for(e2) : Found{};
  Found* chosen = nullptr;
  if (f1.fn && f2.fn) {
    if (identical(*f1.fn, *f2.fn)) {
      chosen = &f1;
    } else {
      std::string m1 = (f1.group ? "Ops." : op + ".") +
                       (f1.classes[f1.pos] ? *f1.classes[f1.pos] : "");
      std::string m2 = (f2.group ? "Ops." : op + ".") +
                       (f2.classes[f2.pos] ? *f2.classes[f2.pos] : "");
      warn_at("Incompatible methods (\"" + m1 + "\", \"" + m2 + "\") for \"" +
                  op + "\"",
              nullptr);
      return nullptr;
    }
  } else if (f1.fn) {
    chosen = &f1;
  } else if (f2.fn) {
    chosen = &f2;
  } else {
    return nullptr;
  }

  auto info = std::make_shared<DispatchInfo>();
  info->generic = op;
  info->class_vec = chosen->classes;
  info->position = chosen->pos;
  info->object = chosen == &f1 ? e1 : e2;
  info->from_ops_group = chosen->group;

  std::vector<SuppliedArg> supplied;
  supplied.push_back({"", e1, Promise::forced(e1)});
  if (e2) supplied.push_back({"", e2, Promise::forced(e2)});

  *dispatched = true;
  if (chosen->fn->type() == Type::Closure) {
    EnvPtr menv = std::make_shared<Environment>(closure(*chosen->fn)->env);
    menv->set(".Generic", scalar_str(op));
    StrVec rest;
    for (size_t k = chosen->pos; k < chosen->classes.size(); ++k)
      rest.push_back(chosen->classes[k]);
    menv->set(".Class", r_str(rest));
    return call_closure(chosen->fn, call_expr, supplied, env, info, menv);
  }
  return call_builtin(chosen->fn, call_expr, supplied, env);
}

RPtr Interp::print_value_dispatch(RPtr v, EnvPtr env) {
  fresh_line();
  if (get_attr(*v, "class")) {
    StrVec classes = class_of(*v);
    for (size_t ci = 0; ci < classes.size(); ++ci) {
      if (!classes[ci]) continue;
      RPtr method = find_method("print", *classes[ci], env, base_env);
      if (!method) continue;
      auto info = std::make_shared<DispatchInfo>();
      info->generic = "print";
      info->class_vec = classes;
      info->position = ci;
      info->object = v;
      std::vector<SuppliedArg> args;
      args.push_back({"", v, Promise::forced(v)});
      RPtr call_expr = r_call(r_sym("print"), {{"", v}});
      if (method->type() == Type::Closure)
        return call_closure(method, call_expr, args, env, info);
      return call_builtin(method, call_expr, args, env);
    }
  }
  print_value(*this, *v, *out);
  at_line_start = true;
  return v;
}

}  // namespace deepr
