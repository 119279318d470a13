#ifndef DEEPR_INTERP_HPP
#define DEEPR_INTERP_HPP

#include <iostream>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "deepr/env.hpp"
#include "deepr/error.hpp"
#include "deepr/value.hpp"

namespace deepr {

struct SuppliedArg {
  std::string name;  // keyword, or "" when positional
  RPtr expr;
  PromisePtr prom;
};

struct DispatchInfo {
  std::string generic;
  StrVec class_vec;   // classes still to try come after `position`
  size_t position = 0;  // index of the class the running method was found for
  RPtr object;
  bool from_ops_group = false;
};

struct Frame {
  RPtr call;
  RPtr fun;
  EnvPtr env;
  EnvPtr caller_env;
  std::vector<SuppliedArg> supplied;
  std::vector<RPtr> on_exit;
  std::shared_ptr<DispatchInfo> dispatch;
  int frame_number = 0;
  const RClosure* clos = nullptr;
};
using FramePtr = std::shared_ptr<Frame>;

// Arguments handed to a builtin implementation. Regular builtins see their
// formals matched and forced; special forms read the raw operands instead.
struct BuiltinCall {
  Interp* in = nullptr;
  RPtr call_expr;
  EnvPtr env;  // environment of the call site
  const RBuiltin* def = nullptr;

  // regular builtins
  std::vector<RPtr> arg;                       // per formal; null == missing
  std::vector<std::pair<std::string, RPtr>> dots;  // evaluated `...`

  // special forms
  const std::vector<NamedExpr>* raw = nullptr;

  RPtr arg_or(size_t i, RPtr deflt) const {
    return i < arg.size() && arg[i] ? arg[i] : deflt;
  }
  bool has(size_t i) const { return i < arg.size() && arg[i] != nullptr; }
};

struct WarningEntry {
  std::string message;
  RPtr call;  // null for call-less warnings
};

struct ParseResult {
  std::vector<RPtr> exprs;
  bool incomplete = false;
  std::string error;  // non-empty on hard syntax error
  int line = 0, col = 0;
};

ParseResult parse_program(const std::string& source);

class Interp {
 public:
  Interp();

  EnvPtr global_env;
  EnvPtr base_env;
  EnvPtr empty_env;

  std::ostream* out = &std::cout;
  // display cursor state: print output starts on a fresh line after a
  // partial cat() line, like the interactive console
  bool at_line_start = true;
  void write(const std::string& s) {
    if (s.empty()) return;
    *out << s;
    at_line_start = s.back() == '\n';
  }
  void fresh_line() {
    if (!at_line_start) write("\n");
  }

  // --- evaluation -----------------------------------------------------------
  RPtr eval(RPtr expr, EnvPtr env);
  RPtr force(const PromisePtr& p);

  // Evaluates one top-level expression: result visibility is left in
  // `visible` for the caller to decide about auto-printing.
  RPtr eval_top(RPtr expr);
  bool visible = true;

  RPtr call_function(RPtr fn, RPtr call_expr,
                     std::vector<SuppliedArg> supplied, EnvPtr caller_env);
  // Calls `fn` on already evaluated arguments (do.call, Map, harness glue).
  RPtr apply(RPtr fn, std::vector<std::pair<std::string, RPtr>> args,
             EnvPtr caller_env, RPtr call_expr = nullptr);

  // --- conditions -----------------------------------------------------------
  [[noreturn]] void error(const std::string& msg);         // current call
  [[noreturn]] void error_call(const std::string& msg, RPtr call);
  [[noreturn]] void error_nocall(const std::string& msg);
  void warn(const std::string& msg);        // call-less ("Warning: ...")
  void warn_call(const std::string& msg);   // current call attached
  void warn_at(const std::string& msg, RPtr call);
  std::vector<WarningEntry> take_warnings();
  bool has_warnings() const { return !warnings_.empty(); }

  int suppress_warnings = 0;  // depth of suppressWarnings()

  // active tryCatch warning handlers, innermost last
  std::vector<size_t> warning_barriers;
  size_t warning_barrier_seq = 0;
  // active tryCatch error handlers; with none, errors print when signalled
  // so that on-exit output follows the message like in an interactive session
  int error_handler_depth = 0;
  bool print_errors_at_signal = true;
  // constructed replacement calls display as the original assignment
  std::vector<std::pair<const RObject*, RPtr>> call_display_overrides;
  [[noreturn]] void raise(RError err);

  // --- frames ---------------------------------------------------------------
  std::vector<FramePtr> stack;
  FramePtr current_frame() const {
    return stack.empty() ? nullptr : stack.back();
  }
  RPtr current_call() const;  // innermost call expr for condition reporting

  // innermost call being evaluated (builtin or closure), used for warnings
  // raised from vector code
  std::vector<RPtr> eval_calls;

  // --- options --------------------------------------------------------------
  int opt_digits = 7;
  int opt_width = 80;
  bool opt_warn_partial = false;  // warnPartialMatchArgs
  std::unordered_map<std::string, RPtr> extra_options;

  int max_depth = 5000;

  // S3 helpers ---------------------------------------------------------------
  StrVec class_of(const RObject& v);
  RPtr find_method(const std::string& generic, const std::string& cls,
                   EnvPtr scope1, EnvPtr scope2);
  // Dispatch for internal generics; returns null when no user method exists.
  RPtr try_internal_dispatch(const std::string& generic, RPtr obj,
                             RPtr call_expr,
                             const std::vector<SuppliedArg>& supplied,
                             EnvPtr caller_env);
  RPtr ops_dispatch(const std::string& op, RPtr call_expr, RPtr e1, RPtr e2,
                    EnvPtr env, bool* dispatched);

  RPtr print_value_dispatch(RPtr v, EnvPtr env);  // honours print.* methods

  int next_env_ordinal() { return ++env_ordinal_; }

  uint32_t lcg_state = 1;  // deterministic generator, see lcg builtins

 private:
  std::vector<WarningEntry> warnings_;
  int env_ordinal_ = 0;
  int depth_ = 0;

  friend struct DepthGuard;

 public:
  RPtr eval_call(const CallData& c, RPtr call_expr, EnvPtr env);
  RPtr call_closure(RPtr fnval, RPtr call_expr,
                    std::vector<SuppliedArg>& supplied, EnvPtr caller_env,
                    std::shared_ptr<DispatchInfo> dispatch = nullptr,
                    EnvPtr pre_bound_env = nullptr);
  RPtr call_builtin(RPtr fnval, RPtr call_expr,
                    std::vector<SuppliedArg>& supplied, EnvPtr caller_env);
  // same but without the internal-generic dispatch hook (NextMethod path)
  RPtr call_builtin_internal(RPtr fnval, RPtr call_expr,
                             std::vector<SuppliedArg>& supplied,
                             EnvPtr caller_env);
};

// Argument-matching plan shared by the call protocol and match.call.
struct MatchedArgs {
  // for each formal: index into supplied, or -1
  std::vector<int> formal_to_supplied;
  std::vector<int> dots_supplied;  // indexes in supplied order
  int dots_pos = -1;               // position of `...` in formals, or -1
};

MatchedArgs match_args(Interp& in, const std::vector<Formal>& formals,
                       const std::vector<SuppliedArg>& supplied,
                       RPtr call_expr);

void register_builtins(Interp& in);

}  // namespace deepr

#endif  // DEEPR_INTERP_HPP
