#ifndef DEEPR_VALUE_HPP
#define DEEPR_VALUE_HPP

#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace deepr {

class RObject;
using RPtr = std::shared_ptr<const RObject>;

class Environment;
using EnvPtr = std::shared_ptr<Environment>;

class Interp;

// ---------------------------------------------------------------------------
// Missing-value encodings.
//
// Logical elements are tri-state {0, 1, NA}; integer NA is INT_MIN. The
// double NA is one fixed quiet-NaN bit pattern that is checked for exactly;
// operations propagate it explicitly instead of relying on hardware NaN
// payload behaviour. is_na() is true for NA and NaN alike, is_nan() only for
// a computed NaN.
// ---------------------------------------------------------------------------
namespace na {

constexpr int8_t LGL = INT8_MIN;
constexpr int32_t INT = INT32_MIN;
constexpr uint64_t REAL_BITS = 0x7FF00000000007A2ull;

inline double real() {
  double d;
  std::memcpy(&d, &REAL_BITS, sizeof d);
  return d;
}

inline bool is_na_real(double x) {
  uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b == REAL_BITS;
}

}  // namespace na

// Character vector element; the null pointer encodes NA_character_.
using RString = std::shared_ptr<const std::string>;

inline RString rstring(std::string s) {
  return std::make_shared<const std::string>(std::move(s));
}

struct Formal {
  std::string name;
  RPtr default_expr;  // null when the parameter has no default
};

struct RClosure {
  std::vector<Formal> formals;
  RPtr body;
  EnvPtr env;
  std::string src;  // original source text; empty once the closure is rebuilt
};
using ClosurePtr = std::shared_ptr<const RClosure>;

struct BuiltinCall;

struct RBuiltin {
  std::string name;
  std::vector<Formal> formals;
  bool special = false;  // special forms receive unevaluated operands
  // 0 result prints, 1 result is invisible, 2 visibility set by the body
  int vis = 0;
  std::function<RPtr(Interp&, BuiltinCall&)> fn;
};
using BuiltinPtr = std::shared_ptr<const RBuiltin>;

struct NamedExpr {
  std::string name;  // empty string means positional
  RPtr expr;
};

struct CallData {
  RPtr fn;
  std::vector<NamedExpr> args;
};

struct Promise;
using PromisePtr = std::shared_ptr<Promise>;

struct DotsElem {
  std::string name;
  PromisePtr prom;
};

// `...` binding payload; internal, never observable through typeof().
struct DotsData {
  std::vector<DotsElem> elems;
};

struct ListVec {
  std::vector<RPtr> items;
};

struct ExprVec {
  std::vector<RPtr> items;
};

struct SymbolData {
  std::string name;
};

using LglVec = std::vector<int8_t>;
using IntVec = std::vector<int32_t>;
using RealVec = std::vector<double>;
using StrVec = std::vector<RString>;

enum class Type {
  Null,
  Lgl,
  Int,
  Real,
  Str,
  List,
  Closure,
  Builtin,
  Env,
  Sym,
  Call,
  Expr,
  Dots
};

// Ordered name -> value pairs; assigning null deletes, so no entry is null.
using Attributes = std::vector<std::pair<std::string, RPtr>>;

class RObject {
 public:
  using Payload =
      std::variant<std::monostate, LglVec, IntVec, RealVec, StrVec, ListVec,
                   ClosurePtr, BuiltinPtr, EnvPtr, SymbolData, CallData,
                   ExprVec, DotsData>;

  Payload data;
  Attributes attrs;

  RObject() = default;
  explicit RObject(Payload p) : data(std::move(p)) {}

  Type type() const { return static_cast<Type>(data.index()); }

  size_t length() const;
};

// --- constructors -----------------------------------------------------------

RPtr r_null();
RPtr r_lgl(LglVec v);
RPtr r_int(IntVec v);
RPtr r_real(RealVec v);
RPtr r_str(StrVec v);
RPtr r_list(std::vector<RPtr> items);
RPtr r_expr(std::vector<RPtr> items);
RPtr r_sym(std::string name);
RPtr r_call(RPtr fn, std::vector<NamedExpr> args);
RPtr r_closure(ClosurePtr c);
RPtr r_builtin(BuiltinPtr b);
RPtr r_env(EnvPtr e);
RPtr r_dots(DotsData d);

RPtr r_true();
RPtr r_false();
RPtr r_lgl_na();
RPtr scalar_lgl(int8_t v);
RPtr scalar_int(int32_t v);
RPtr scalar_real(double v);
RPtr scalar_str(std::string s);
RPtr scalar_str(RString s);

// --- accessors (valid only for the matching type) ---------------------------

inline const LglVec& lgl(const RObject& o) { return std::get<LglVec>(o.data); }
inline const IntVec& ints(const RObject& o) { return std::get<IntVec>(o.data); }
inline const RealVec& reals(const RObject& o) {
  return std::get<RealVec>(o.data);
}
inline const StrVec& strs(const RObject& o) { return std::get<StrVec>(o.data); }
inline const std::vector<RPtr>& list_items(const RObject& o) {
  return std::get<ListVec>(o.data).items;
}
inline const std::vector<RPtr>& expr_items(const RObject& o) {
  return std::get<ExprVec>(o.data).items;
}
inline const SymbolData& sym(const RObject& o) {
  return std::get<SymbolData>(o.data);
}
inline const CallData& call(const RObject& o) {
  return std::get<CallData>(o.data);
}
inline const ClosurePtr& closure(const RObject& o) {
  return std::get<ClosurePtr>(o.data);
}
inline const BuiltinPtr& builtin(const RObject& o) {
  return std::get<BuiltinPtr>(o.data);
}
inline const EnvPtr& envref(const RObject& o) { return std::get<EnvPtr>(o.data); }
inline const DotsData& dots(const RObject& o) {
  return std::get<DotsData>(o.data);
}

inline bool is_null(const RObject& o) { return o.type() == Type::Null; }
inline bool is_sym(const RObject& o) { return o.type() == Type::Sym; }
inline bool is_call(const RObject& o) { return o.type() == Type::Call; }
inline bool is_atomic(const RObject& o) {
  Type t = o.type();
  return t == Type::Lgl || t == Type::Int || t == Type::Real || t == Type::Str;
}
inline bool is_function(const RObject& o) {
  return o.type() == Type::Closure || o.type() == Type::Builtin;
}
inline bool is_numeric_type(const RObject& o) {
  return o.type() == Type::Int || o.type() == Type::Real;
}

bool is_sym_named(const RObject& o, const char* name);

// "NULL", "logical", "integer", "double", "character", "list", "closure",
// "builtin", "environment", "symbol", "language", "expression"
std::string type_of(const RObject& o);

// --- attributes --------------------------------------------------------------

RPtr get_attr(const RObject& o, const std::string& name);
// Functional update; a null value removes the entry. Enforces the rules for
// the special attributes (names length, class coercion, dim product).
RPtr set_attr(Interp& in, RPtr obj, const std::string& name, RPtr value);
RPtr set_attr_raw(RPtr obj, const std::string& name, RPtr value);
RPtr drop_attrs(RPtr obj);
RPtr copy_attrs(RPtr from, RPtr to);

RPtr names_of(const RObject& o);  // null when unset

// --- coercion ----------------------------------------------------------------

// logical < integer < double < character < list
int type_rank(Type t);
Type common_type(Type a, Type b);

// Elementwise conversion; drops attributes unless target == source type.
// May raise warnings ("NAs introduced by coercion") through the interpreter.
RPtr coerce(Interp& in, const RObject& v, Type target);

// Rendering used by as.character and by element displays: 15 significant
// digits, "TRUE"/"FALSE"/"NA"/"Inf"/"-Inf"/"NaN".
std::string real_to_string(double x);
std::string int_to_string(int32_t x);

double element_as_double(const RObject& v, size_t i);
bool element_is_na(const RObject& v, size_t i);

size_t r_length(const RObject& o);

bool identical(const RObject& a, const RObject& b);

}  // namespace deepr

#endif  // DEEPR_VALUE_HPP
