#include "deepr/vecops.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>

#include "deepr/interp.hpp"

namespace deepr {

RecyclePlan plan_recycle(size_t m, size_t n) {
  RecyclePlan p;
  if (m == 0 || n == 0) {
    p.out_len = 0;
    return p;
  }
  p.out_len = std::max(m, n);
  size_t shorter = std::min(m, n);
  p.warn = p.out_len % shorter != 0;
  return p;
}

// comparison results keep only names/dim/dimnames
RPtr propagate_special_attrs(RPtr result, RPtr x, RPtr y) {
  RPtr merged = propagate_attrs(result, x, y);
  if (merged->attrs.empty()) return merged;
  auto copy = std::make_shared<RObject>(*merged);
  copy->attrs.erase(
      std::remove_if(copy->attrs.begin(), copy->attrs.end(),
                     [](const auto& kv) {
                       return kv.first != "names" && kv.first != "dim" &&
                              kv.first != "dimnames";
                     }),
      copy->attrs.end());
  return copy;
}

RPtr propagate_attrs(RPtr result, RPtr x, RPtr y) {
  size_t m = x->length(), n = y->length();
  Attributes merged;
  if (m > n) {
    merged = x->attrs;
  } else if (n > m) {
    merged = y->attrs;
  } else {
    // equal lengths: union, first operand's entries win
    merged = x->attrs;
    for (const auto& kv : y->attrs) {
      bool present = false;
      for (const auto& have : merged)
        if (have.first == kv.first) {
          present = true;
          break;
        }
      if (!present) merged.push_back(kv);
    }
  }
  if (merged.empty()) return result;
  auto copy = std::make_shared<RObject>(*result);
  copy->attrs = std::move(merged);
  return copy;
}

namespace {

bool numeric_operand(const RObject& v) {
  return v.type() == Type::Lgl || v.type() == Type::Int ||
         v.type() == Type::Real;
}

int32_t lgl_or_int_at(const RObject& v, size_t i) {
  if (v.type() == Type::Lgl) {
    int8_t e = lgl(v)[i];
    return e == na::LGL ? na::INT : e;
  }
  return ints(v)[i];
}

// checked 32-bit ops; NA on overflow
int32_t int_add(int32_t a, int32_t b, bool* ovf) {
  int64_t r = static_cast<int64_t>(a) + b;
  if (r > INT32_MAX || r <= INT32_MIN) {
    *ovf = true;
    return na::INT;
  }
  return static_cast<int32_t>(r);
}
int32_t int_sub(int32_t a, int32_t b, bool* ovf) {
  int64_t r = static_cast<int64_t>(a) - b;
  if (r > INT32_MAX || r <= INT32_MIN) {
    *ovf = true;
    return na::INT;
  }
  return static_cast<int32_t>(r);
}
int32_t int_mul(int32_t a, int32_t b, bool* ovf) {
  int64_t r = static_cast<int64_t>(a) * b;
  if (r > INT32_MAX || r <= INT32_MIN) {
    *ovf = true;
    return na::INT;
  }
  return static_cast<int32_t>(r);
}

// floored modulo, sign follows the divisor
int32_t int_mod(int32_t a, int32_t b, bool* na_out) {
  if (b == 0) {
    *na_out = true;
    return na::INT;
  }
  int32_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}
int32_t int_div(int32_t a, int32_t b, bool* na_out) {
  if (b == 0) {
    *na_out = true;
    return na::INT;
  }
  int32_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double real_mod(double a, double b) {
  double r = std::fmod(a, b);
  if (r != 0.0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

double real_fdiv(double a, double b) { return std::floor(a / b); }

}  // namespace

RPtr arith(Interp& in, const std::string& op, RPtr x, RPtr y) {
  if (!numeric_operand(*x) || !numeric_operand(*y))
    in.error("non-numeric argument to binary operator");

  size_t m = x->length(), n = y->length();
  RecyclePlan plan = plan_recycle(m, n);
  if (plan.warn)
    in.warn_call(
        "longer object length is not a multiple of shorter object length");

  bool int_result = x->type() != Type::Real && y->type() != Type::Real &&
                    op != "/" && op != "^";

  RPtr result;
  if (int_result) {
    IntVec out(plan.out_len);
    bool overflow = false;
    bool div_na = false;
    for (size_t i = 0; i < plan.out_len; ++i) {
      int32_t a = lgl_or_int_at(*x, i % m);
      int32_t b = lgl_or_int_at(*y, i % n);
      if (a == na::INT || b == na::INT) {
        out[i] = na::INT;
        continue;
      }
      bool flag = false;
      if (op == "+") out[i] = int_add(a, b, &flag);
      else if (op == "-") out[i] = int_sub(a, b, &flag);
      else if (op == "*") out[i] = int_mul(a, b, &flag);
      else if (op == "%%") out[i] = int_mod(a, b, &flag);
      else if (op == "%/%") out[i] = int_div(a, b, &flag);
      if (flag) {
        if (op == "%%" || op == "%/%") div_na = true;
        else overflow = true;
      }
    }
    if (overflow) in.warn_call("NAs produced by integer overflow");
    (void)div_na;
    result = r_int(std::move(out));
  } else {
    RealVec out(plan.out_len);
    for (size_t i = 0; i < plan.out_len; ++i) {
      double a = element_as_double(*x, i % m);
      double b = element_as_double(*y, i % n);
      if (na::is_na_real(a) || na::is_na_real(b)) {
        out[i] = na::real();
        continue;
      }
      if (op == "+") out[i] = a + b;
      else if (op == "-") out[i] = a - b;
      else if (op == "*") out[i] = a * b;
      else if (op == "/") out[i] = a / b;
      else if (op == "^") {
        // R: 1^y and x^0 are 1 even for NA/NaN operands
        if (a == 1.0) out[i] = 1.0;
        else if (b == 0.0) out[i] = 1.0;
        else out[i] = std::pow(a, b);
      } else if (op == "%%") {
        out[i] = std::isfinite(b) && b == 0.0 ? std::nan("") : real_mod(a, b);
      } else if (op == "%/%") {
        out[i] = real_fdiv(a, b);
      }
    }
    result = r_real(std::move(out));
  }
  return propagate_attrs(result, x, y);
}

RPtr arith_unary(Interp& in, const std::string& op, RPtr x) {
  if (!numeric_operand(*x))
    in.error("invalid argument to unary operator");
  if (op == "+") return x;
  if (x->type() == Type::Real) {
    RealVec out(reals(*x));
    for (auto& e : out)
      if (!na::is_na_real(e)) e = -e;
    return copy_attrs(x, r_real(std::move(out)));
  }
  IntVec out(x->length());
  for (size_t i = 0; i < out.size(); ++i) {
    int32_t v = lgl_or_int_at(*x, i);
    out[i] = v == na::INT ? na::INT : -v;
  }
  return copy_attrs(x, r_int(std::move(out)));
}

// ---------------------------------------------------------------------------

namespace {

// -1 NA, 0 equal, negative/positive ordering
int compare_strings(const RString& a, const RString& b) {
  return a->compare(*b);
}

}  // namespace

RPtr compare(Interp& in, const std::string& op, RPtr x, RPtr y) {
  if (x->type() == Type::List || y->type() == Type::List)
    in.error("comparison of these types is not implemented");
  if (!is_atomic(*x) || !is_atomic(*y)) {
    if (x->type() != Type::Null && y->type() != Type::Null)
      in.error("comparison (" + op + ") is possible only for atomic types");
  }
  size_t m = x->length(), n = y->length();
  RecyclePlan plan = plan_recycle(m, n);
  if (plan.warn)
    in.warn_call(
        "longer object length is not a multiple of shorter object length");
  LglVec out(plan.out_len);

  Type ct = common_type(x->type(), y->type());
  if (ct == Type::Str) {
    RPtr xs = x->type() == Type::Str ? x : coerce(in, *x, Type::Str);
    RPtr ys = y->type() == Type::Str ? y : coerce(in, *y, Type::Str);
    for (size_t i = 0; i < plan.out_len; ++i) {
      const RString& a = strs(*xs)[i % m];
      const RString& b = strs(*ys)[i % n];
      if (!a || !b) {
        out[i] = na::LGL;
        continue;
      }
      int c = compare_strings(a, b);
      if (op == "<") out[i] = c < 0;
      else if (op == "<=") out[i] = c <= 0;
      else if (op == ">") out[i] = c > 0;
      else if (op == ">=") out[i] = c >= 0;
      else if (op == "==") out[i] = c == 0;
      else out[i] = c != 0;
    }
  } else {
    for (size_t i = 0; i < plan.out_len; ++i) {
      double a = element_as_double(*x, i % m);
      double b = element_as_double(*y, i % n);
      if (std::isnan(a) || std::isnan(b)) {
        out[i] = na::LGL;
        continue;
      }
      if (op == "<") out[i] = a < b;
      else if (op == "<=") out[i] = a <= b;
      else if (op == ">") out[i] = a > b;
      else if (op == ">=") out[i] = a >= b;
      else if (op == "==") out[i] = a == b;
      else out[i] = a != b;
    }
  }
  return propagate_special_attrs(r_lgl(std::move(out)), x, y);
}

namespace {

int8_t as_tristate(Interp& in, const RObject& v, size_t i) {
  switch (v.type()) {
    case Type::Lgl: return lgl(v)[i];
    case Type::Int: {
      int32_t e = ints(v)[i];
      return e == na::INT ? na::LGL : e != 0;
    }
    case Type::Real: {
      double e = reals(v)[i];
      return std::isnan(e) ? na::LGL : e != 0.0;
    }
    default:
      in.error("operations are possible only for numeric, logical or complex types");
  }
}

}  // namespace

RPtr logic2(Interp& in, const std::string& op, RPtr x, RPtr y) {
  if (x->type() == Type::Str || y->type() == Type::Str ||
      x->type() == Type::List || y->type() == Type::List)
    in.error("operations are possible only for numeric, logical or complex types");
  size_t m = x->length(), n = y->length();
  RecyclePlan plan = plan_recycle(m, n);
  if (plan.warn)
    in.warn_call(
        "longer object length is not a multiple of shorter object length");
  LglVec out(plan.out_len);
  for (size_t i = 0; i < plan.out_len; ++i) {
    int8_t a = as_tristate(in, *x, i % m);
    int8_t b = as_tristate(in, *y, i % n);
    if (op == "&") {
      if (a == 0 || b == 0) out[i] = 0;
      else if (a == na::LGL || b == na::LGL) out[i] = na::LGL;
      else out[i] = 1;
    } else if (op == "|") {
      if (a == 1 || b == 1) out[i] = 1;
      else if (a == na::LGL || b == na::LGL) out[i] = na::LGL;
      else out[i] = 0;
    } else {  // xor
      if (a == na::LGL || b == na::LGL) out[i] = na::LGL;
      else out[i] = (a != b) ? 1 : 0;
    }
  }
  return propagate_attrs(r_lgl(std::move(out)), x, y);
}

RPtr logic_not(Interp& in, RPtr x) {
  size_t n = x->length();
  LglVec out(n);
  for (size_t i = 0; i < n; ++i) {
    int8_t a = as_tristate(in, *x, i);
    out[i] = a == na::LGL ? na::LGL : !a;
  }
  return copy_attrs(x, r_lgl(std::move(out)));
}

// ---------------------------------------------------------------------------

double round_half_even(double x, int digits) {
  if (!std::isfinite(x)) return x;
  double scale = std::pow(10.0, digits);
  double scaled = x * scale;
  if (std::fabs(scaled) >= 9.007199254740992e15) return x;
  double r = std::nearbyint(scaled);  // ties to even in default FP mode
  return r / scale;
}

RPtr math_unary(Interp& in, const std::string& fun, RPtr x) {
  if (!numeric_operand(*x))
    in.error("non-numeric argument to mathematical function");
  size_t n = x->length();
  if (fun == "abs" && x->type() != Type::Real) {
    IntVec out(n);
    for (size_t i = 0; i < n; ++i) {
      int32_t v = lgl_or_int_at(*x, i);
      out[i] = v == na::INT ? na::INT : std::abs(v);
    }
    return copy_attrs(x, r_int(std::move(out)));
  }
  RealVec out(n);
  bool nan_produced = false;
  for (size_t i = 0; i < n; ++i) {
    double v = element_as_double(*x, i);
    if (na::is_na_real(v)) {
      out[i] = na::real();
      continue;
    }
    if (fun == "abs") out[i] = std::fabs(v);
    else if (fun == "sqrt") {
      if (v < 0) {
        out[i] = std::nan("");
        nan_produced = true;
      } else {
        out[i] = std::sqrt(v);
      }
    } else if (fun == "exp") out[i] = std::exp(v);
    else if (fun == "floor") out[i] = std::floor(v);
    else if (fun == "ceiling") out[i] = std::ceil(v);
    else if (fun == "trunc") out[i] = std::trunc(v);
    else if (fun == "sin") out[i] = std::sin(v);
    else if (fun == "cos") out[i] = std::cos(v);
    else if (fun == "tan") out[i] = std::tan(v);
    else if (fun == "asin") out[i] = std::asin(v);
    else if (fun == "acos") out[i] = std::acos(v);
    else if (fun == "atan") out[i] = std::atan(v);
    else in.error("unknown math function");
  }
  if (nan_produced) in.warn_call("NaNs produced");
  RPtr res = r_real(std::move(out));
  if (fun == "floor" || fun == "ceiling" || fun == "trunc")
    return copy_attrs(x, res);
  return copy_attrs(x, res);
}

RPtr math_round(Interp& in, RPtr x, RPtr digits) {
  if (!numeric_operand(*x))
    in.error("non-numeric argument to mathematical function");
  int d = 0;
  if (digits && digits->length() > 0) {
    double dv = element_as_double(*digits, 0);
    if (!std::isnan(dv)) d = static_cast<int>(dv);
  }
  size_t n = x->length();
  RealVec out(n);
  for (size_t i = 0; i < n; ++i) {
    double v = element_as_double(*x, i);
    out[i] = na::is_na_real(v) ? na::real() : round_half_even(v, d);
  }
  return copy_attrs(x, r_real(std::move(out)));
}

RPtr math_log(Interp& in, RPtr x, RPtr base) {
  if (!numeric_operand(*x))
    in.error("non-numeric argument to mathematical function");
  double b = M_E;
  if (base && base->length() > 0) b = element_as_double(*base, 0);
  size_t n = x->length();
  RealVec out(n);
  bool nan_produced = false;
  for (size_t i = 0; i < n; ++i) {
    double v = element_as_double(*x, i);
    if (na::is_na_real(v)) {
      out[i] = na::real();
      continue;
    }
    double r;
    if (b == M_E) r = std::log(v);
    else if (b == 2.0) r = std::log2(v);
    else if (b == 10.0) r = std::log10(v);
    else r = std::log(v) / std::log(b);
    if (std::isnan(r) && !std::isnan(v)) nan_produced = true;
    out[i] = r;
  }
  if (nan_produced) in.warn_call("NaNs produced");
  return copy_attrs(x, r_real(std::move(out)));
}

}  // namespace deepr
