#ifndef DEEPR_VECOPS_HPP
#define DEEPR_VECOPS_HPP

#include <string>

#include "deepr/value.hpp"

namespace deepr {

// out-length = max(m, n) unless either is 0; warn on partial recycling
struct RecyclePlan {
  size_t out_len = 0;
  bool warn = false;
};
RecyclePlan plan_recycle(size_t m, size_t n);

RPtr arith(Interp& in, const std::string& op, RPtr x, RPtr y);
RPtr arith_unary(Interp& in, const std::string& op, RPtr x);
RPtr compare(Interp& in, const std::string& op, RPtr x, RPtr y);
RPtr logic2(Interp& in, const std::string& op, RPtr x, RPtr y);  // & | xor
RPtr logic_not(Interp& in, RPtr x);

RPtr math_unary(Interp& in, const std::string& fun, RPtr x);
RPtr math_round(Interp& in, RPtr x, RPtr digits);
RPtr math_log(Interp& in, RPtr x, RPtr base);

double round_half_even(double x, int digits);

// attributes of the longer operand; on ties the first operand wins
RPtr propagate_attrs(RPtr result, RPtr x, RPtr y);
RPtr propagate_special_attrs(RPtr result, RPtr x, RPtr y);

}  // namespace deepr

#endif  // DEEPR_VECOPS_HPP
