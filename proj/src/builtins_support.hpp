#ifndef DEEPR_BUILTINS_SUPPORT_HPP
#define DEEPR_BUILTINS_SUPPORT_HPP

#include <functional>
#include <string>

#include "deepr/env.hpp"
#include "deepr/interp.hpp"
#include "deepr/value.hpp"

namespace deepr {

enum Visibility { kVisible = 0, kInvisible = 1, kPassthrough = 2 };

std::vector<Formal> parse_formals(const std::string& spec);

void register_builtin(Interp& in, const std::string& name,
                      const std::string& formals_spec, int vis, bool special,
                      std::function<RPtr(Interp&, BuiltinCall&)> fn);

inline void reg(Interp& in, const std::string& name, const std::string& spec,
                std::function<RPtr(Interp&, BuiltinCall&)> fn,
                int vis = kVisible) {
  register_builtin(in, name, spec, vis, false, std::move(fn));
}

inline void reg_special(Interp& in, const std::string& name,
                        const std::string& spec,
                        std::function<RPtr(Interp&, BuiltinCall&)> fn,
                        int vis = kPassthrough) {
  register_builtin(in, name, spec, vis, true, std::move(fn));
}

// --- scalar argument helpers -------------------------------------------------

bool scalar_flag(Interp& in, RPtr v, bool deflt);
double scalar_double(Interp& in, RPtr v, const char* what);
std::string scalar_string(Interp& in, RPtr v, const char* what);

// condition for if/while: single non-NA logical
bool condition_value(Interp& in, const RObject& v, RPtr call_expr);

// registration groups
void register_core_builtins(Interp& in);
void register_vector_builtins(Interp& in);
void register_string_builtins(Interp& in);
void register_meta_builtins(Interp& in);
void run_prelude(Interp& in);

}  // namespace deepr

#endif  // DEEPR_BUILTINS_SUPPORT_HPP
