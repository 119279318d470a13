#include "builtins_support.hpp"

namespace deepr {

void register_builtins(Interp& in) {
  register_core_builtins(in);
  register_vector_builtins(in);
  register_string_builtins(in);
  register_meta_builtins(in);
  run_prelude(in);
}

}  // namespace deepr
