#ifndef DEEPR_ERROR_HPP
#define DEEPR_ERROR_HPP

#include <stdexcept>
#include <string>

#include "deepr/value.hpp"

namespace deepr {

// R-level error condition. `call` is the call in whose frame the condition
// was signalled (null for call-less errors such as parse failures).
class RError : public std::runtime_error {
 public:
  RError(std::string message, RPtr call = nullptr)
      : std::runtime_error(message), message(std::move(message)),
        call(std::move(call)) {}

  std::string message;
  RPtr call;
  bool printed = false;  // top-level handler already displayed it
};

// Internal unwind signals for flow control; never escape the evaluator.
struct LoopBreak {};
struct LoopNext {};

struct ReturnUnwind {
  RPtr value;
  const void* frame_token;  // which frame return() belongs to
};

// A warning signalled while a tryCatch(warning=) handler is established
// transfers control to it instead of being queued.
struct WarningUnwind {
  std::string message;
  RPtr call;
  size_t target;
};

}  // namespace deepr

#endif  // DEEPR_ERROR_HPP
