#ifndef DEEPR_SESSION_HPP
#define DEEPR_SESSION_HPP

#include <iostream>
#include <string>

#include "deepr/interp.hpp"

namespace deepr {

// One top-level statement: evaluation, warning flushing, auto-printing.
// Visible results print unless `autoprint` is off (script mode).
class Session {
 public:
  explicit Session(std::ostream& out) : out_(&out) { in.out = &out; }

  Interp in;

  // returns false when an uncaught error aborted the statement
  bool run_statement(RPtr expr, bool autoprint);

  // parses and runs a whole program; stops at the first uncaught error
  bool run_source(const std::string& src, bool autoprint);

  std::ostream& out() { return *out_; }

 private:
  std::ostream* out_;
  void flush_warnings();
};

// "Error in CALL: MSG" / "Error: MSG", wrapped at the display width
// (also used by the interpreter when it signals an unhandled error)
std::string format_condition(Interp& in, const std::string& kind,
                             const std::string& msg, RPtr call);

void repl_loop(std::istream& input, std::ostream& output, bool show_prompts);

int run_script(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace deepr

#endif  // DEEPR_SESSION_HPP
