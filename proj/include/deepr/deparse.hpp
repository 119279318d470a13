#ifndef DEEPR_DEPARSE_HPP
#define DEEPR_DEPARSE_HPP

#include <string>
#include <vector>

#include "deepr/value.hpp"

namespace deepr {

// Canonical source rendering of a language object or value. Blocks,
// function bodies, and if/else with block branches span multiple lines with
// four-space indents; everything else renders on one line.
std::vector<std::string> deparse_lines(const RObject& e);

// One-line form: lines joined (used in error messages and match.call text).
std::string deparse1(const RObject& e);

// Re-escape a decoded string for source display.
std::string escape_string(const std::string& s);

bool is_syntactic_name(const std::string& s);
std::string maybe_backtick(const std::string& s);

// Drops parser-attached source slices (used by structural round-trip tests).
RPtr strip_src(RPtr e);

// Canonical closure header + body, e.g. "function (x, y = 1)" then the body.
std::vector<std::string> deparse_closure(const RClosure& c);

}  // namespace deepr

#endif  // DEEPR_DEPARSE_HPP
