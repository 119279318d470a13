#ifndef DEEPR_PRINTER_HPP
#define DEEPR_PRINTER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "deepr/value.hpp"

namespace deepr {

struct RenderConfig {
  int width = 80;
  int digits = 7;
  bool quote = true;
};

// R-style common formatting of a double vector: every element is rendered
// with one shared layout (decimal places, notation) chosen so each value
// shows at most `digits` significant digits.
struct RealFormat {
  int width = 0;
  int decimals = 0;     // digits right of the point (fixed) or after mantissa
  bool scientific = false;
};

RealFormat plan_real_format(const RealVec& xs, int digits);
std::string format_real(double x, const RealFormat& f);

// Per-element rendering with `digits` significant digits (cat, paste, format
// of scalars); no common layout.
std::string format_real_element(double x, int digits);

// Full print: dispatch-free default method. Writes lines to `out`.
void print_value(Interp& in, const RObject& v, std::ostream& out);
void print_value(Interp& in, const RObject& v, std::ostream& out,
                 const RenderConfig& cfg);

}  // namespace deepr

#endif  // DEEPR_PRINTER_HPP
