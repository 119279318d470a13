#include "deepr/session.hpp"

#include <fstream>
#include <sstream>

#include "deepr/deparse.hpp"
#include "deepr/printer.hpp"

namespace deepr {

namespace {

// wraps "PREFIX: message" at `width` columns, continuation indented 2
std::string wrap_text(const std::string& text, size_t width) {
  std::istringstream is(text);
  std::string word, line, out;
  while (is >> word) {
    if (line.empty()) {
      line = word;
    } else if (line.size() + 1 + word.size() <= width) {
      line += " " + word;
    } else {
      out += line + "\n";
      line = "  " + word;
    }
  }
  out += line;
  return out;
}

}  // namespace

std::string format_error_for_display(Interp& in, const std::string& msg,
                                     RPtr call) {
  return format_condition(in, "Error", msg, std::move(call));
}

std::string format_condition(Interp& in, const std::string& kind,
                             const std::string& msg, RPtr call) {
  std::string text;
  if (call && call->type() != Type::Null) {
    text = kind + " in " + deparse1(*call) + ": " + msg;
  } else {
    text = kind + ": " + msg;
  }
  // messages containing newlines keep them; wrap each piece
  std::string out;
  std::istringstream is(text);
  std::string piece;
  bool first = true;
  while (std::getline(is, piece)) {
    if (!first) out += "\n";
    out += wrap_text(piece, in.opt_width);
    first = false;
  }
  return out;
}

void Session::flush_warnings() {
  for (const WarningEntry& w : in.take_warnings()) {
    in.fresh_line();
    *out_ << format_condition(in, "Warning", w.message, w.call) << "\n";
    in.at_line_start = true;
  }
}

bool Session::run_statement(RPtr expr, bool autoprint) {
  try {
    RPtr value = in.eval_top(expr);
    bool visible = in.visible;
    flush_warnings();
    if (autoprint && visible) in.print_value_dispatch(value, in.global_env);
    flush_warnings();
    return true;
  } catch (RError& e) {
    flush_warnings();
    if (!e.printed) {
      in.fresh_line();
      *out_ << format_condition(in, "Error", e.message, e.call) << "\n";
      in.at_line_start = true;
    }
    return false;
  } catch (LoopBreak&) {
    *out_ << format_condition(in, "Error",
                              "no loop for break/next, jumping to top level",
                              nullptr)
          << "\n";
    return false;
  } catch (LoopNext&) {
    *out_ << format_condition(in, "Error",
                              "no loop for break/next, jumping to top level",
                              nullptr)
          << "\n";
    return false;
  } catch (ReturnUnwind&) {
    *out_ << format_condition(
                 in, "Error", "no function to return from, jumping to top level",
                 nullptr)
          << "\n";
    return false;
  } catch (WarningUnwind& w) {
    // handler vanished mid-unwind; degrade to a queued warning
    in.warning_barriers.clear();
    in.warn_at(w.message, w.call);
    flush_warnings();
    return true;
  }
}

bool Session::run_source(const std::string& src, bool autoprint) {
  ParseResult pr = parse_program(src);
  if (!pr.error.empty()) {
    *out_ << "Error: " << pr.error << "\n";
    return false;
  }
  for (const RPtr& e : pr.exprs) {
    if (!run_statement(e, autoprint)) return false;
  }
  return true;
}

void repl_loop(std::istream& input, std::ostream& output, bool show_prompts) {
  Session session(output);
  std::string buffer;
  std::string line;
  auto prompt = [&](bool cont) {
    if (show_prompts) output << (cont ? "+ " : "> ") << std::flush;
  };
  prompt(false);
  while (std::getline(input, line)) {
    buffer += buffer.empty() ? line : "\n" + line;
    ParseResult pr = parse_program(buffer);
    if (pr.incomplete) {
      prompt(true);
      continue;
    }
    if (!pr.error.empty()) {
      output << "Error: " << pr.error << "\n";
      buffer.clear();
      prompt(false);
      continue;
    }
    buffer.clear();
    for (const RPtr& e : pr.exprs) session.run_statement(e, true);
    prompt(false);
  }
}

int run_script(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path);
  if (!f) {
    err << "cannot open file '" << path << "'\n";
    return 2;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  Session session(out);
  session.in.print_errors_at_signal = false;
  ParseResult pr = parse_program(ss.str());
  if (!pr.error.empty()) {
    err << "Error: " << pr.error << "\n";
    return 1;
  }
  for (const RPtr& e : pr.exprs) {
    try {
      session.in.eval_top(e);
      for (const WarningEntry& w : session.in.take_warnings())
        err << format_condition(session.in, "Warning", w.message, w.call)
            << "\n";
    } catch (RError& ex) {
      err << format_condition(session.in, "Error", ex.message, ex.call)
          << "\n";
      return 1;
    } catch (...) {
      err << "Error: internal interpreter failure\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace deepr
