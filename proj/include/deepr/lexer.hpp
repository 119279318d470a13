#ifndef DEEPR_LEXER_HPP
#define DEEPR_LEXER_HPP

#include <string>
#include <vector>

namespace deepr {

enum class TokKind {
  Number,
  String,
  Symbol,
  BacktickSymbol,
  Operator,
  Punct,
  Keyword,
  Newline,
  End
};

struct Token {
  TokKind kind = TokKind::End;
  // Operator/punct/keyword spelling, symbol name, or decoded string payload.
  std::string text;
  double num = 0.0;
  bool int_suffix = false;
  int line = 1;
  int col = 1;
  size_t begin = 0;  // byte offsets into the source
  size_t end = 0;
};

// Thrown for malformed input. `incomplete` marks states that more input
// could fix (unterminated string or backtick); the REPL turns those into a
// continuation prompt instead of reporting a hard error.
struct SyntaxError {
  std::string msg;
  int line = 0;
  int col = 0;
  bool incomplete = false;
};

// Decodes literals and strips comments; the result always ends with an End
// token. Newline tokens are kept because they delimit statements.
std::vector<Token> tokenize(const std::string& source);

}  // namespace deepr

#endif  // DEEPR_LEXER_HPP
