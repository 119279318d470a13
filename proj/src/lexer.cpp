#include "deepr/lexer.hpp"

#include <cctype>
#include <cstdlib>
#include <unordered_set>

namespace deepr {

namespace {

const std::unordered_set<std::string> kKeywords = {
    "if",   "else",  "repeat", "while", "function", "for",
    "in",   "next",  "break",  "TRUE",  "FALSE",    "NULL",
    "Inf",  "NaN",   "NA",     "NA_integer_", "NA_real_", "NA_character_"};

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '.' || c >= 0x80;
}

bool ident_part(unsigned char c) {
  return std::isalnum(c) || c == '.' || c == '_' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      size_t before = pos_;
      Token t = next();
      t.begin = token_begin_ >= before ? token_begin_ : before;
      t.end = pos_;
      out.push_back(t);
      if (t.kind == TokKind::End) break;
    }
    return out;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;
  size_t token_begin_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& msg, bool incomplete = false) {
    throw SyntaxError{msg, line_, col_, incomplete};
  }

  char peek(size_t k = 0) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool at_end() const { return pos_ >= src_.size(); }

  Token make(TokKind kind, std::string text, int line, int col) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  }

  Token next() {
    // skip horizontal whitespace and comments
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
    int line = line_, col = col_;
    token_begin_ = pos_;
    if (at_end()) return make(TokKind::End, "", line, col);

    char c = peek();
    if (c == '\n') {
      advance();
      return make(TokKind::Newline, "\n", line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number(line, col);
    }
    if (c == '"' || c == '\'') return string_lit(line, col);
    if ((c == 'r' || c == 'R') && (peek(1) == '"' || peek(1) == '\'')) {
      return raw_string(line, col);
    }
    if (c == '`') return backtick(line, col);
    if (ident_start(static_cast<unsigned char>(c))) return ident(line, col);
    if (c == '_' && !ident_part(static_cast<unsigned char>(peek(1)))) {
      advance();
      return make(TokKind::Symbol, "_", line, col);  // pipe placeholder
    }
    if (c == '%') return percent_op(line, col);
    if (c == '\\' && peek(1) == '(') {
      advance();
      return make(TokKind::Keyword, "function", line, col);
    }
    return op_or_punct(line, col);
  }

  Token number(int line, int col) {
    std::string lex;
    bool hex = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      hex = true;
      lex += advance();
      lex += advance();
      if (!std::isxdigit(static_cast<unsigned char>(peek())))
        fail("malformed hexadecimal literal");
      while (std::isxdigit(static_cast<unsigned char>(peek()))) lex += advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
      if (peek() == '.') {
        lex += advance();
        while (std::isdigit(static_cast<unsigned char>(peek())))
          lex += advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        size_t k = 1;
        if (peek(1) == '+' || peek(1) == '-') k = 2;
        if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
          lex += advance();  // e
          if (peek() == '+' || peek() == '-') lex += advance();
          while (std::isdigit(static_cast<unsigned char>(peek())))
            lex += advance();
        }
      }
    }
    Token t = make(TokKind::Number, lex, line, col);
    t.num = hex ? static_cast<double>(std::strtoull(lex.c_str() + 2, nullptr, 16))
                : std::strtod(lex.c_str(), nullptr);
    if (peek() == 'L') {
      advance();
      t.int_suffix = true;
    } else if (peek() == 'i') {
      fail("complex constants are not supported");
    }
    if (ident_start(static_cast<unsigned char>(peek())))
      fail("malformed numeric literal");
    return t;
  }

  int hex_digits(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) {
      char c = peek();
      if (!std::isxdigit(static_cast<unsigned char>(c)))
        fail("invalid \\u escape sequence");
      advance();
      v = v * 16 + (std::isdigit(static_cast<unsigned char>(c))
                        ? c - '0'
                        : std::tolower(c) - 'a' + 10);
    }
    return v;
  }

  void append_utf8(std::string& out, int cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  Token string_lit(int line, int col) {
    char quote = advance();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated character string", true);
      char c = advance();
      if (c == quote) break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated character string", true);
      char e = advance();
      switch (e) {
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'a': out += '\a'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'v': out += '\v'; break;
        case '0': out += '\0'; break;
        case 'x': append_utf8(out, hex_digits(2)); break;
        case 'u':
          if (peek() == '{') {
            advance();
            int v = 0;
            while (peek() != '}') {
              if (at_end()) fail("unterminated \\u{} escape");
              char h = advance();
              if (!std::isxdigit(static_cast<unsigned char>(h)))
                fail("invalid \\u escape sequence");
              v = v * 16 + (std::isdigit(static_cast<unsigned char>(h))
                                ? h - '0'
                                : std::tolower(h) - 'a' + 10);
            }
            advance();
            append_utf8(out, v);
          } else {
            append_utf8(out, hex_digits(4));
          }
          break;
        case 'U': append_utf8(out, hex_digits(8)); break;
        default:
          fail(std::string("'\\") + e + "' is an unrecognized escape");
      }
    }
    return make(TokKind::String, out, line, col);
  }

  Token raw_string(int line, int col) {
    advance();  // r / R
    char quote = advance();
    std::string dashes;
    while (peek() == '-') dashes += advance();
    char open = peek();
    char close;
    switch (open) {
      case '(': close = ')'; break;
      case '[': close = ']'; break;
      case '{': close = '}'; break;
      default: fail("malformed raw string literal");
    }
    advance();
    std::string terminator = close + dashes + quote;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated raw string", true);
      if (src_.compare(pos_, terminator.size(), terminator) == 0) {
        for (size_t i = 0; i < terminator.size(); ++i) advance();
        break;
      }
      out += advance();
    }
    return make(TokKind::String, out, line, col);
  }

  Token backtick(int line, int col) {
    advance();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated backtick name", true);
      char c = advance();
      if (c == '`') break;
      out += c;
    }
    if (out.empty()) fail("zero-length backtick name");
    return make(TokKind::BacktickSymbol, out, line, col);
  }

  Token ident(int line, int col) {
    std::string out;
    out += advance();
    while (ident_part(static_cast<unsigned char>(peek()))) out += advance();
    // a dot followed by a digit does not start a name (.2way is invalid)
    if (out.size() >= 2 && out[0] == '.' &&
        std::isdigit(static_cast<unsigned char>(out[1])) &&
        !(out.size() >= 3 && out[1] == '.')) {
      // ..1, ..2 are fine; .2way is not
      if (out[1] != '.') fail("unexpected symbol");
    }
    if (kKeywords.count(out))
      return make(TokKind::Keyword, out, line, col);
    return make(TokKind::Symbol, out, line, col);
  }

  Token percent_op(int line, int col) {
    std::string out;
    out += advance();  // %
    while (true) {
      if (at_end() || peek() == '\n')
        fail("unterminated %...% operator");
      char c = advance();
      out += c;
      if (c == '%') break;
    }
    return make(TokKind::Operator, out, line, col);
  }

  Token op_or_punct(int line, int col) {
    char c = advance();
    auto two = [&](char second) {
      if (peek() == second) {
        advance();
        return true;
      }
      return false;
    };
    switch (c) {
      case '(': case ')': case '{': case '}': case ',': case ';':
        return make(TokKind::Punct, std::string(1, c), line, col);
      case '[':
        if (two('[')) return make(TokKind::Punct, "[[", line, col);
        return make(TokKind::Punct, "[", line, col);
      case ']':
        return make(TokKind::Punct, "]", line, col);
      case '+': case '*': case '^': case '~': case '@': case '$':
        if (c == '*' && two('*'))
          return make(TokKind::Operator, "^", line, col);
        return make(TokKind::Operator, std::string(1, c), line, col);
      case '?':
        return make(TokKind::Operator, "?", line, col);
      case '-':
        if (two('>')) {
          if (two('>')) return make(TokKind::Operator, "->>", line, col);
          return make(TokKind::Operator, "->", line, col);
        }
        return make(TokKind::Operator, "-", line, col);
      case '/':
        return make(TokKind::Operator, "/", line, col);
      case ':':
        if (two(':')) {
          if (two(':')) return make(TokKind::Operator, ":::", line, col);
          return make(TokKind::Operator, "::", line, col);
        }
        if (two('=')) return make(TokKind::Operator, ":=", line, col);
        return make(TokKind::Operator, ":", line, col);
      case '=':
        if (two('=')) return make(TokKind::Operator, "==", line, col);
        return make(TokKind::Operator, "=", line, col);
      case '!':
        if (two('=')) return make(TokKind::Operator, "!=", line, col);
        return make(TokKind::Operator, "!", line, col);
      case '<':
        if (two('-')) return make(TokKind::Operator, "<-", line, col);
        if (two('<')) {
          if (two('-')) return make(TokKind::Operator, "<<-", line, col);
          fail("unexpected '<<'");
        }
        if (two('=')) return make(TokKind::Operator, "<=", line, col);
        return make(TokKind::Operator, "<", line, col);
      case '>':
        if (two('=')) return make(TokKind::Operator, ">=", line, col);
        return make(TokKind::Operator, ">", line, col);
      case '&':
        if (two('&')) return make(TokKind::Operator, "&&", line, col);
        return make(TokKind::Operator, "&", line, col);
      case '|':
        if (two('|')) return make(TokKind::Operator, "||", line, col);
        if (two('>')) return make(TokKind::Operator, "|>", line, col);
        return make(TokKind::Operator, "|", line, col);
      default:
        fail(std::string("unexpected '") + c + "'");
    }
  }
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
  return Lexer(source).run();
}

}  // namespace deepr
