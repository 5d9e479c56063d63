#pragma once

#include <cctype>
#include <string_view>

#include "ufam/common.hpp"

namespace ufam {

// Minimal cursor for the recursive-descent parsers of the small DSLs.
struct Cursor {
  std::string_view text;
  std::size_t pos{0};

  explicit Cursor(std::string_view t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool accept(char c) {
    skip_ws();
    if (!eof() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (text.substr(pos, w.size()) != w) return false;
    // keywords must not run into a following identifier character
    std::size_t end = pos + w.size();
    if (end < text.size() &&
        (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
      return false;
    pos = end;
    return true;
  }

  Nat nat() {
    skip_ws();
    if (eof() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected a natural number");
    Nat v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > (Nat{1} << 56)) fail("number too large");
      ++pos;
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos), pos);
  }

  void expect_end() {
    skip_ws();
    if (!eof()) fail("trailing input");
  }
};

}  // namespace ufam
