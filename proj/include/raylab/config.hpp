#pragma once

// Sectioned key=value configuration with positioned diagnostics.  The
// grammar is line-oriented: `[section]` headers, `key = value` entries,
// `#` or `;` comments to end of line.  Values are numbers, bare
// identifiers, double-quoted strings, or bracketed lists (nestable).
// Parsing never throws on bad input; every problem becomes a ParseError
// with line and column, and the parser resumes at the next line.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace raylab {

struct ParseError {
  int line = 0;
  int col = 0;
  std::string message;
};

struct ConfigValue {
  enum class Kind { Number, Ident, String, List };
  Kind kind = Kind::Ident;
  double num = 0.0;
  std::string str;                 // identifier or string payload
  std::vector<ConfigValue> items;  // list payload
  int line = 0, col = 0;

  bool is_number() const { return kind == Kind::Number; }
  bool is_ident() const { return kind == Kind::Ident; }
  bool is_string() const { return kind == Kind::String; }
  bool is_list() const { return kind == Kind::List; }
  // Identifiers and strings are interchangeable where text is expected.
  bool is_text() const { return kind == Kind::Ident || kind == Kind::String; }
};

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  int line = 0, col = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0, col = 0;
  std::vector<ConfigEntry> entries;

  const ConfigValue* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e.value;
    return nullptr;
  }
  std::vector<const ConfigValue*> find_all(std::string_view key) const {
    std::vector<const ConfigValue*> out;
    for (const auto& e : entries)
      if (e.key == key) out.push_back(&e.value);
    return out;
  }
  std::optional<double> number(std::string_view key) const {
    const ConfigValue* v = find(key);
    if (v && v->is_number()) return v->num;
    return std::nullopt;
  }
  std::optional<std::string> text(std::string_view key) const {
    const ConfigValue* v = find(key);
    if (v && v->is_text()) return v->str;
    return std::nullopt;
  }
};

struct ParseResult {
  std::vector<ConfigSection> sections;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

namespace config_detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  char get() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_spaces() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }
  void skip_to_eol() {
    while (!done() && peek() != '\n') get();
  }
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}
inline bool number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

inline bool at_comment(const Cursor& cur) { return cur.peek() == '#' || cur.peek() == ';'; }

// Parses one value starting at the cursor; returns false after recording an
// error.  Lists recurse.
inline bool parse_value(Cursor& cur, ConfigValue& out, std::vector<ParseError>& errors) {
  cur.skip_spaces();
  out.line = cur.line;
  out.col = cur.col;
  char c = cur.peek();
  if (c == '[') {
    cur.get();
    out.kind = ConfigValue::Kind::List;
    cur.skip_spaces();
    if (cur.peek() == ']') {
      cur.get();
      return true;
    }
    while (true) {
      ConfigValue item;
      if (!parse_value(cur, item, errors)) return false;
      out.items.push_back(std::move(item));
      cur.skip_spaces();
      if (cur.peek() == ',') {
        cur.get();
        continue;
      }
      if (cur.peek() == ']') {
        cur.get();
        return true;
      }
      errors.push_back({cur.line, cur.col, "expected ',' or ']' in list"});
      return false;
    }
  }
  if (c == '"') {
    cur.get();
    out.kind = ConfigValue::Kind::String;
    while (!cur.done() && cur.peek() != '"' && cur.peek() != '\n') {
      char d = cur.get();
      if (d == '\\' && !cur.done() && (cur.peek() == '"' || cur.peek() == '\\')) d = cur.get();
      out.str.push_back(d);
    }
    if (cur.peek() != '"') {
      errors.push_back({out.line, out.col, "unterminated string"});
      return false;
    }
    cur.get();
    return true;
  }
  if (number_start(c)) {
    std::size_t start = cur.pos;
    int sline = cur.line, scol = cur.col;
    while (!cur.done() && (ident_char(cur.peek()) || cur.peek() == '-' || cur.peek() == '+')) {
      // '-'/'+' are only part of the token directly after an exponent marker
      if ((cur.peek() == '-' || cur.peek() == '+') && cur.pos != start) {
        char prev = cur.text[cur.pos - 1];
        if (prev != 'e' && prev != 'E') break;
      }
      cur.get();
    }
    std::string token(cur.text.substr(start, cur.pos - start));
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(v)) {
      errors.push_back({sline, scol, "malformed number '" + token + "'"});
      return false;
    }
    out.kind = ConfigValue::Kind::Number;
    out.num = v;
    out.str = std::move(token);
    return true;
  }
  if (ident_start(c)) {
    out.kind = ConfigValue::Kind::Ident;
    while (!cur.done() && ident_char(cur.peek())) out.str.push_back(cur.get());
    return true;
  }
  errors.push_back({cur.line, cur.col, "expected a value"});
  return false;
}

}  // namespace config_detail

inline ParseResult parse_config_text(std::string_view text) {
  using namespace config_detail;
  ParseResult res;
  Cursor cur{text};
  ConfigSection* section = nullptr;

  while (!cur.done()) {
    cur.skip_spaces();
    if (cur.done()) break;
    char c = cur.peek();
    if (c == '\n') {
      cur.get();
      continue;
    }
    if (at_comment(cur)) {
      cur.skip_to_eol();
      continue;
    }
    if (c == '[') {
      int sline = cur.line, scol = cur.col;
      cur.get();
      cur.skip_spaces();
      std::string name;
      while (!cur.done() && ident_char(cur.peek())) name.push_back(cur.get());
      cur.skip_spaces();
      if (name.empty() || cur.peek() != ']') {
        res.errors.push_back({sline, scol, "malformed section header"});
        cur.skip_to_eol();
        continue;
      }
      cur.get();
      cur.skip_spaces();
      if (!cur.done() && cur.peek() != '\n' && !at_comment(cur)) {
        res.errors.push_back({cur.line, cur.col, "trailing text after section header"});
        cur.skip_to_eol();
        continue;
      }
      res.sections.push_back(ConfigSection{name, sline, scol, {}});
      section = &res.sections.back();
      continue;
    }
    if (ident_start(c)) {
      int kline = cur.line, kcol = cur.col;
      std::string key;
      while (!cur.done() && ident_char(cur.peek())) key.push_back(cur.get());
      cur.skip_spaces();
      if (cur.peek() != '=') {
        res.errors.push_back({cur.line, cur.col, "expected '=' after key '" + key + "'"});
        cur.skip_to_eol();
        continue;
      }
      cur.get();
      ConfigValue value;
      if (!parse_value(cur, value, res.errors)) {
        cur.skip_to_eol();
        continue;
      }
      cur.skip_spaces();
      if (!cur.done() && cur.peek() != '\n' && !at_comment(cur)) {
        res.errors.push_back({cur.line, cur.col, "trailing text after value"});
        cur.skip_to_eol();
        continue;
      }
      if (!section) {
        res.errors.push_back({kline, kcol, "entry before any section header"});
        continue;
      }
      section->entries.push_back(ConfigEntry{std::move(key), std::move(value), kline, kcol});
      continue;
    }
    res.errors.push_back({cur.line, cur.col, "unexpected character"});
    cur.skip_to_eol();
  }
  return res;
}

}  // namespace raylab
