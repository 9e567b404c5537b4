#pragma once

// Line-oriented N-Triples reader and writer.
//
// Subjects and predicates are kept as plain labels: the bare IRI text, or
// "_:label" for blank nodes. Objects keep their term kind so that a literal
// "x" and the IRI <x> never compare equal.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace keydisc {

enum class TermKind : std::uint8_t { iri, blank, literal };

struct Term {
  TermKind kind = TermKind::iri;
  std::string value;     // unescaped IRI text, blank label (without "_:"), or literal lexical form
  std::string datatype;  // literal only, may be empty
  std::string language;  // literal only, may be empty

  // Canonical string used for object-set signatures. The value part is the
  // unescaped lexical form, byte-for-byte as read.
  std::string lexical() const {
    switch (kind) {
      case TermKind::iri:
        return "<" + value + ">";
      case TermKind::blank:
        return "_:" + value;
      case TermKind::literal: {
        std::string out = "\"" + value + "\"";
        if (!language.empty()) out += "@" + language;
        else if (!datatype.empty()) out += "^^<" + datatype + ">";
        return out;
      }
    }
    return value;
  }

  static Term iri_term(std::string iri) { return Term{TermKind::iri, std::move(iri), {}, {}}; }
  static Term blank_term(std::string label) { return Term{TermKind::blank, std::move(label), {}, {}}; }
  static Term literal_term(std::string lex, std::string datatype = {}, std::string lang = {}) {
    return Term{TermKind::literal, std::move(lex), std::move(datatype), std::move(lang)};
  }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string excerpt, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message + " near '" + excerpt + "'"),
        line_(line),
        excerpt_(std::move(excerpt)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& excerpt() const noexcept { return excerpt_; }

 private:
  std::size_t line_;
  std::string excerpt_;
};

enum class ParseMode { strict, lenient };

struct ParseStats {
  std::size_t lines = 0;
  std::size_t triples = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;  // first few skipped-line messages, lenient mode only
};

namespace detail {

inline constexpr std::size_t kExcerptLength = 40;
inline constexpr std::size_t kMaxWarnings = 20;

inline void append_utf8(std::string& out, std::uint32_t cp) {
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

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    Triple t;
    t.subject = parse_subject();
    skip_ws();
    t.predicate = parse_iri();
    skip_ws();
    t.object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after object");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected content after '.'");
    return t;
  }

 private:
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    auto column = std::min(pos_, line_.size()) + 1;
    throw ParseError(line_no_, std::string(line_.substr(0, kExcerptLength)),
                     message + " (column " + std::to_string(column) + ")");
  }

  std::uint32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > line_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = line_[pos_ + i];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in unicode escape");
    }
    pos_ += digits;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point in unicode escape");
    return cp;
  }

  // Handles \uXXXX and \UXXXXXXXX; pos_ is just past the backslash.
  bool parse_uchar(std::string& out) {
    if (at_end()) fail("dangling backslash");
    char c = peek();
    if (c == 'u' || c == 'U') {
      ++pos_;
      append_utf8(out, parse_hex(c == 'u' ? 4 : 8));
      return true;
    }
    return false;
  }

  std::string parse_iri() {
    if (at_end() || peek() != '<') fail("expected '<'");
    ++pos_;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = peek();
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        if (!parse_uchar(out)) fail("only unicode escapes are allowed in IRIs");
        continue;
      }
      auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`')
        fail("illegal character in IRI");
      out += c;
      ++pos_;
    }
    if (out.empty()) fail("empty IRI");
    return out;
  }

  std::string parse_blank_label() {
    // pos_ at '_'
    if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != ':') fail("expected '_:'");
    pos_ += 2;
    std::size_t start = pos_;
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '<' || c == '"') break;
      ++pos_;
    }
    // A trailing '.' terminates the statement, not the label.
    while (pos_ > start && line_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) fail("empty blank node label");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string parse_subject() {
    if (at_end()) fail("expected subject");
    if (peek() == '<') return parse_iri();
    if (peek() == '_') return "_:" + parse_blank_label();
    fail("subject must be an IRI or blank node");
  }

  Term parse_literal() {
    ++pos_;  // opening quote
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = peek();
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\n') fail("newline in literal");
      if (c == '\\') {
        ++pos_;
        if (parse_uchar(value)) continue;
        switch (peek()) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          default: fail("unknown escape sequence");
        }
        ++pos_;
        continue;
      }
      value += c;
      ++pos_;
    }
    Term term = Term::literal_term(std::move(value));
    if (!at_end() && peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end()) {
        char c = peek();
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) break;
        ++pos_;
      }
      if (pos_ == start) fail("empty language tag");
      term.language = std::string(line_.substr(start, pos_ - start));
    } else if (!at_end() && peek() == '^') {
      if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != '^') fail("expected '^^'");
      pos_ += 2;
      term.datatype = parse_iri();
    }
    return term;
  }

  Term parse_object() {
    if (at_end()) fail("expected object");
    switch (peek()) {
      case '<': return Term::iri_term(parse_iri());
      case '_': return Term::blank_term(parse_blank_label());
      case '"': return parse_literal();
      default: fail("object must be an IRI, blank node or literal");
    }
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

inline void write_escaped_iri(std::ostream& out, std::string_view iri) {
  static constexpr char hex[] = "0123456789ABCDEF";
  for (char c : iri) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\') {
      out << "\\u00" << hex[u >> 4] << hex[u & 0xF];
    } else {
      out << c;
    }
  }
}

inline void write_escaped_literal(std::ostream& out, std::string_view value) {
  for (char c : value) {
    switch (c) {
      case '\t': out << "\\t"; break;
      case '\b': out << "\\b"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\f': out << "\\f"; break;
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      default: out << c;
    }
  }
}

inline void write_node_label(std::ostream& out, std::string_view label) {
  if (label.starts_with("_:")) {
    out << label;
  } else {
    out << '<';
    write_escaped_iri(out, label);
    out << '>';
  }
}

}  // namespace detail

// Parses one line. Returns nullopt for blank and comment lines.
inline std::optional<Triple> parse_line(std::string_view line, std::size_t line_no) {
  return detail::LineParser(line, line_no).parse();
}

// Streams triples from `in` into `sink(Triple&&)`. In strict mode the first
// malformed line throws ParseError; in lenient mode it is counted and skipped.
template <typename Sink>
void for_each_triple(std::istream& in, Sink&& sink, ParseMode mode = ParseMode::strict, ParseStats* stats = nullptr) {
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  std::string line;
  while (std::getline(in, line)) {
    ++st.lines;
    try {
      if (auto t = parse_line(line, st.lines)) {
        ++st.triples;
        sink(std::move(*t));
      }
    } catch (const ParseError& e) {
      if (mode == ParseMode::strict) throw;
      ++st.skipped;
      if (st.warnings.size() < detail::kMaxWarnings) st.warnings.emplace_back(e.what());
    }
  }
}

inline std::vector<Triple> parse_triples(std::istream& in, ParseMode mode = ParseMode::strict,
                                         ParseStats* stats = nullptr) {
  std::vector<Triple> out;
  for_each_triple(in, [&](Triple&& t) { out.push_back(std::move(t)); }, mode, stats);
  return out;
}

inline std::vector<Triple> parse_triples(std::string_view text, ParseMode mode = ParseMode::strict,
                                         ParseStats* stats = nullptr) {
  std::istringstream in{std::string(text)};
  return parse_triples(in, mode, stats);
}

inline void write_triple(std::ostream& out, const Triple& t) {
  detail::write_node_label(out, t.subject);
  out << " <";
  detail::write_escaped_iri(out, t.predicate);
  out << "> ";
  switch (t.object.kind) {
    case TermKind::iri:
      out << '<';
      detail::write_escaped_iri(out, t.object.value);
      out << '>';
      break;
    case TermKind::blank:
      out << "_:" << t.object.value;
      break;
    case TermKind::literal:
      out << '"';
      detail::write_escaped_literal(out, t.object.value);
      out << '"';
      if (!t.object.language.empty()) {
        out << '@' << t.object.language;
      } else if (!t.object.datatype.empty()) {
        out << "^^<";
        detail::write_escaped_iri(out, t.object.datatype);
        out << '>';
      }
      break;
  }
  out << " .\n";
}

inline std::string to_ntriples(const std::vector<Triple>& triples) {
  std::ostringstream out;
  for (const auto& t : triples) write_triple(out, t);
  return out.str();
}

}  // namespace keydisc
