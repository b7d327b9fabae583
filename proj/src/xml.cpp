#include "intentnet/xml.hpp"

#include <cctype>
#include <cstdint>
#include <string>

#include "intentnet/errors.hpp"

namespace intentnet {

std::string_view xml_local_name(std::string_view qualified) {
  const auto pos = qualified.rfind(':');
  return pos == std::string_view::npos ? qualified
                                       : qualified.substr(pos + 1);
}

std::string_view XmlElement::local_name() const {
  return xml_local_name(name);
}

const std::string* XmlElement::attr_local(std::string_view local) const {
  for (const auto& a : attrs) {
    if (xml_local_name(a.name) == local) {
      return &a.value;
    }
  }
  return nullptr;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  XmlElement parse_document() {
    skip_bom();
    skip_misc();
    if (eof() || peek() != '<') {
      fail("expected root element");
    }
    XmlElement root = parse_element();
    skip_misc();
    if (!eof()) {
      fail("content after root element");
    }
    return root;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char peek_at(std::size_t off) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::MalformedXml, what + " at line " + std::to_string(line) +
                                        ", column " + std::to_string(col));
  }

  void skip_bom() {
    if (text_.size() >= 3 && static_cast<unsigned char>(text_[0]) == 0xEF &&
        static_cast<unsigned char>(text_[1]) == 0xBB &&
        static_cast<unsigned char>(text_[2]) == 0xBF) {
      pos_ = 3;
    }
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' ||
                      peek() == '\r')) {
      ++pos_;
    }
  }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s, const char* what) {
    if (!starts_with(s)) {
      fail(std::string("expected ") + what);
    }
    pos_ += s.size();
  }

  // Whitespace, comments, PIs, declaration, DOCTYPE -- anything allowed
  // outside the root element.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        skip_until("?>", "unterminated processing instruction");
      } else if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_until(std::string_view end, const char* err) {
    const auto at = text_.find(end, pos_);
    if (at == std::string_view::npos) {
      fail(err);
    }
    pos_ = at + end.size();
  }

  void skip_comment() {
    pos_ += 4;
    skip_until("-->", "unterminated comment");
  }

  void skip_doctype() {
    // Tolerate an optional [...] internal subset; manifests never have one,
    // but skipping it keeps the parser honest about where '>' closes.
    int depth = 0;
    while (!eof()) {
      const char c = text_[pos_++];
      if (c == '[') {
        ++depth;
      } else if (c == ']') {
        --depth;
      } else if (c == '>' && depth <= 0) {
        return;
      }
    }
    fail("unterminated DOCTYPE");
  }

  static bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == ':' || c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) {
      fail("expected a name");
    }
    const std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out.push_back(raw[i++]);
        continue;
      }
      const auto semi = raw.find(';', i + 1);
      if (semi == std::string_view::npos) {
        fail("unterminated entity reference");
      }
      const std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") {
        out.push_back('<');
      } else if (ent == "gt") {
        out.push_back('>');
      } else if (ent == "amp") {
        out.push_back('&');
      } else if (ent == "quot") {
        out.push_back('"');
      } else if (ent == "apos") {
        out.push_back('\'');
      } else if (!ent.empty() && ent[0] == '#') {
        out += decode_charref(ent.substr(1));
      } else {
        fail("unknown entity reference '&" + std::string(ent) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  std::string decode_charref(std::string_view digits) {
    int base = 10;
    if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
      base = 16;
      digits.remove_prefix(1);
    }
    if (digits.empty()) {
      fail("empty character reference");
    }
    std::uint32_t cp = 0;
    for (const char c : digits) {
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (base == 16 && c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else if (base == 16 && c >= 'A' && c <= 'F') {
        d = c - 'A' + 10;
      } else {
        fail("bad character reference");
      }
      cp = cp * static_cast<std::uint32_t>(base) + static_cast<std::uint32_t>(d);
      if (cp > 0x10FFFF) {
        fail("character reference out of range");
      }
    }
    // UTF-8 encode.
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
  }

  XmlAttr parse_attribute() {
    XmlAttr attr;
    attr.name = parse_name();
    skip_ws();
    expect("=", "'=' after attribute name");
    skip_ws();
    if (eof() || (peek() != '"' && peek() != '\'')) {
      fail("expected quoted attribute value");
    }
    const char quote = peek();
    ++pos_;
    const std::size_t start = pos_;
    while (!eof() && peek() != quote) {
      if (peek() == '<') {
        fail("'<' inside attribute value");
      }
      ++pos_;
    }
    if (eof()) {
      fail("unterminated attribute value");
    }
    attr.value = decode_entities(text_.substr(start, pos_ - start));
    ++pos_;  // closing quote
    return attr;
  }

  XmlElement parse_element() {
    expect("<", "'<'");
    XmlElement elem;
    elem.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) {
        fail("unterminated start tag");
      }
      if (starts_with("/>")) {
        pos_ += 2;
        return elem;
      }
      if (peek() == '>') {
        ++pos_;
        parse_children(elem);
        return elem;
      }
      elem.attrs.push_back(parse_attribute());
    }
  }

  void parse_children(XmlElement& elem) {
    for (;;) {
      // Text content between markup is skipped, not stored.
      while (!eof() && peek() != '<') {
        if (peek() == '&') {
          const auto semi = text_.find(';', pos_ + 1);
          if (semi == std::string_view::npos) {
            fail("unterminated entity reference");
          }
          pos_ = semi + 1;
        } else {
          ++pos_;
        }
      }
      if (eof()) {
        fail("unterminated element '" + elem.name + "'");
      }
      if (starts_with("</")) {
        pos_ += 2;
        const std::string closing = parse_name();
        if (closing != elem.name) {
          fail("mismatched closing tag '" + closing + "' for '" + elem.name +
               "'");
        }
        skip_ws();
        expect(">", "'>' after closing tag");
        return;
      }
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<![CDATA[")) {
        skip_until("]]>", "unterminated CDATA section");
      } else if (starts_with("<?")) {
        skip_until("?>", "unterminated processing instruction");
      } else {
        elem.children.push_back(parse_element());
      }
    }
  }
};

}  // namespace

XmlElement parse_xml(std::string_view text) {
  Parser parser(text);
  return parser.parse_document();
}

}  // namespace intentnet
