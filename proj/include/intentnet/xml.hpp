#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace intentnet {

struct XmlAttr {
  std::string name;   // as written, prefix included (e.g. "android:name")
  std::string value;  // entity-decoded
};

struct XmlElement {
  std::string name;  // as written, prefix included
  std::vector<XmlAttr> attrs;
  std::vector<XmlElement> children;

  // Local part of the element name ("intent-filter" for "ns:intent-filter").
  std::string_view local_name() const;

  // Value of the first attribute whose local name matches, or nullptr.
  const std::string* attr_local(std::string_view local) const;
};

std::string_view xml_local_name(std::string_view qualified);

// Parses a standalone XML document and returns its root element. Supports
// the subset produced by manifest decoders: declaration, processing
// instructions, comments, DOCTYPE, CDATA, elements/attributes with the five
// predefined entities plus numeric character references. Text content is
// validated but not retained. Throws Error(MalformedXml) with line/column
// context on any syntax violation.
XmlElement parse_xml(std::string_view text);

}  // namespace intentnet
