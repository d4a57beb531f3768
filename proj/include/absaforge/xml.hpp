#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace absaforge {

// Minimal XML document model: elements, attributes, character data.
// Covers the SemEval-2014 corpus schema (no namespaces, no DTD validation).
struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlNode> children;
    std::string text;  // concatenated character data directly under this element
    int line = 0;      // 1-based position of the opening '<'
    int column = 0;

    // First attribute value by name; nullptr when absent.
    const std::string* attribute(std::string_view name) const;

    // All direct children with the given element name.
    std::vector<const XmlNode*> children_named(std::string_view name) const;

    // First direct child with the given name; nullptr when absent.
    const XmlNode* child(std::string_view name) const;
};

// Parses a complete document and returns its root element.
// Throws ParseError with line/column on malformed input.
XmlNode parse_xml(std::string_view document);

}  // namespace absaforge
