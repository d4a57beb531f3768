#include "absaforge/xml.hpp"

#include <cctype>

#include "absaforge/errors.hpp"

namespace absaforge {

const std::string* XmlNode::attribute(std::string_view want) const {
    for (const auto& [key, value] : attributes)
        if (key == want) return &value;
    return nullptr;
}

std::vector<const XmlNode*> XmlNode::children_named(std::string_view want) const {
    std::vector<const XmlNode*> out;
    for (const auto& c : children)
        if (c.name == want) out.push_back(&c);
    return out;
}

const XmlNode* XmlNode::child(std::string_view want) const {
    for (const auto& c : children)
        if (c.name == want) return &c;
    return nullptr;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view doc) : doc_(doc) {}

    XmlNode parse_document() {
        skip_misc();
        if (eof()) fail("document has no root element");
        XmlNode root = parse_element();
        skip_misc();
        if (!eof()) fail("content after the root element");
        return root;
    }

private:
    std::string_view doc_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("XML: " + msg, line_, col_); }

    bool eof() const { return pos_ >= doc_.size(); }
    char peek() const { return doc_[pos_]; }

    bool starts_with(std::string_view s) const { return doc_.compare(pos_, s.size(), s) == 0; }

    char advance() {
        char c = doc_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    void skip_until(std::string_view terminator, const char* what) {
        while (!eof()) {
            if (starts_with(terminator)) {
                for (std::size_t i = 0; i < terminator.size(); ++i) advance();
                return;
            }
            advance();
        }
        fail(std::string("unterminated ") + what);
    }

    // Skips whitespace, comments, processing instructions and a DOCTYPE.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE")) {
                skip_until(">", "DOCTYPE");
            } else {
                return;
            }
        }
    }

    static bool name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
    }
    static bool name_char(char c) {
        return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
    }

    std::string parse_name() {
        if (eof() || !name_start(peek())) fail("expected a name");
        std::string name;
        while (!eof() && name_char(peek())) name.push_back(advance());
        return name;
    }

    void append_entity(std::string& out) {
        advance();  // '&'
        std::string ent;
        while (!eof() && peek() != ';') {
            ent.push_back(advance());
            if (ent.size() > 10) fail("unterminated entity reference");
        }
        if (eof()) fail("unterminated entity reference");
        advance();  // ';'
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
            long code = 0;
            try {
                code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                           ? std::stol(ent.substr(2), nullptr, 16)
                           : std::stol(ent.substr(1), nullptr, 10);
            } catch (const std::exception&) {
                fail("bad character reference '&" + ent + ";'");
            }
            append_codepoint(out, static_cast<unsigned long>(code));
        } else {
            fail("unknown entity '&" + ent + ";'");
        }
    }

    static void append_codepoint(std::string& out, unsigned long cp) {
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
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
        const char quote = advance();
        std::string value;
        while (!eof() && peek() != quote) {
            if (peek() == '&') append_entity(value);
            else if (peek() == '<') fail("'<' inside an attribute value");
            else value.push_back(advance());
        }
        if (eof()) fail("unterminated attribute value");
        advance();  // closing quote
        return value;
    }

    XmlNode parse_element() {
        XmlNode node;
        node.line = line_;
        node.column = col_;
        expect('<');
        node.name = parse_name();

        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag <" + node.name + ">");
            if (peek() == '/') {
                advance();
                expect('>');
                return node;  // self-closing
            }
            if (peek() == '>') {
                advance();
                break;
            }
            std::string key = parse_name();
            skip_ws();
            expect('=');
            skip_ws();
            node.attributes.emplace_back(std::move(key), parse_attr_value());
        }

        // Content until the matching end tag.
        for (;;) {
            if (eof()) fail("missing </" + node.name + ">");
            if (starts_with("</")) {
                advance();
                advance();
                std::string closing = parse_name();
                if (closing != node.name)
                    fail("mismatched end tag </" + closing + ">, expected </" + node.name + ">");
                skip_ws();
                expect('>');
                return node;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                for (int i = 0; i < 9; ++i) advance();
                while (!eof() && !starts_with("]]>")) node.text.push_back(advance());
                if (eof()) fail("unterminated CDATA section");
                for (int i = 0; i < 3; ++i) advance();
            } else if (peek() == '<') {
                node.children.push_back(parse_element());
            } else if (peek() == '&') {
                append_entity(node.text);
            } else {
                node.text.push_back(advance());
            }
        }
    }
};

}  // namespace

XmlNode parse_xml(std::string_view document) {
    return Parser(document).parse_document();
}

}  // namespace absaforge
