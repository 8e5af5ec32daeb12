#include "witness/sexp.hpp"

#include "witness/error.hpp"

namespace witness {

std::string Sexp::where() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void syntax_error(const Sexp& at, const std::string& message) {
    fail("SyntaxError", at.where() + ": " + message);
}

namespace {

struct Reader {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;

    [[noreturn]] void error(const std::string& message) const {
        fail("SyntaxError", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": " + message);
    }

    bool at_end() const { return pos >= text.size(); }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_space() {
        while (!at_end()) {
            char c = text[pos];
            if (c == ';') {
                while (!at_end() && text[pos] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    Sexp read() {
        skip_space();
        if (at_end()) error("unexpected end of input");
        Sexp s;
        s.line = line;
        s.column = column;
        char c = text[pos];
        if (c == ')') error("unexpected ')'");
        if (c == '(') {
            s.is_atom = false;
            advance();
            for (;;) {
                skip_space();
                if (at_end()) fail("SyntaxError", s.where() + ": unclosed '('");
                if (text[pos] == ')') {
                    advance();
                    break;
                }
                s.items.push_back(read());
            }
            return s;
        }
        while (!at_end()) {
            c = text[pos];
            if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
                break;
            s.atom.push_back(c);
            advance();
        }
        return s;
    }
};

}  // namespace

std::vector<Sexp> parse_sexps(const std::string& text) {
    Reader r{text};
    std::vector<Sexp> out;
    for (;;) {
        r.skip_space();
        if (r.at_end()) break;
        out.push_back(r.read());
    }
    return out;
}

Sexp parse_one_sexp(const std::string& text) {
    auto all = parse_sexps(text);
    if (all.empty()) fail("SyntaxError", "line 1, column 1: empty input");
    if (all.size() > 1) syntax_error(all[1], "trailing input after expression");
    return all[0];
}

std::string print_sexp(const Sexp& s) {
    if (s.is_atom) return s.atom;
    std::string out = "(";
    for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ' ';
        out += print_sexp(s.items[i]);
    }
    return out + ")";
}

}  // namespace witness
