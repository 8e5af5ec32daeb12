#pragma once
#include <string>
#include <vector>

namespace witness {

struct Sexp {
    bool is_atom = true;
    std::string atom;
    std::vector<Sexp> items;
    int line = 1;
    int column = 1;

    bool is_list() const { return !is_atom; }
    bool head_is(const std::string& name) const {
        return is_list() && !items.empty() && items[0].is_atom && items[0].atom == name;
    }
    std::string where() const;
};

// Parses every top-level expression; ';' starts a comment running to end of line.
std::vector<Sexp> parse_sexps(const std::string& text);
Sexp parse_one_sexp(const std::string& text);

std::string print_sexp(const Sexp& s);

[[noreturn]] void syntax_error(const Sexp& at, const std::string& message);

}  // namespace witness
