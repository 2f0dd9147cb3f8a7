#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "rlab/field.hpp"

namespace rlab {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<mpz_class> parse_int_list(const std::string& v, std::size_t line_no) {
    std::string s = trim(v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw parse_error("expected [a, b, ...] on line " + std::to_string(line_no), 1);
    s = s.substr(1, s.size() - 2);
    std::vector<mpz_class> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw parse_error("empty list entry on line " + std::to_string(line_no), 1);
        out.emplace_back(item);
    }
    if (out.empty())
        throw parse_error("empty coefficient list on line " + std::to_string(line_no), 1);
    return out;
}

}  // namespace detail

/// Line-oriented `key = value` field description.  Polynomials are
/// little-endian integer lists; keys: p, n, unram_poly, eisenstein, precision.
inline FieldDesc parse_field_desc(std::istream& in) {
    FieldDesc d;
    d.unram_poly = {0, 1};  // default: K_0 = Q_p
    bool have_p = false, have_eis = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected key = value on line " + std::to_string(line_no), 1);
        std::string key = detail::trim(s.substr(0, eq));
        std::string val = detail::trim(s.substr(eq + 1));
        if (key == "p") { d.p = std::stol(val); have_p = true; }
        else if (key == "n") d.n = std::stol(val);
        else if (key == "precision") d.work_prec = std::stol(val);
        else if (key == "unram_poly") d.unram_poly = detail::parse_int_list(val, line_no);
        else if (key == "eisenstein") { d.eisenstein = detail::parse_int_list(val, line_no); have_eis = true; }
        else throw parse_error("unknown key '" + key + "' on line " + std::to_string(line_no), 1);
    }
    if (!have_p) throw parse_error("missing key: p", 1);
    if (!have_eis) throw parse_error("missing key: eisenstein", 1);
    return d;
}

inline FieldDesc load_field_desc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open field file: " + path);
    return parse_field_desc(in);
}

}  // namespace rlab
