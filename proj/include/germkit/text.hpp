#pragma once

#include <map>
#include <string>
#include <vector>

#include "germkit/errors.hpp"

namespace germkit::text {

// A piece of input with its offset into the original text, for error positions.
struct Span {
  std::string s;
  std::size_t offset = 0;
};

struct Header {
  std::string name;
  std::map<std::string, std::string> params;
  Span body; // text between the outer braces
};

std::string trim(const std::string &s);
Span trim(const Span &s);
// split on a single-character separator at brace/paren depth 0
std::vector<Span> split_top(const Span &s, char sep);

[[noreturn]] void fail(const std::string &src, std::size_t offset, const std::string &msg);

// NAME[key=value, key=value; key=value]{ body }   (brackets optional)
Header parse_header(const std::string &src);
int param_int(const Header &h, const std::string &key, int fallback);

} // namespace germkit::text
