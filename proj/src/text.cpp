#include "germkit/text.hpp"

#include <cctype>

namespace germkit::text {

std::string trim(const std::string &s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a]))
    ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1]))
    --b;
  return s.substr(a, b - a);
}

Span trim(const Span &sp) {
  std::size_t a = 0, b = sp.s.size();
  while (a < b && std::isspace((unsigned char)sp.s[a]))
    ++a;
  while (b > a && std::isspace((unsigned char)sp.s[b - 1]))
    --b;
  return {sp.s.substr(a, b - a), sp.offset + a};
}

std::vector<Span> split_top(const Span &sp, char sep) {
  std::vector<Span> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < sp.s.size(); ++i) {
    char c = sp.s[i];
    if (c == '{' || c == '(' || c == '[')
      ++depth;
    else if (c == '}' || c == ')' || c == ']')
      --depth;
    else if (c == sep && depth == 0) {
      out.push_back(trim(Span{sp.s.substr(start, i - start), sp.offset + start}));
      start = i + 1;
    }
  }
  out.push_back(trim(Span{sp.s.substr(start), sp.offset + start}));
  return out;
}

void fail(const std::string &src, std::size_t offset, const std::string &msg) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw ParseError(msg, line, col);
}

Header parse_header(const std::string &src) {
  Header h;
  std::size_t i = 0;
  while (i < src.size() && std::isspace((unsigned char)src[i]))
    ++i;
  std::size_t name_start = i;
  while (i < src.size() && (std::isalnum((unsigned char)src[i]) || src[i] == '_'))
    ++i;
  h.name = src.substr(name_start, i - name_start);
  if (h.name.empty())
    fail(src, name_start, "expected element type name");
  if (i < src.size() && src[i] == '[') {
    std::size_t close = src.find(']', i);
    if (close == std::string::npos)
      fail(src, i, "unterminated '['");
    std::string inner = src.substr(i + 1, close - i - 1);
    for (char &c : inner)
      if (c == ';')
        c = ',';
    Span isp{inner, i + 1};
    for (const auto &kv : split_top(isp, ',')) {
      if (kv.s.empty())
        continue;
      auto eq = kv.s.find('=');
      if (eq == std::string::npos)
        fail(src, kv.offset, "expected key=value");
      h.params[trim(kv.s.substr(0, eq))] = trim(kv.s.substr(eq + 1));
    }
    i = close + 1;
  }
  while (i < src.size() && std::isspace((unsigned char)src[i]))
    ++i;
  if (i >= src.size() || src[i] != '{')
    fail(src, i, "expected '{'");
  int depth = 0;
  std::size_t j = i;
  for (; j < src.size(); ++j) {
    if (src[j] == '{')
      ++depth;
    else if (src[j] == '}' && --depth == 0)
      break;
  }
  if (j >= src.size())
    fail(src, i, "unterminated '{'");
  for (std::size_t k = j + 1; k < src.size(); ++k)
    if (!std::isspace((unsigned char)src[k]))
      fail(src, k, "trailing characters after element");
  h.body = Span{src.substr(i + 1, j - i - 1), i + 1};
  return h;
}

int param_int(const Header &h, const std::string &key, int fallback) {
  auto it = h.params.find(key);
  if (it == h.params.end())
    return fallback;
  try {
    return std::stoi(it->second);
  } catch (...) {
    throw ParseError("bad integer for " + key, 1, 1);
  }
}

} // namespace germkit::text
