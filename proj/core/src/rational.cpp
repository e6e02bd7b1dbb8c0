#include "lgs/rational.hpp"

#include <cctype>

namespace lgs {

std::optional<Rat> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '-' || text[pos] == '+') {
    neg = text[pos] == '-';
    ++pos;
  }
  std::string intpart, fracpart, denpart;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) intpart += text[pos++];
  if (intpart.empty()) return std::nullopt;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) fracpart += text[pos++];
    if (fracpart.empty()) return std::nullopt;
  } else if (pos < text.size() && text[pos] == '/') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) denpart += text[pos++];
    if (denpart.empty()) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;

  Int num(intpart);
  Int den(1);
  if (!fracpart.empty()) {
    Int scale(1);
    for (std::size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
    num = num * scale + Int(fracpart);
    den = scale;
  } else if (!denpart.empty()) {
    den = Int(denpart);
    if (den == 0) return std::nullopt;
  }
  Rat r(num, den);
  r.canonicalize();
  if (neg) r = -r;
  return r;
}

std::string rat_to_string(const Rat& r) {
  if (is_integer(r)) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace lgs
