#include "wrht/rational.hpp"

namespace wrht {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::string num = text, den = "1";
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (num.empty() || den.empty()) return std::nullopt;
  }
  auto digits_ok = [](const std::string& s, bool sign_ok) {
    std::size_t i = 0;
    if (sign_ok && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, false)) return std::nullopt;
  Integer n(num), d(den);
  if (d == 0) return std::nullopt;
  return rat(n, d);
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

}  // namespace wrht
