#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace lhott {

/// Exact arbitrary-precision rationals; always kept canonical.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses `p`, `-p` or `p/q` (q nonzero). Returns nullopt on malformed text.
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto is_integer = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                         : text.substr(slash + 1);
  if (!is_integer(num) || !is_integer(den) || den[0] == '-' || den[0] == '+')
    return std::nullopt;
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num));
  mpz_class d{std::string(den)};
  if (d == 0) return std::nullopt;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace lhott
