#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "lhott/error.hpp"

namespace lhott {

/// A finite group given by its full multiplication table.
/// `mul(a, b)` is the product a*b; element 0 need not be the identity.
class FiniteGroup {
 public:
  using Element = std::size_t;

  /// Validates closure, associativity, identity and inverses.
  static FiniteGroup from_table(std::vector<std::vector<Element>> table) {
    const std::size_t n = table.size();
    require(n > 0, ErrorKind::NotAGroup, "empty multiplication table");
    for (const auto& row : table) {
      require(row.size() == n, ErrorKind::NotAGroup, "table is not square");
      for (Element x : row) require(x < n, ErrorKind::NotAGroup, "entry out of range");
    }
    std::size_t e = n;
    for (Element c = 0; c < n && e == n; ++c) {
      bool unit = true;
      for (Element x = 0; x < n && unit; ++x) unit = table[c][x] == x && table[x][c] == x;
      if (unit) e = c;
    }
    require(e < n, ErrorKind::NotAGroup, "no two-sided identity");
    std::vector<Element> inv(n, n);
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b)
        if (table[a][b] == e && table[b][a] == e) inv[a] = b;
      require(inv[a] < n, ErrorKind::NotAGroup, "element " + std::to_string(a) + " has no inverse");
    }
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c)
          require(table[table[a][b]][c] == table[a][table[b][c]], ErrorKind::NotAGroup,
                  "associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(c) + ")");
    FiniteGroup g;
    g.table_ = std::move(table);
    g.identity_ = e;
    g.inverse_ = std::move(inv);
    return g;
  }

  static FiniteGroup trivial() { return cyclic(1); }

  static FiniteGroup cyclic(std::size_t n) {
    require(n > 0, ErrorKind::NotAGroup, "cyclic group of order 0");
    std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return from_table(std::move(t));
  }

  /// Permutations of {0..n-1} in lexicographic order; (p*q)(i) = p(q(i)).
  static FiniteGroup symmetric(std::size_t n) {
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const std::size_t m = perms.size();
    std::vector<std::vector<Element>> t(m, std::vector<Element>(m));
    for (Element a = 0; a < m; ++a)
      for (Element b = 0; b < m; ++b) {
        std::vector<std::size_t> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
        t[a][b] = static_cast<Element>(std::lower_bound(perms.begin(), perms.end(), c) - perms.begin());
      }
    return from_table(std::move(t));
  }

  std::size_t order() const noexcept { return table_.size(); }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const { return table_[a][b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  Element commutator(Element a, Element b) const {
    return mul(mul(a, b), mul(inverse(a), inverse(b)));
  }
  Element conjugate(Element h, Element a) const { return mul(mul(h, a), inverse(h)); }
  const std::vector<std::vector<Element>>& table() const noexcept { return table_; }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  FiniteGroup() = default;

  std::vector<std::vector<Element>> table_;
  Element identity_ = 0;
  std::vector<Element> inverse_;
};

}  // namespace lhott
