#pragma once

#include <sstream>
#include <string>

#include "lhott/dsl/ast.hpp"

namespace lhott::dsl {

namespace detail {

template <class T, class Fn>
std::string join(const std::vector<T>& xs, Fn&& fn) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fn(xs[i]);
  return s + "]";
}

inline std::string print_naturals(const std::vector<std::size_t>& xs) {
  return join(xs, [](std::size_t x) { return std::to_string(x); });
}

inline std::string print_row(const RowLit& r) {
  return join(r, [](const Rational& q) { return lhott::to_string(q); });
}

inline std::string print_matrix(const MatrixLit& m) { return join(m, print_row); }

inline std::string print_entries(const std::vector<Entry>& es) {
  std::string s = "{";
  for (const auto& e : es) s += " " + std::to_string(e.id) + ": " + print_matrix(e.value);
  return s + " }";
}

inline std::string print_rows(const std::vector<std::vector<std::size_t>>& rows) {
  std::string s = "{";
  for (const auto& r : rows) s += " " + print_naturals(r);
  return s + " }";
}

}  // namespace detail

inline std::string print(const Statement& st) {
  struct V {
    std::string operator()(const GroupDecl& d) const {
      std::string s = "group " + d.name + " = ";
      switch (d.kind) {
        case GroupDecl::Kind::Cyclic: return s + "cyclic " + std::to_string(d.n);
        case GroupDecl::Kind::Symmetric: return s + "symmetric " + std::to_string(d.n);
        case GroupDecl::Kind::Table: return s + "table " + detail::print_rows(d.rows);
      }
      return s;
    }
    std::string operator()(const GroupoidDecl& d) const {
      std::string s = "groupoid " + d.name + " = ";
      switch (d.kind) {
        case GroupoidDecl::Kind::Deloop: return s + "B " + d.first;
        case GroupoidDecl::Kind::Discrete: return s + "discrete " + std::to_string(d.n);
        case GroupoidDecl::Kind::Action:
          return s + "action " + d.first + " on " + std::to_string(d.n) + " " + detail::print_rows(d.rows);
        case GroupoidDecl::Kind::Product: return s + "product " + d.first + " " + d.second;
        case GroupoidDecl::Kind::Union: return s + "union " + d.first + " " + d.second;
      }
      return s;
    }
    std::string operator()(const FunctorDecl& d) const {
      std::string s = "functor " + d.name + " : " + d.domain + " -> " + d.codomain + " = ";
      switch (d.kind) {
        case FunctorDecl::Kind::Terminal: return s + "terminal";
        case FunctorDecl::Kind::Identity: return s + "id";
        case FunctorDecl::Kind::First: return s + "proj1";
        case FunctorDecl::Kind::Second: return s + "proj2";
        case FunctorDecl::Kind::Explicit:
          return s + "{ objects: " + detail::print_naturals(d.objects) +
                 "; morphisms: " + detail::print_naturals(d.morphisms) + " }";
      }
      return s;
    }
    std::string operator()(const SystemDecl& d) const {
      std::string s = "system " + d.name + " on " + d.base + " = ";
      if (d.unit) return s + "unit";
      s += "dims " + detail::print_naturals(d.dims);
      if (!d.transports.empty()) s += " trans " + detail::print_entries(d.transports);
      return s;
    }
    std::string operator()(const CorrDecl& d) const {
      return "corr " + d.name + " = " + d.left_base + " <- " + d.apex + " -> " + d.right_base + " via " + d.left +
             ", " + d.right;
    }
    std::string operator()(const KernelDecl& d) const {
      std::string s = "kernel " + d.name + " on " + d.corr + " : " + d.target + " <= " + d.source + " = ";
      return s + (d.unit ? "unit" : detail::print_entries(d.components));
    }
    std::string operator()(const Command& c) const {
      std::string s = "print " + std::string(command_keyword(c.kind));
      for (const auto& a : c.args) s += " " + a;
      if (c.vector) s += " " + detail::print_row(*c.vector);
      if (c.kind == Command::Kind::Dw) s += " genus " + std::to_string(c.genus);
      if (c.kind == Command::Kind::Matrix) s += " \"" + c.path + "\"";
      return s;
    }
  };
  return std::visit(V{}, st);
}

/// Canonical text, one statement per line.
inline std::string print(const Program& p) {
  std::string s;
  for (const auto& st : p.statements) s += print(st) + "\n";
  return s;
}

}  // namespace lhott::dsl
