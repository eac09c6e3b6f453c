#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lhott/error.hpp"
#include "lhott/rational.hpp"

namespace lhott::dsl {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// An Error with a source position attached.
class SourceError : public Error {
 public:
  SourceError(ErrorKind kind, Position pos, const std::string& message)
      : Error(kind, message), pos_(pos) {}
  Position position() const noexcept { return pos_; }

 private:
  Position pos_;
};

using RowLit = std::vector<Rational>;
using MatrixLit = std::vector<RowLit>;

/// `<id>: [[..]]` entries of trans and kernel blocks.
struct Entry {
  Position pos;
  std::size_t id = 0;
  MatrixLit value;
  bool operator==(const Entry& o) const { return id == o.id && value == o.value; }
};

struct GroupDecl {
  enum class Kind { Cyclic, Symmetric, Table };
  Position pos;
  std::string name;
  Kind kind = Kind::Cyclic;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> rows;
  bool operator==(const GroupDecl& o) const { return name == o.name && kind == o.kind && n == o.n && rows == o.rows; }
};

struct GroupoidDecl {
  enum class Kind { Deloop, Discrete, Action, Product, Union };
  Position pos;
  std::string name;
  Kind kind = Kind::Discrete;
  std::string first;   // group, or left factor
  std::string second;  // right factor
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> rows;  // action: image row per group element
  bool operator==(const GroupoidDecl& o) const {
    return name == o.name && kind == o.kind && first == o.first && second == o.second && n == o.n && rows == o.rows;
  }
};

struct FunctorDecl {
  enum class Kind { Terminal, Identity, First, Second, Explicit };
  Position pos;
  std::string name, domain, codomain;
  Kind kind = Kind::Terminal;
  std::vector<std::size_t> objects, morphisms;
  bool operator==(const FunctorDecl& o) const {
    return name == o.name && domain == o.domain && codomain == o.codomain && kind == o.kind && objects == o.objects &&
           morphisms == o.morphisms;
  }
};

struct SystemDecl {
  Position pos;
  std::string name, base;
  bool unit = true;
  std::vector<std::size_t> dims;
  std::vector<Entry> transports;
  bool operator==(const SystemDecl& o) const {
    return name == o.name && base == o.base && unit == o.unit && dims == o.dims && transports == o.transports;
  }
};

struct CorrDecl {
  Position pos;
  std::string name, left_base, apex, right_base, left, right;
  bool operator==(const CorrDecl& o) const {
    return name == o.name && left_base == o.left_base && apex == o.apex && right_base == o.right_base &&
           left == o.left && right == o.right;
  }
};

struct KernelDecl {
  Position pos;
  std::string name, corr, target, source;  // xi : right^* source -> left^* target
  bool unit = true;
  std::vector<Entry> components;
  bool operator==(const KernelDecl& o) const {
    return name == o.name && corr == o.corr && target == o.target && source == o.source && unit == o.unit &&
           components == o.components;
  }
};

struct Command {
  enum class Kind { Card, Show, Sum, Prod, Transform, Axioms, Anomaly, Dw, Matrix };
  Position pos;
  Kind kind = Kind::Card;
  std::vector<std::string> args;
  std::optional<RowLit> vector;  // transform
  std::size_t genus = 0;         // dw
  std::string path;              // matrix
  bool operator==(const Command& o) const {
    return kind == o.kind && args == o.args && vector == o.vector && genus == o.genus && path == o.path;
  }
};

using Statement = std::variant<GroupDecl, GroupoidDecl, FunctorDecl, SystemDecl, CorrDecl, KernelDecl, Command>;

struct Program {
  std::vector<Statement> statements;
  bool operator==(const Program& o) const { return statements == o.statements; }
};

inline Position position_of(const Statement& s) {
  return std::visit([](const auto& d) { return d.pos; }, s);
}

inline std::string_view command_keyword(Command::Kind k) {
  switch (k) {
    case Command::Kind::Card: return "card";
    case Command::Kind::Show: return "show";
    case Command::Kind::Sum: return "sum";
    case Command::Kind::Prod: return "prod";
    case Command::Kind::Transform: return "transform";
    case Command::Kind::Axioms: return "axioms";
    case Command::Kind::Anomaly: return "anomaly";
    case Command::Kind::Dw: return "dw";
    case Command::Kind::Matrix: return "matrix";
  }
  return "?";
}

}  // namespace lhott::dsl
