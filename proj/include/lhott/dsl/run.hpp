#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lhott/dsl/check.hpp"
#include "lhott/dsl/printer.hpp"
#include "lhott/serialize.hpp"

namespace lhott::dsl {

struct SystemSummary {
  std::vector<std::size_t> dims;
  std::vector<std::pair<MorphismId, QMatrix>> transports;  // non-identity morphisms between nonzero fibers
};

using CheckList = std::vector<std::pair<std::string, bool>>;

using Value = std::variant<Rational, QMatrix, std::vector<Rational>, SystemSummary, CheckList, std::string>;

struct Output {
  Position pos;
  std::string command;
  Value value;
};

struct RunOptions {
  std::uint64_t size_limit = default_size_limit;
  std::filesystem::path base_dir = ".";
};

namespace detail {

inline SystemSummary summarize(const LocalSystem& a) {
  SystemSummary s{a.dims(), {}};
  const auto& x = a.base();
  for (MorphismId m = 0; m < x.morphism_count(); ++m)
    if (!x.is_identity(m) && a.dim(x.source(m)) > 0 && a.dim(x.target(m)) > 0) s.transports.push_back({m, a.transport(m)});
  return s;
}

/// Rows of K as `p/q` tokens, a line `---`, then the entries of v.
inline std::pair<QMatrix, std::vector<Rational>> read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidMap, "cannot open matrix file " + path.string());
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> v;
  bool after = false, seen_sep = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream s(line);
    std::string tok;
    std::vector<Rational> r;
    while (s >> tok) {
      if (tok == "---") {
        require(!seen_sep, ErrorKind::ShapeMismatch, "matrix file has two separators");
        seen_sep = true;
        continue;
      }
      auto q = parse_rational(tok);
      require(q.has_value(), ErrorKind::ShapeMismatch,
              path.filename().string() + ":" + std::to_string(lineno) + ": malformed rational `" + tok + "`");
      r.push_back(*q);
    }
    if (seen_sep && !after) {
      after = true;
      continue;
    }
    if (r.empty()) continue;
    if (after)
      v.insert(v.end(), r.begin(), r.end());
    else
      rows.push_back(std::move(r));
  }
  require(seen_sep, ErrorKind::ShapeMismatch, "matrix file lacks the `---` separator");
  const std::size_t cols = rows.empty() ? v.size() : rows[0].size();
  QMatrix k(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, ErrorKind::ShapeMismatch, "matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) k(i, j) = rows[i][j];
  }
  return {k, v};
}

inline CheckList axiom_suite(const GroupoidFunctor& f, const LocalSystem& a, const LocalSystem& b) {
  CheckList out;
  auto attempt = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalAxiomFailure) throw;
    }
    out.push_back({name, ok});
  };
  auto tri = triangle_identities(f, a, b);
  out.push_back({"triangle sum counit", tri.sum_left});
  out.push_back({"triangle sum unit", tri.sum_right});
  out.push_back({"triangle product counit", tri.product_left});
  out.push_back({"triangle product unit", tri.product_right});
  attempt("projection formula", [&] { return is_equivalence(frobenius_iso(f, a, b)).has_value(); });
  attempt("de morgan duality", [&] { return is_equivalence(de_morgan_iso(f, a)).has_value(); });
  attempt("beck-chevalley", [&] {
    auto c = iso_comma(f, f);
    return beck_chevalley(Square::from_iso_comma(c, f, f), a).is_equivalence;
  });
  return out;
}

}  // namespace detail

class Runner {
 public:
  Runner(const CheckedProgram& prog, RunOptions opts) : prog_(prog), opts_(std::move(opts)) {}

  /// Engine failures are re-raised with the command's position.
  Output execute(const Command& c) const {
    try {
      return evaluate(c);
    } catch (const SourceError&) {
      throw;
    } catch (const Error& e) {
      std::string msg = e.what();
      auto kind = std::string(to_string(e.kind())) + ": ";
      if (msg.rfind(kind, 0) == 0) msg = msg.substr(kind.size());
      throw SourceError(e.kind(), c.pos, msg);
    }
  }

  std::vector<Output> execute_all() const {
    std::vector<Output> out;
    for (const auto& c : prog_.commands) out.push_back(execute(c));
    return out;
  }

 private:
  const CheckedProgram& prog_;
  RunOptions opts_;

  Output evaluate(const Command& c) const {
    const auto& env = prog_.env;
    Output o{c.pos, print(Statement{c}).substr(6), Rational(0)};
    switch (c.kind) {
      case Command::Kind::Card: o.value = groupoid_cardinality(env.groupoids.at(c.args[0])); break;
      case Command::Kind::Show:
        o.value = env.groupoids.count(c.args[0]) ? to_text(env.groupoids.at(c.args[0]))
                                                 : to_text(env.functors.at(c.args[0]));
        break;
      case Command::Kind::Sum:
        o.value = detail::summarize(dependent_sum(env.functors.at(c.args[0]), env.systems.at(c.args[1])).system());
        break;
      case Command::Kind::Prod:
        o.value =
            detail::summarize(dependent_product(env.functors.at(c.args[0]), env.systems.at(c.args[1])).system());
        break;
      case Command::Kind::Transform: {
        const auto& k = env.kernels.at(c.args[0]);
        QMatrix t = secondary_transform(k, canonical_fundamental_class(k.corr.right));
        if (!c.vector) {
          o.value = t;
          break;
        }
        require(c.vector->size() == t.cols(), ErrorKind::ShapeMismatch,
                "vector of length " + std::to_string(c.vector->size()) + " for a transform with " +
                    std::to_string(t.cols()) + " inputs");
        QMatrix r = t * QMatrix::column(std::span<const Rational>(*c.vector));
        std::vector<Rational> v;
        for (std::size_t i = 0; i < r.rows(); ++i) v.push_back(r(i, 0));
        o.value = v;
        break;
      }
      case Command::Kind::Axioms: {
        const auto& f = env.functors.at(c.args[0]);
        auto b = c.args.size() > 2 ? env.systems.at(c.args[2]) : unit_system(f.codomain());
        o.value = detail::axiom_suite(f, env.systems.at(c.args[1]), b);
        break;
      }
      case Command::Kind::Anomaly:
        o.value = anomaly_defect(env.kernels.at(c.args[0]), env.kernels.at(c.args[1])).difference();
        break;
      case Command::Kind::Dw:
        o.value = dw_partition(env.groups.at(c.args[0]), {c.genus}, opts_.size_limit);
        break;
      case Command::Kind::Matrix: {
        auto [k, v] = detail::read_matrix_file(opts_.base_dir / c.path);
        auto r = matrix_model(k, v);
        require(r.equal, ErrorKind::InternalAxiomFailure, "transform disagrees with the matrix product");
        o.value = r.transform;
        break;
      }
    }
    return o;
  }
};

// Rendering.

inline std::string render_row(const std::vector<Rational>& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? ", " : "") + to_string(r[i]);
  return s + "]";
}

inline std::string render_matrix(const QMatrix& m) {
  if (m.rows() == 0) return "[]\n";
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Rational> r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    s += render_row(r) + "\n";
  }
  return s;
}

inline std::string render_plain(const Value& v) {
  struct V {
    std::string operator()(const Rational& q) const { return to_string(q) + "\n"; }
    std::string operator()(const QMatrix& m) const { return render_matrix(m); }
    std::string operator()(const std::vector<Rational>& r) const { return render_row(r) + "\n"; }
    std::string operator()(const SystemSummary& s) const {
      std::string out = "dims [";
      for (std::size_t i = 0; i < s.dims.size(); ++i) out += (i ? ", " : "") + std::to_string(s.dims[i]);
      out += "]\n";
      for (const auto& [m, t] : s.transports) {
        out += std::to_string(m) + ": [";
        for (std::size_t i = 0; i < t.rows(); ++i) {
          std::vector<Rational> r;
          for (std::size_t j = 0; j < t.cols(); ++j) r.push_back(t(i, j));
          out += (i ? ", " : "") + render_row(r);
        }
        out += "]\n";
      }
      return out;
    }
    std::string operator()(const CheckList& cs) const {
      std::string out;
      for (const auto& [name, ok] : cs) out += name + ": " + (ok ? "pass" : "FAIL") + "\n";
      return out;
    }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, v);
}

inline nlohmann::json to_json(const QMatrix& m) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_string(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline nlohmann::json to_json(const Value& v) {
  struct V {
    nlohmann::json operator()(const Rational& q) const { return {{"type", "rational"}, {"value", to_string(q)}}; }
    nlohmann::json operator()(const QMatrix& m) const { return {{"type", "matrix"}, {"value", to_json(m)}}; }
    nlohmann::json operator()(const std::vector<Rational>& r) const {
      auto a = nlohmann::json::array();
      for (const auto& q : r) a.push_back(to_string(q));
      return {{"type", "vector"}, {"value", a}};
    }
    nlohmann::json operator()(const SystemSummary& s) const {
      auto t = nlohmann::json::array();
      for (const auto& [m, mat] : s.transports) t.push_back({{"morphism", m}, {"matrix", to_json(mat)}});
      return {{"type", "system"}, {"value", {{"dims", s.dims}, {"transports", t}}}};
    }
    nlohmann::json operator()(const CheckList& cs) const {
      auto a = nlohmann::json::array();
      for (const auto& [name, ok] : cs) a.push_back({{"check", name}, {"pass", ok}});
      return {{"type", "checks"}, {"value", a}};
    }
    nlohmann::json operator()(const std::string& s) const { return {{"type", "text"}, {"value", s}}; }
  };
  return std::visit(V{}, v);
}

inline bool all_pass(const Value& v) {
  if (auto cs = std::get_if<CheckList>(&v))
    for (const auto& [name, ok] : *cs)
      if (!ok) return false;
  return true;
}

}  // namespace lhott::dsl
