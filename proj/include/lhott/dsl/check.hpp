#pragma once

#include <map>
#include <optional>
#include <string>

#include "lhott/dsl/ast.hpp"
#include "lhott/models.hpp"

namespace lhott::dsl {

/// Declarations resolved to validated engine values.
struct Environment {
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, FiniteGroupoid> groupoids;
  std::map<std::string, std::pair<std::string, std::string>> factors;  // product groupoids
  std::map<std::string, GroupoidFunctor> functors;
  std::map<std::string, std::pair<std::string, std::string>> functor_ends;
  std::map<std::string, LocalSystem> systems;
  std::map<std::string, std::string> system_base;
  std::map<std::string, Correspondence> corrs;
  std::map<std::string, CorrDecl> corr_decls;
  std::map<std::string, PrequantumKernel> kernels;
  std::map<std::string, KernelDecl> kernel_decls;
  std::map<std::string, std::string> kinds;  // every bound name -> "group", "groupoid", ...
};

struct CheckedProgram {
  Environment env;
  std::vector<Command> commands;
};

namespace detail {

[[noreturn]] inline void type_error(Position pos, const std::string& msg) {
  throw SourceError(ErrorKind::TypeError, pos, msg);
}

inline QMatrix to_matrix(const MatrixLit& lit, std::size_t rows, std::size_t cols, Position pos,
                         const std::string& what) {
  bool ok = lit.size() == rows;
  for (const auto& r : lit) ok = ok && r.size() == cols;
  if (!ok) {
    std::string shape = std::to_string(lit.size()) + "x" + (lit.empty() ? "?" : std::to_string(lit[0].size()));
    type_error(pos, what + " has shape " + shape + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = lit[i][j];
  return m;
}

class Checker {
 public:
  CheckedProgram run(const Program& p) {
    for (const auto& st : p.statements) std::visit([this](const auto& d) { (*this)(d); }, st);
    return std::move(out_);
  }

  void operator()(const GroupDecl& d) {
    bind(d.name, "group", d.pos);
    guarded(d.pos, [&] {
      switch (d.kind) {
        case GroupDecl::Kind::Cyclic: env().groups.emplace(d.name, FiniteGroup::cyclic(d.n)); break;
        case GroupDecl::Kind::Symmetric:
          if (d.n > 6) type_error(d.pos, "symmetric groups above degree 6 are not supported");
          env().groups.emplace(d.name, FiniteGroup::symmetric(d.n));
          break;
        case GroupDecl::Kind::Table: env().groups.emplace(d.name, FiniteGroup::from_table(d.rows)); break;
      }
    });
  }

  void operator()(const GroupoidDecl& d) {
    bind(d.name, "groupoid", d.pos);
    guarded(d.pos, [&] {
      FiniteGroupoid x;
      switch (d.kind) {
        case GroupoidDecl::Kind::Deloop: x = delooping(group(d.first, d.pos)); break;
        case GroupoidDecl::Kind::Discrete: x = discrete(d.n); break;
        case GroupoidDecl::Kind::Action: x = action_groupoid(d.n, group(d.first, d.pos), d.rows); break;
        case GroupoidDecl::Kind::Product:
          x = product(groupoid(d.first, d.pos), groupoid(d.second, d.pos)).groupoid;
          env().factors[d.name] = {d.first, d.second};
          break;
        case GroupoidDecl::Kind::Union:
          x = disjoint_union(groupoid(d.first, d.pos), groupoid(d.second, d.pos)).groupoid;
          break;
      }
      env().groupoids.emplace(d.name, x);
    });
  }

  void operator()(const FunctorDecl& d) {
    bind(d.name, "functor", d.pos);
    const auto& dom = groupoid(d.domain, d.pos);
    const auto& cod = groupoid(d.codomain, d.pos);
    guarded(d.pos, [&] {
      GroupoidFunctor f;
      switch (d.kind) {
        case FunctorDecl::Kind::Terminal:
          if (cod.object_count() != 1 || cod.morphism_count() != 1)
            type_error(d.pos, "`terminal` needs a one-object trivial codomain, not " + d.codomain);
          f = GroupoidFunctor(dom, cod, std::vector<ObjectId>(dom.object_count(), 0),
                              std::vector<MorphismId>(dom.morphism_count(), 0));
          break;
        case FunctorDecl::Kind::Identity:
          if (!(dom == cod)) type_error(d.pos, "`id` needs equal domain and codomain");
          f = identity_functor(dom);
          break;
        case FunctorDecl::Kind::First:
        case FunctorDecl::Kind::Second: {
          auto it = env().factors.find(d.domain);
          if (it == env().factors.end()) type_error(d.pos, d.domain + " is not declared as a product");
          bool first = d.kind == FunctorDecl::Kind::First;
          const auto& factor = first ? it->second.first : it->second.second;
          if (!(groupoid(factor, d.pos) == cod))
            type_error(d.pos, "projection of " + d.domain + " lands in " + factor + ", not " + d.codomain);
          auto pr = product(groupoid(it->second.first, d.pos), groupoid(it->second.second, d.pos));
          f = first ? pr.first : pr.second;
          break;
        }
        case FunctorDecl::Kind::Explicit:
          f = GroupoidFunctor(dom, cod, d.objects, d.morphisms);
          f.validate();
          break;
      }
      env().functors.emplace(d.name, f);
      env().functor_ends[d.name] = {d.domain, d.codomain};
    });
  }

  void operator()(const SystemDecl& d) {
    bind(d.name, "system", d.pos);
    const auto& x = groupoid(d.base, d.pos);
    env().system_base[d.name] = d.base;
    if (d.unit) {
      env().systems.emplace(d.name, unit_system(x));
      return;
    }
    if (d.dims.size() != x.object_count())
      type_error(d.pos, "expected " + std::to_string(x.object_count()) + " dimensions for " + d.base + ", got " +
                            std::to_string(d.dims.size()));
    std::vector<std::optional<QMatrix>> given(x.morphism_count());
    std::vector<Position> where(x.morphism_count(), d.pos);
    for (const auto& e : d.transports) {
      if (e.id >= x.morphism_count()) type_error(e.pos, "no morphism " + std::to_string(e.id) + " in " + d.base);
      if (given[e.id]) type_error(e.pos, "transport of morphism " + std::to_string(e.id) + " given twice");
      given[e.id] = to_matrix(e.value, d.dims[x.target(e.id)], d.dims[x.source(e.id)], e.pos,
                              "transport of morphism " + std::to_string(e.id));
      where[e.id] = e.pos;
    }
    std::vector<QMatrix> ts(x.morphism_count());
    for (MorphismId m = 0; m < ts.size(); ++m) {
      if (given[m]) {
        ts[m] = *given[m];
      } else {
        if (d.dims[x.source(m)] != d.dims[x.target(m)])
          type_error(d.pos, "missing transport for morphism " + std::to_string(m));
        ts[m] = QMatrix::identity(d.dims[x.source(m)]);
      }
    }
    for (ObjectId o = 0; o < x.object_count(); ++o)
      if (!ts[x.identity(o)].is_identity())
        type_error(where[x.identity(o)],
                   "transport of identity morphism " + std::to_string(x.identity(o)) + " is not the identity");
    for (MorphismId f = 0; f < ts.size(); ++f)
      for (MorphismId g : x.out(x.target(f))) {
        MorphismId gf = x.compose(g, f);
        if (ts[gf] != ts[g] * ts[f]) {
          MorphismId blame = given[gf] ? gf : given[g] ? g : f;
          type_error(where[blame], "transport is not multiplicative at morphism " + std::to_string(blame) + " (" +
                                       std::to_string(g) + " o " + std::to_string(f) + " = " + std::to_string(gf) +
                                       ")");
        }
      }
    env().systems.emplace(d.name, LocalSystem(x, d.dims, std::move(ts)));
  }

  void operator()(const CorrDecl& d) {
    bind(d.name, "corr", d.pos);
    auto leg = [&](const std::string& f, const std::string& from, const std::string& to) {
      const auto& g = functor(f, d.pos);
      const auto& ends = env().functor_ends.at(f);
      if (ends.first != from || ends.second != to)
        type_error(d.pos, "leg " + f + " goes " + ends.first + " -> " + ends.second + ", expected " + from +
                              " -> " + to);
      return g;
    };
    groupoid(d.left_base, d.pos), groupoid(d.apex, d.pos), groupoid(d.right_base, d.pos);
    Correspondence c{leg(d.left, d.apex, d.left_base), leg(d.right, d.apex, d.right_base)};
    env().corrs.emplace(d.name, c);
    env().corr_decls.emplace(d.name, d);
  }

  void operator()(const KernelDecl& d) {
    bind(d.name, "kernel", d.pos);
    const auto& c = corr(d.corr, d.pos);
    const auto& cd = env().corr_decls.at(d.corr);
    const auto& a1 = system(d.target, d.pos);
    const auto& a2 = system(d.source, d.pos);
    if (env().system_base.at(d.target) != cd.left_base)
      type_error(d.pos, d.target + " lives on " + env().system_base.at(d.target) + ", expected " + cd.left_base);
    if (env().system_base.at(d.source) != cd.right_base)
      type_error(d.pos, d.source + " lives on " + env().system_base.at(d.source) + ", expected " + cd.right_base);
    auto src = pullback(c.right, a2);
    auto dst = pullback(c.left, a1);
    const auto& z = c.apex();
    std::vector<QMatrix> comps(z.object_count());
    if (d.unit) {
      if (!(src == dst)) type_error(d.pos, "`unit` kernel needs the pulled-back systems to agree");
      for (ObjectId o = 0; o < z.object_count(); ++o) comps[o] = QMatrix::identity(src.dim(o));
    } else {
      std::vector<bool> seen(z.object_count());
      for (ObjectId o = 0; o < z.object_count(); ++o) comps[o] = QMatrix(dst.dim(o), src.dim(o));
      for (const auto& e : d.components) {
        if (e.id >= z.object_count()) type_error(e.pos, "no object " + std::to_string(e.id) + " in " + cd.apex);
        if (seen[e.id]) type_error(e.pos, "component at object " + std::to_string(e.id) + " given twice");
        seen[e.id] = true;
        comps[e.id] = to_matrix(e.value, dst.dim(e.id), src.dim(e.id), e.pos,
                                "component at object " + std::to_string(e.id));
      }
    }
    SystemMap xi(src, dst, std::move(comps));
    if (auto bad = xi.naturality_failure()) {
      Position p = d.pos;
      for (const auto& e : d.components)
        if (e.id == z.source(*bad) || e.id == z.target(*bad)) p = e.pos;
      type_error(p, "kernel is not natural at apex morphism " + std::to_string(*bad));
    }
    env().kernels.emplace(d.name, PrequantumKernel{c, a1, a2, std::move(xi)});
    env().kernel_decls.emplace(d.name, d);
  }

  void operator()(const Command& c) {
    auto need = [&](std::size_t i, const char* kind) {
      if (i >= c.args.size()) type_error(c.pos, "missing argument");
      kind_of(c.args[i], kind, c.pos);
    };
    switch (c.kind) {
      case Command::Kind::Card: need(0, "groupoid"); break;
      case Command::Kind::Show:
        lookup(c.args.at(0), c.pos);
        if (env().kinds.at(c.args[0]) != "groupoid" && env().kinds.at(c.args[0]) != "functor")
          type_error(c.pos, c.args[0] + " is a " + env().kinds.at(c.args[0]) + ", expected a groupoid or functor");
        break;
      case Command::Kind::Sum:
      case Command::Kind::Prod:
        need(0, "functor"), need(1, "system");
        same_base(c.args[1], env().functor_ends.at(c.args[0]).first, c.pos);
        break;
      case Command::Kind::Transform: need(0, "kernel"); break;
      case Command::Kind::Axioms:
        need(0, "functor"), need(1, "system");
        same_base(c.args[1], env().functor_ends.at(c.args[0]).first, c.pos);
        if (c.args.size() > 2) {
          need(2, "system");
          same_base(c.args[2], env().functor_ends.at(c.args[0]).second, c.pos);
        }
        break;
      case Command::Kind::Anomaly: {
        need(0, "kernel"), need(1, "kernel");
        const auto& k2 = env().kernel_decls.at(c.args[0]);
        const auto& k1 = env().kernel_decls.at(c.args[1]);
        if (env().corr_decls.at(k1.corr).right_base != env().corr_decls.at(k2.corr).left_base || k1.source != k2.target)
          type_error(c.pos, "kernels " + c.args[0] + " and " + c.args[1] + " are not composable");
        break;
      }
      case Command::Kind::Dw: need(0, "group"); break;
      case Command::Kind::Matrix: break;
    }
    out_.commands.push_back(c);
  }

 private:
  CheckedProgram out_;
  Environment& env() { return out_.env; }

  template <class Fn>
  void guarded(Position pos, Fn&& fn) {
    try {
      fn();
    } catch (const SourceError&) {
      throw;
    } catch (const Error& e) {
      type_error(pos, e.what());
    }
  }

  void bind(const std::string& name, const char* kind, Position pos) {
    if (env().kinds.count(name)) throw SourceError(ErrorKind::NameError, pos, "`" + name + "` is already defined");
    env().kinds[name] = kind;
  }
  const std::string& lookup(const std::string& name, Position pos) {
    auto it = env().kinds.find(name);
    if (it == env().kinds.end()) throw SourceError(ErrorKind::NameError, pos, "undeclared name `" + name + "`");
    return it->second;
  }
  void kind_of(const std::string& name, const char* kind, Position pos) {
    const auto& k = lookup(name, pos);
    if (k != kind) type_error(pos, "`" + name + "` is a " + k + ", expected a " + kind);
    if (!present(name, k)) type_error(pos, "`" + name + "` did not elaborate");
  }
  bool present(const std::string& name, const std::string& k) {
    if (k == "group") return env().groups.count(name);
    if (k == "groupoid") return env().groupoids.count(name);
    if (k == "functor") return env().functors.count(name);
    if (k == "system") return env().systems.count(name);
    if (k == "corr") return env().corrs.count(name);
    return env().kernels.count(name);
  }
  void same_base(const std::string& system, const std::string& base, Position pos) {
    if (env().system_base.at(system) != base)
      type_error(pos, system + " lives on " + env().system_base.at(system) + ", expected " + base);
  }

  const FiniteGroup& group(const std::string& n, Position p) { return kind_of(n, "group", p), env().groups.at(n); }
  const FiniteGroupoid& groupoid(const std::string& n, Position p) {
    return kind_of(n, "groupoid", p), env().groupoids.at(n);
  }
  const GroupoidFunctor& functor(const std::string& n, Position p) {
    return kind_of(n, "functor", p), env().functors.at(n);
  }
  const LocalSystem& system(const std::string& n, Position p) { return kind_of(n, "system", p), env().systems.at(n); }
  const Correspondence& corr(const std::string& n, Position p) { return kind_of(n, "corr", p), env().corrs.at(n); }
};

}  // namespace detail

inline CheckedProgram check(const Program& p) { return detail::Checker().run(p); }

}  // namespace lhott::dsl
