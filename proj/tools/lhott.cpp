// lhott: run, check and probe scripts for the finite rational model.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "lhott/lhott.hpp"

namespace {

using namespace lhott;

enum Exit { Ok = 0, Usage = 1, Parse = 2, Check = 3, Engine = 4, Size = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return Parse;
    case ErrorKind::NameError:
    case ErrorKind::TypeError: return Check;
    case ErrorKind::SizeLimit: return Size;
    default: return Engine;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

FiniteGroup named_group(const std::string& name) {
  static const std::regex pat(R"((Z|C|S)(\d+)|trivial)");
  std::smatch m;
  if (!std::regex_match(name, m, pat)) throw CLI::ValidationError("group must be Z<n>, C<n>, S<n> or trivial");
  if (name == "trivial") return FiniteGroup::trivial();
  auto n = std::stoul(m[2]);
  if (m[1] == "S") {
    if (n < 1 || n > 6) throw CLI::ValidationError("symmetric groups S1..S6 only");
    return FiniteGroup::symmetric(n);
  }
  if (n < 1) throw CLI::ValidationError("cyclic group of order 0");
  return FiniteGroup::cyclic(n);
}

struct Driver {
  std::string file;
  std::string format = "plain";
  std::uint64_t limit = default_size_limit;

  dsl::CheckedProgram load(dsl::Program& prog) const {
    prog = dsl::parse(slurp(file));
    return dsl::check(prog);
  }

  dsl::RunOptions options() const {
    return {limit, std::filesystem::path(file).parent_path().empty() ? std::filesystem::path(".")
                                                                     : std::filesystem::path(file).parent_path()};
  }

  void emit(const std::vector<dsl::Output>& outs, const std::vector<std::string>& labels = {}) const {
    if (format == "json") {
      auto results = nlohmann::json::array();
      for (const auto& o : outs) {
        auto j = dsl::to_json(o.value);
        j["command"] = o.command;
        j["line"] = o.pos.line;
        j["column"] = o.pos.column;
        results.push_back(std::move(j));
      }
      std::cout << nlohmann::json{{"results", results}}.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (i < labels.size()) std::cout << labels[i] << '\n';
      std::cout << dsl::render_plain(outs[i].value);
    }
  }

  int run() const {
    dsl::Program prog;
    auto checked = load(prog);
    dsl::Runner runner(checked, options());
    bool pass = true;
    if (format == "json") {
      auto outs = runner.execute_all();
      emit(outs);
      for (const auto& o : outs) pass = pass && dsl::all_pass(o.value);
    } else {
      for (const auto& c : checked.commands) {
        auto o = runner.execute(c);
        std::cout << dsl::render_plain(o.value) << std::flush;
        pass = pass && dsl::all_pass(o.value);
      }
    }
    return pass ? Ok : Engine;
  }

  int check() const {
    dsl::Program prog;
    auto checked = load(prog);
    std::size_t decls = prog.statements.size() - checked.commands.size();
    if (format == "json")
      std::cout << nlohmann::json{{"declarations", decls}, {"commands", checked.commands.size()}}.dump(2) << '\n';
    else
      std::cout << "ok: " << decls << " declarations, " << checked.commands.size() << " commands\n";
    return Ok;
  }

  /// Axiom suite on every declared functor against every system on its
  /// domain, paired with each system on its codomain (or the unit).
  int axioms() const {
    dsl::Program prog;
    auto checked = load(prog);
    std::vector<dsl::Command> cmds;
    std::vector<std::string> labels;
    for (const auto& st : prog.statements) {
      auto f = std::get_if<dsl::FunctorDecl>(&st);
      if (!f) continue;
      std::vector<std::string> on_dom, on_cod;
      for (const auto& st2 : prog.statements)
        if (auto s = std::get_if<dsl::SystemDecl>(&st2)) {
          if (s->base == f->domain) on_dom.push_back(s->name);
          if (s->base == f->codomain) on_cod.push_back(s->name);
        }
      if (on_cod.empty()) on_cod.push_back("");
      for (const auto& a : on_dom)
        for (const auto& b : on_cod) {
          dsl::Command c;
          c.pos = f->pos;
          c.kind = dsl::Command::Kind::Axioms;
          c.args = {f->name, a};
          if (!b.empty()) c.args.push_back(b);
          labels.push_back(dsl::print(dsl::Statement{c}).substr(6));
          cmds.push_back(std::move(c));
        }
    }
    checked.commands = cmds;
    auto outs = dsl::Runner(checked, options()).execute_all();
    emit(outs, labels);
    for (const auto& o : outs)
      if (!dsl::all_pass(o.value)) return Engine;
    return Ok;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pull-push quantization over finite groupoids with exact rational linear algebra"};
  app.require_subcommand(1);
  Driver d;
  std::string group;
  std::size_t genus = 0;
  app.add_option("--limit", d.limit, "bound on enumerated tuples for gauge models")->default_val(default_size_limit);
  app.add_option("--format", d.format, "output format")->check(CLI::IsMember({"plain", "json"}))->default_val("plain");

  auto* run = app.add_subcommand("run", "evaluate every print command of a script");
  run->add_option("file", d.file)->required();
  auto* chk = app.add_subcommand("check", "parse and elaborate a script");
  chk->add_option("file", d.file)->required();
  auto* ax = app.add_subcommand("axioms", "run the adjunction axiom suite on a script's functors");
  ax->add_option("file", d.file)->required();
  auto* dw = app.add_subcommand("dw", "finite gauge partition function of a closed surface");
  dw->add_option("group", group, "Z<n>, C<n>, S<n> or trivial")->required();
  dw->add_option("--genus", genus)->required();
  for (auto* sub : {run, chk, ax, dw}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*run) return d.run();
    if (*chk) return d.check();
    if (*ax) return d.axioms();
    auto value = dw_partition(named_group(group), {genus}, d.limit);
    if (d.format == "json")
      std::cout << nlohmann::json{{"type", "rational"}, {"value", to_string(value)}}.dump(2) << '\n';
    else
      std::cout << to_string(value) << '\n';
    return Ok;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "lhott: " << e.what() << '\n';
    return Usage;
  } catch (const dsl::SourceError& e) {
    std::cerr << d.file << ":" << e.position().line << ":" << e.position().column << ": error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const Error& e) {
    std::cerr << (d.file.empty() ? std::string("lhott") : d.file) << ": error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}
