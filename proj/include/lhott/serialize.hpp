#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lhott/functor.hpp"
#include "lhott/matrix.hpp"
#include "lhott/rational.hpp"

// Line-oriented text format:
//
//   groupoid <objects> <morphisms>
//   arrow <id> <source> <target> <inverse>
//   identity <object> <morphism>
//   compose <g> <f> <g o f>
//   end
//
// and for functors (domain/codomain given separately)
//
//   functor <objects> <morphisms>
//   objects <image of 0> <image of 1> ...
//   morphisms <image of 0> ...
//   end
//
// Blank lines and `#` comments are skipped.

namespace lhott {

namespace detail {

inline bool next_record(std::istream& in, std::istringstream& line, std::size_t& lineno) {
  std::string text;
  while (std::getline(in, text)) {
    ++lineno;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(text);
    return true;
  }
  return false;
}

inline std::string expect_word(std::istringstream& line, std::size_t lineno) {
  std::string w;
  require(static_cast<bool>(line >> w), ErrorKind::ParseError, "line " + std::to_string(lineno) + ": missing keyword");
  return w;
}

inline std::size_t expect_count(std::istringstream& line, std::size_t lineno) {
  long long v = -1;
  require(static_cast<bool>(line >> v) && v >= 0, ErrorKind::ParseError,
          "line " + std::to_string(lineno) + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline void write_groupoid(std::ostream& out, const FiniteGroupoid& x) {
  out << "groupoid " << x.object_count() << ' ' << x.morphism_count() << '\n';
  for (MorphismId m = 0; m < x.morphism_count(); ++m)
    out << "arrow " << m << ' ' << x.source(m) << ' ' << x.target(m) << ' ' << x.inverse(m) << '\n';
  for (ObjectId o = 0; o < x.object_count(); ++o) out << "identity " << o << ' ' << x.identity(o) << '\n';
  for (MorphismId f = 0; f < x.morphism_count(); ++f)
    for (MorphismId g : x.out(x.target(f))) out << "compose " << g << ' ' << f << ' ' << x.compose(g, f) << '\n';
  out << "end\n";
}

inline FiniteGroupoid read_groupoid(std::istream& in) {
  std::istringstream line;
  std::size_t lineno = 0;
  require(detail::next_record(in, line, lineno) && detail::expect_word(line, lineno) == "groupoid",
          ErrorKind::ParseError, "expected a groupoid header");
  const std::size_t n = detail::expect_count(line, lineno), m = detail::expect_count(line, lineno);
  std::vector<Arrow> arrows(m);
  std::vector<MorphismId> inverse(m), identity(n);
  std::vector<bool> seen_arrow(m), seen_id(n);
  std::map<std::pair<MorphismId, MorphismId>, MorphismId> table;
  for (;;) {
    require(detail::next_record(in, line, lineno), ErrorKind::ParseError, "groupoid text ends without `end`");
    auto word = detail::expect_word(line, lineno);
    auto here = "line " + std::to_string(lineno) + ": ";
    if (word == "end") break;
    if (word == "arrow") {
      auto id = detail::expect_count(line, lineno);
      require(id < m && !seen_arrow[id], ErrorKind::ParseError, here + "bad or repeated morphism id");
      seen_arrow[id] = true;
      arrows[id].source = detail::expect_count(line, lineno);
      arrows[id].target = detail::expect_count(line, lineno);
      inverse[id] = detail::expect_count(line, lineno);
    } else if (word == "identity") {
      auto o = detail::expect_count(line, lineno);
      require(o < n && !seen_id[o], ErrorKind::ParseError, here + "bad or repeated object id");
      seen_id[o] = true;
      identity[o] = detail::expect_count(line, lineno);
    } else if (word == "compose") {
      auto g = detail::expect_count(line, lineno);
      auto f = detail::expect_count(line, lineno);
      table[{g, f}] = detail::expect_count(line, lineno);
    } else {
      fail(ErrorKind::ParseError, here + "unknown record `" + word + "`");
    }
  }
  for (std::size_t i = 0; i < m; ++i) require(seen_arrow[i], ErrorKind::ParseError, "missing arrow record");
  for (std::size_t i = 0; i < n; ++i) require(seen_id[i], ErrorKind::ParseError, "missing identity record");
  auto x = FiniteGroupoid::build(n, std::move(arrows), std::move(identity), std::move(inverse),
                                 [&](MorphismId g, MorphismId f) {
                                   auto it = table.find({g, f});
                                   require(it != table.end(), ErrorKind::ParseError,
                                           "missing composite " + std::to_string(g) + " o " + std::to_string(f));
                                   return it->second;
                                 });
  x.validate();
  return x;
}

inline void write_functor(std::ostream& out, const GroupoidFunctor& f) {
  out << "functor " << f.domain().object_count() << ' ' << f.domain().morphism_count() << '\n';
  out << "objects";
  for (ObjectId o = 0; o < f.domain().object_count(); ++o) out << ' ' << f(o);
  out << "\nmorphisms";
  for (MorphismId m = 0; m < f.domain().morphism_count(); ++m) out << ' ' << f.map(m);
  out << "\nend\n";
}

inline GroupoidFunctor read_functor(std::istream& in, const FiniteGroupoid& domain, const FiniteGroupoid& codomain) {
  std::istringstream line;
  std::size_t lineno = 0;
  require(detail::next_record(in, line, lineno) && detail::expect_word(line, lineno) == "functor",
          ErrorKind::ParseError, "expected a functor header");
  const std::size_t n = detail::expect_count(line, lineno), m = detail::expect_count(line, lineno);
  require(n == domain.object_count() && m == domain.morphism_count(), ErrorKind::InvalidFunctor,
          "functor header does not match the domain");
  std::vector<ObjectId> objs;
  std::vector<MorphismId> mors;
  for (;;) {
    require(detail::next_record(in, line, lineno), ErrorKind::ParseError, "functor text ends without `end`");
    auto word = detail::expect_word(line, lineno);
    if (word == "end") break;
    std::size_t v;
    if (word == "objects")
      while (line >> v) objs.push_back(v);
    else if (word == "morphisms")
      while (line >> v) mors.push_back(v);
    else
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": unknown record `" + word + "`");
  }
  GroupoidFunctor f(domain, codomain, std::move(objs), std::move(mors));
  f.validate();
  return f;
}

/// One line per row, entries as `p/q` tokens separated by spaces.
inline void write_matrix(std::ostream& out, const QMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << to_string(a(i, j));
    out << '\n';
  }
}

inline std::string to_text(const FiniteGroupoid& x) {
  std::ostringstream s;
  write_groupoid(s, x);
  return s.str();
}

inline std::string to_text(const GroupoidFunctor& f) {
  std::ostringstream s;
  write_functor(s, f);
  return s.str();
}

}  // namespace lhott
