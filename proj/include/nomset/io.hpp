#pragma once

// JSON documents for every module and the plain-text word format.

#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "atoms.hpp"
#include "automata.hpp"
#include "binding.hpp"
#include "freenom.hpp"
#include "nomrep.hpp"
#include "suppset.hpp"

namespace nomset::io {

using json = nlohmann::json;

class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw ParseError(what); }

inline const json& field(const json& j, const char* name)
{
  if (!j.is_object() || !j.contains(name))
    fail(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline std::string text(const json& j, const char* what)
{
  if (!j.is_string())
    fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

} // namespace detail

// Integers are written as numbers, other rationals as "p/q" strings.
inline json atom_to_json(const Atom& a)
{
  if (a.is_integer())
    return a.numerator();
  return a.str();
}

inline Atom atom_from_json(const json& j)
{
  try {
    if (j.is_number_integer())
      return Atom(j.get<std::int64_t>());
    if (j.is_string())
      return Atom::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
  detail::fail("atom must be an integer or a \"p/q\" string, got " + j.dump());
}

inline json support_to_json(const Support& s)
{
  json out = json::array();
  for (const auto& a : s)
    out.push_back(atom_to_json(a));
  return out;
}

inline Support support_from_json(const json& j)
{
  if (!j.is_array())
    detail::fail("support must be an array of atoms");
  Support s;
  for (const auto& a : j)
    s.insert(atom_from_json(a));
  return s;
}

inline json global_map_to_json(const GlobalMap& g)
{
  json entries = json::array();
  for (const auto& [k, v] : g.entries())
    entries.push_back(json::array({atom_to_json(k), atom_to_json(v)}));
  return {{"kind", std::string(g.kind())}, {"entries", entries}};
}

inline GlobalMap global_map_from_json(const json& j)
{
  auto kind = detail::text(detail::field(j, "kind"), "kind");
  SymmetryId sym;
  if (kind == "perm")
    sym = SymmetryId::Equality;
  else if (kind == "pwl")
    sym = SymmetryId::TotalOrder;
  else if (kind == "finmap")
    sym = SymmetryId::Renaming;
  else
    detail::fail("unknown map kind '" + kind + "'");
  FiniteMap entries;
  for (const auto& e : detail::field(j, "entries")) {
    if (!e.is_array() || e.size() != 2)
      detail::fail("map entries must be [atom, atom] pairs");
    if (!entries.emplace(atom_from_json(e[0]), atom_from_json(e[1])).second)
      detail::fail("duplicate map entry for " + e[0].dump());
  }
  try {
    return GlobalMap::from_entries(sym, std::move(entries));
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline json suppset_to_json(const SuppSet& x)
{
  json elems = json::array();
  for (const auto& e : x.elements())
    elems.push_back({{"id", e.id}, {"support", support_to_json(e.support)}});
  return {{"elements", elems}};
}

inline SuppSet suppset_from_json(const json& j)
{
  std::vector<SuppElement> elems;
  const auto& arr = detail::field(j, "elements");
  if (!arr.is_array())
    detail::fail("'elements' must be an array");
  for (const auto& e : arr)
    elems.push_back({detail::text(detail::field(e, "id"), "id"),
                     support_from_json(detail::field(e, "support"))});
  try {
    return SuppSet(std::move(elems));
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline json suppmap_to_json(const SuppMap& f)
{
  json m = json::object();
  for (std::size_t i = 0; i < f.source().size(); ++i)
    m[f.source().id(i)] = f.target().id(f(i));
  return {{"map", m}};
}

/// Returns the check result so violation reports stay data.
inline MapCheck suppmap_from_json(const json& j, const SuppSet& x, const SuppSet& y)
{
  const auto& m = detail::field(j, "map");
  if (!m.is_object())
    detail::fail("'map' must be an object");
  std::map<std::string, std::string> mapping;
  for (auto it = m.begin(); it != m.end(); ++it)
    mapping[it.key()] = detail::text(it.value(), "map target");
  try {
    return check_supported_map(mapping, x, y);
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline json ext_to_json(const ExtElem& e, const SuppSet& x)
{
  json pi = json::object();
  for (const auto& [k, v] : e.pi.images())
    pi[k.str()] = atom_to_json(v);
  return {{"pi", pi}, {"base", x.id(e.base)}};
}

inline ExtElem ext_from_json(const json& j, const SuppSet& x, SymmetryId sym)
{
  const auto& pi = detail::field(j, "pi");
  if (!pi.is_object())
    detail::fail("'pi' must be an object");
  FiniteMap images;
  for (auto it = pi.begin(); it != pi.end(); ++it)
    images.emplace(atom_from_json(json(it.key())), atom_from_json(it.value()));
  auto base = detail::text(detail::field(j, "base"), "base");
  try {
    return make_ext(x, x.index_of(base), RestrictedMap(sym, std::move(images)));
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline json presentation_to_json(const FinPresentation& p)
{
  json eqs = json::array();
  for (const auto& [l, r] : p.equations)
    eqs.push_back(json::array({ext_to_json(l, p.generators), ext_to_json(r, p.generators)}));
  return {{"symmetry", std::string(to_string(p.sym))},
          {"generators", suppset_to_json(p.generators)},
          {"equations", eqs}};
}

inline SymmetryId symmetry_from_json(const json& j)
{
  try {
    return parse_symmetry(detail::text(j, "symmetry"));
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline FinPresentation presentation_from_json(const json& j)
{
  auto sym = symmetry_from_json(detail::field(j, "symmetry"));
  auto gens = suppset_from_json(detail::field(j, "generators"));
  std::vector<Equation> eqs;
  const auto& arr = j.contains("equations") ? j.at("equations") : json::array();
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2)
      detail::fail("equations must be [lhs, rhs] pairs");
    eqs.emplace_back(ext_from_json(e[0], gens, sym), ext_from_json(e[1], gens, sym));
  }
  try {
    return FinPresentation(sym, std::move(gens), std::move(eqs));
  } catch (const std::invalid_argument& e) {
    detail::fail(e.what());
  }
}

inline json ref_to_json(const RegisterRef& r)
{
  if (r.is_input())
    return "input";
  return {{"reg", atom_to_json(*r.reg)}};
}

inline RegisterRef ref_from_json(const json& j)
{
  if (j.is_string() && j.get<std::string>() == "input")
    return RegisterRef::input();
  if (j.is_object() && j.contains("reg"))
    return RegisterRef::of(atom_from_json(j.at("reg")));
  detail::fail("register reference must be \"input\" or {\"reg\": atom}, got " + j.dump());
}

inline json automaton_to_json(const RegisterAutomaton& ra)
{
  json finals = json::array();
  for (std::size_t i = 0; i < ra.locations.size(); ++i)
    if (ra.is_final(i))
      finals.push_back(ra.locations.id(i));
  json ts = json::array();
  for (const auto& t : ra.transitions) {
    json guard = json::array();
    for (const auto& lit : t.guard) {
      json args = json::array();
      for (const auto& r : lit.args)
        args.push_back(ref_to_json(r));
      guard.push_back(json::array({lit.positive, lit.relation, args}));
    }
    json assign = json::object();
    for (const auto& [reg, ref] : t.assign)
      assign[reg.str()] = ref_to_json(ref);
    ts.push_back({{"from", ra.locations.id(t.from)},
                  {"guard", guard},
                  {"to", ra.locations.id(t.to)},
                  {"assign", assign}});
  }
  return {{"symmetry", std::string(to_string(ra.sym))},
          {"locations", suppset_to_json(ra.locations)},
          {"initial", ra.locations.id(ra.initial)},
          {"final", finals},
          {"transitions", ts}};
}

/// Structural parsing only; run validate() for the automaton conditions.
inline RegisterAutomaton automaton_from_json(const json& j)
{
  RegisterAutomaton ra;
  ra.sym = symmetry_from_json(detail::field(j, "symmetry"));
  ra.locations = suppset_from_json(detail::field(j, "locations"));
  auto loc = [&](const json& v, const char* what) {
    auto id = detail::text(v, what);
    auto i = ra.locations.find(id);
    if (!i)
      detail::fail(std::string(what) + " refers to unknown location '" + id + "'");
    return *i;
  };
  ra.initial = loc(detail::field(j, "initial"), "initial");
  ra.final.assign(ra.locations.size(), false);
  for (const auto& f : detail::field(j, "final"))
    ra.final[loc(f, "final")] = true;
  for (const auto& t : detail::field(j, "transitions")) {
    Transition tr;
    tr.from = loc(detail::field(t, "from"), "from");
    tr.to = loc(detail::field(t, "to"), "to");
    const auto& guard = t.contains("guard") ? t.at("guard") : json::array();
    for (const auto& lit : guard) {
      if (!lit.is_array() || lit.size() != 3 || !lit[0].is_boolean() || !lit[2].is_array())
        detail::fail("guard literals must be [polarity, relation, [refs]]");
      Literal l{lit[0].get<bool>(), detail::text(lit[1], "relation"), {}};
      for (const auto& r : lit[2])
        l.args.push_back(ref_from_json(r));
      tr.guard.push_back(std::move(l));
    }
    const auto& assign = detail::field(t, "assign");
    if (!assign.is_object())
      detail::fail("'assign' must be an object");
    for (auto it = assign.begin(); it != assign.end(); ++it)
      tr.assign.emplace(atom_from_json(json(it.key())), ref_from_json(it.value()));
    ra.transitions.push_back(std::move(tr));
  }
  return ra;
}

inline json term_to_json(const NamedTerm& t)
{
  switch (t.kind()) {
  case NamedTerm::Kind::Var: return {{"var", atom_to_json(t.atom())}};
  case NamedTerm::Kind::App: return {{"app", json::array({term_to_json(t.fun()), term_to_json(t.arg())})}};
  case NamedTerm::Kind::Lam: return {{"lam", json::array({atom_to_json(t.atom()), term_to_json(t.body())})}};
  }
  return nullptr;
}

inline NamedTerm term_from_json(const json& j)
{
  if (j.contains("var"))
    return NamedTerm::var(atom_from_json(j.at("var")));
  if (j.contains("app") && j.at("app").size() == 2)
    return NamedTerm::app(term_from_json(j.at("app")[0]), term_from_json(j.at("app")[1]));
  if (j.contains("lam") && j.at("lam").size() == 2)
    return NamedTerm::lam(atom_from_json(j.at("lam")[0]), term_from_json(j.at("lam")[1]));
  detail::fail("malformed term " + j.dump());
}

inline json db_to_json(const DBTerm& t)
{
  switch (t.kind()) {
  case DBTerm::Kind::Idx: return {{"idx", t.index()}};
  case DBTerm::Kind::App: return {{"app", json::array({db_to_json(t.fun()), db_to_json(t.arg())})}};
  case DBTerm::Kind::Lam: return {{"lam", db_to_json(t.body())}};
  }
  return nullptr;
}

inline DBTerm db_from_json(const json& j)
{
  if (j.contains("idx") && j.at("idx").is_number_unsigned())
    return DBTerm::idx(j.at("idx").get<std::uint64_t>());
  if (j.contains("app") && j.at("app").size() == 2)
    return DBTerm::app(db_from_json(j.at("app")[0]), db_from_json(j.at("app")[1]));
  if (j.contains("lam"))
    return DBTerm::lam(db_from_json(j.at("lam")));
  detail::fail("malformed de Bruijn term " + j.dump());
}

/// One atom per line; blank lines and '#' comments are skipped.
inline std::vector<Atom> read_word(std::istream& in)
{
  std::vector<Atom> word;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      continue;
    std::string extra;
    if (ls >> extra)
      detail::fail("line " + std::to_string(lineno) + ": one atom per line expected");
    try {
      word.push_back(Atom::parse(tok));
    } catch (const std::invalid_argument& e) {
      detail::fail("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return word;
}

} // namespace nomset::io
