#pragma once

// Register automata as coalgebras in supported sets, their configuration
// semantics over Ext Q, and generalized determinization (the powerset
// instance for classical automata and the Ext instance for register
// automata).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "atoms.hpp"
#include "binding.hpp"
#include "freenom.hpp"
#include "suppset.hpp"

namespace nomset {

/// The input value (rho(0) under the binder) or an old register.
struct RegisterRef {
  std::optional<Atom> reg;

  static RegisterRef input() { return {}; }
  static RegisterRef of(Atom a) { return {a}; }
  bool is_input() const { return !reg.has_value(); }

  /// Position under the binder: input is 0, register k is k + 1.
  Atom shifted() const
  {
    return is_input() ? Atom(0) : Atom(static_cast<std::int64_t>(reg->index() + 1));
  }

  friend bool operator==(const RegisterRef&, const RegisterRef&) = default;
  friend auto operator<=>(const RegisterRef&, const RegisterRef&) = default;
};

struct Literal {
  bool positive = true;
  std::string relation;
  std::vector<RegisterRef> args;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of literals; empty means true.
using Guard = std::vector<Literal>;

class Signature {
public:
  static Signature for_symmetry(SymmetryId sym)
  {
    Signature s;
    s.arity_["eq"] = 2;
    if (sym == SymmetryId::TotalOrder)
      s.arity_["lt"] = 2;
    return s;
  }

  const std::map<std::string, std::size_t>& relations() const { return arity_; }

  std::optional<std::size_t> arity(const std::string& name) const
  {
    auto it = arity_.find(name);
    if (it == arity_.end())
      return std::nullopt;
    return it->second;
  }

  bool holds(const std::string& name, const std::vector<Atom>& args) const
  {
    auto ar = arity(name);
    if (!ar || *ar != args.size())
      throw std::invalid_argument("relation '" + name + "' is not in the signature");
    if (name == "eq")
      return args[0] == args[1];
    if (name == "lt")
      return args[0] < args[1];
    throw std::logic_error("no interpretation for '" + name + "'");
  }

private:
  std::map<std::string, std::size_t> arity_;
};

struct Transition {
  std::size_t from = 0;
  Guard guard;
  std::size_t to = 0;
  /// Register of the target -> its new content.
  std::map<Atom, RegisterRef> assign;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Locations are a supported set whose support atoms name registers.
struct RegisterAutomaton {
  SymmetryId sym = SymmetryId::Equality;
  SuppSet locations;
  std::size_t initial = 0;
  std::vector<bool> final;
  std::vector<Transition> transitions;

  Signature signature() const { return Signature::for_symmetry(sym); }
  bool is_final(std::size_t loc) const { return final.at(loc); }

  friend bool operator==(const RegisterAutomaton&, const RegisterAutomaton&) = default;
};

/// A location with an admissible register valuation: an element of Ext Q.
using Config = ExtElem;

struct ValidationIssue {
  std::string code;
  std::string where;
  std::string message;
};

namespace detail {

inline std::string where_transition(std::size_t i) { return "transition " + std::to_string(i); }

/// Support of a transition's element of P_f(G x Ext Q) before binding.
inline Support shifted_support(const Transition& t)
{
  Support s;
  for (const auto& lit : t.guard)
    for (const auto& r : lit.args)
      s.insert(r.shifted());
  for (const auto& [reg, ref] : t.assign)
    s.insert(ref.shifted());
  return s;
}

} // namespace detail

inline std::vector<ValidationIssue> validate(const RegisterAutomaton& ra)
{
  std::vector<ValidationIssue> out;
  auto issue = [&](std::string code, std::string where, std::string msg) {
    out.push_back({std::move(code), std::move(where), std::move(msg)});
  };
  const auto& q = ra.locations;
  const auto sig = ra.signature();

  if (ra.final.size() != q.size())
    issue("final-size", "final", "finality vector does not cover every location");
  for (std::size_t i = 0; i < q.size(); ++i)
    for (const auto& a : q.support(i))
      if (!a.is_natural())
        issue("register-name", "location " + q.id(i), "register names must be naturals");
  if (ra.initial >= q.size()) {
    issue("initial-missing", "initial", "initial location does not exist");
  } else if (!q.support(ra.initial).empty()) {
    issue("initial-not-uninitialized", "location " + q.id(ra.initial),
          "initial not uninitialized: initial location has registers " +
              q.support(ra.initial).str());
  }

  for (std::size_t i = 0; i < ra.transitions.size(); ++i) {
    const auto& t = ra.transitions[i];
    const auto where = detail::where_transition(i);
    if (t.from >= q.size() || t.to >= q.size()) {
      issue("location-missing", where, "transition endpoint does not exist");
      continue;
    }
    const auto& src = q.support(t.from);
    const auto& dst = q.support(t.to);
    auto check_ref = [&](const RegisterRef& r, const char* ctx) {
      if (!r.is_input() && !src.contains(*r.reg))
        issue("unknown-register", where,
              std::string(ctx) + " uses register " + r.reg->str() + " not held by location " +
                  q.id(t.from));
    };
    for (const auto& lit : t.guard) {
      auto ar = sig.arity(lit.relation);
      if (!ar)
        issue("unknown-relation", where, "relation '" + lit.relation + "' not in signature");
      else if (*ar != lit.args.size())
        issue("arity-mismatch", where,
              "relation '" + lit.relation + "' expects " + std::to_string(*ar) + " arguments");
      for (const auto& r : lit.args)
        check_ref(r, "guard");
    }
    Support assigned;
    for (const auto& [reg, ref] : t.assign) {
      assigned.insert(reg);
      check_ref(ref, "assignment");
    }
    if (assigned != dst)
      issue("assignment-domain", where,
            "assignment covers " + assigned.str() + " but target registers are " + dst.str());
    if (ra.sym != SymmetryId::Renaming) {
      std::set<RegisterRef> seen;
      for (const auto& [reg, ref] : t.assign)
        if (!seen.insert(ref).second) {
          issue("assignment-not-injective", where, "assignment not injective");
          break;
        }
    }
    // The transition, seen under the binder, must be supported by its source.
    bool naturals = true;
    for (const auto& lit : t.guard)
      for (const auto& r : lit.args)
        naturals = naturals && (r.is_input() || r.reg->is_natural());
    for (const auto& [reg, ref] : t.assign)
      naturals = naturals && (ref.is_input() || ref.reg->is_natural());
    if (naturals && !b_support(detail::shifted_support(t)).subset_of(src))
      issue("transition-support", where, "transition support escapes its source location");
  }
  return out;
}

inline bool eval_guard(const Signature& sig, const Guard& g, const RestrictedMap& val,
                       const Atom& input)
{
  for (const auto& lit : g) {
    std::vector<Atom> args;
    for (const auto& r : lit.args) {
      if (r.is_input()) {
        args.push_back(input);
        continue;
      }
      auto it = val.images().find(*r.reg);
      if (it == val.images().end())
        throw std::out_of_range("unresolved register " + r.reg->str());
      args.push_back(it->second);
    }
    if (sig.holds(lit.relation, args) != lit.positive)
      return false;
  }
  return true;
}

struct StepResult {
  std::vector<Config> successors; // sorted, duplicate free
  /// Successors discarded because their valuation is not admissible.
  std::size_t dropped = 0;
};

inline StepResult step(const RegisterAutomaton& ra, const Config& c, const Atom& input)
{
  check_domain(ra.sym, input);
  StepResult out;
  const auto sig = ra.signature();
  std::set<Config> next;
  for (const auto& t : ra.transitions) {
    if (t.from != c.base || !eval_guard(sig, t.guard, c.pi, input))
      continue;
    FiniteMap val;
    for (const auto& [reg, ref] : t.assign)
      val.emplace(reg, ref.is_input() ? input : c.pi(*ref.reg));
    if (!is_admissible(ra.sym, val)) {
      ++out.dropped;
      continue;
    }
    next.insert(Config{RestrictedMap(ra.sym, std::move(val)), t.to});
  }
  out.successors.assign(next.begin(), next.end());
  return out;
}

inline Config initial_config(const RegisterAutomaton& ra)
{
  return Config{RestrictedMap(ra.sym, {}), ra.initial};
}

struct RunResult {
  bool accepted = false;
  std::vector<std::set<Config>> trace; // reachable configurations per prefix
  std::size_t dropped = 0;
};

/// Breadth-first subset tracking over configurations.
inline RunResult run_trace(const RegisterAutomaton& ra, const std::vector<Atom>& word)
{
  RunResult out;
  std::set<Config> current{initial_config(ra)};
  out.trace.push_back(current);
  for (const auto& a : word) {
    std::set<Config> next;
    for (const auto& c : current) {
      auto r = step(ra, c, a);
      out.dropped += r.dropped;
      next.insert(r.successors.begin(), r.successors.end());
    }
    current = std::move(next);
    out.trace.push_back(current);
  }
  out.accepted = std::any_of(current.begin(), current.end(),
                             [&](const Config& c) { return ra.is_final(c.base); });
  return out;
}

inline bool run(const RegisterAutomaton& ra, const std::vector<Atom>& word)
{
  return run_trace(ra, word).accepted;
}

/// Configurations related by an admissible renaming of their values.
inline bool same_orbit(SymmetryId sym, const Config& a, const Config& b)
{
  if (a.base != b.base)
    return false;
  FiniteMap rel;
  for (const auto& [reg, v] : a.pi.images()) {
    auto [it, ok] = rel.emplace(v, b.pi(reg));
    if (!ok && it->second != b.pi(reg))
      return false;
  }
  return is_admissible(sym, rel) && image_of(rel).size() == rel.size();
}

struct OrbitSummary {
  std::size_t orbits = 0;
  std::size_t configs = 0;
  std::map<std::string, std::size_t> per_location;
};

/// Orbits of configurations reachable in at most `depth` steps with inputs
/// drawn from the pool.
inline OrbitSummary reachable_orbits(const RegisterAutomaton& ra, const Support& pool,
                                     std::size_t depth)
{
  if (!is_group(ra.sym))
    throw std::invalid_argument("orbit summaries need a group symmetry");
  std::set<Config> seen{initial_config(ra)};
  std::set<Config> frontier = seen;
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::set<Config> next;
    for (const auto& c : frontier)
      for (const auto& a : pool)
        for (auto& s : step(ra, c, a).successors)
          if (!seen.contains(s))
            next.insert(s);
    seen.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  OrbitSummary out;
  out.configs = seen.size();
  std::vector<Config> reps;
  for (const auto& c : seen) {
    bool known = std::any_of(reps.begin(), reps.end(),
                             [&](const Config& r) { return same_orbit(ra.sym, r, c); });
    if (!known) {
      reps.push_back(c);
      ++out.per_location[ra.locations.id(c.base)];
    }
  }
  out.orbits = reps.size();
  return out;
}

// --- generalized determinization ---------------------------------------------

/// d : T Q -> G T Q, the unique algebra morphism with d . unit = phi . c.
template <class Instance, class Coalgebra>
auto determinize_generic(const Instance& instance, Coalgebra c)
{
  return [instance, c](const typename Instance::free_type& t) { return instance.extend(c, t); };
}

/// A nondeterministic automaton Q -> 2 x (P_f Q)^Sigma over letters 0..n-1.
struct Nfa {
  std::size_t states = 0;
  std::size_t letters = 0;
  std::size_t initial = 0;
  std::vector<bool> final;
  /// next[q][a] is the successor set.
  std::vector<std::vector<std::set<std::size_t>>> next;
};

/// An element of 2 x X^Sigma with X = P_f Q.
struct PowersetBehaviour {
  bool final = false;
  std::vector<std::set<std::size_t>> next;

  friend bool operator==(const PowersetBehaviour&, const PowersetBehaviour&) = default;
};

/// The finite powerset monad; its algebras are join-semilattices and
/// 2 x X^Sigma lifts pointwise (max of bits, union of successors).
struct PowersetInstance {
  using free_type = std::set<std::size_t>;
  std::size_t letters = 0;

  free_type unit(std::size_t q) const { return {q}; }

  template <class Coalgebra>
  PowersetBehaviour extend(const Coalgebra& c, const free_type& s) const
  {
    PowersetBehaviour out{false, std::vector<std::set<std::size_t>>(letters)};
    for (auto q : s) {
      PowersetBehaviour b = c(q);
      out.final = out.final || b.final;
      for (std::size_t a = 0; a < letters; ++a)
        out.next[a].insert(b.next[a].begin(), b.next[a].end());
    }
    return out;
  }
};

inline auto nfa_coalgebra(const Nfa& nfa)
{
  return [&nfa](std::size_t q) { return PowersetBehaviour{nfa.final[q], nfa.next[q]}; };
}

/// Acceptance in the determinized automaton, starting from unit(initial).
inline bool determinized_accepts(const Nfa& nfa, const std::vector<std::size_t>& word)
{
  PowersetInstance inst{nfa.letters};
  auto d = determinize_generic(inst, nfa_coalgebra(nfa));
  auto state = inst.unit(nfa.initial);
  for (auto a : word)
    state = d(state).next.at(a);
  return d(state).final;
}

/// One symbolic edge of a register automaton location: a guard and a target
/// element of Ext Q, over atoms standing for data (registers or the input).
struct SymbolicEdge {
  std::vector<std::tuple<bool, std::string, std::vector<Atom>>> guard;
  std::size_t target = 0;
  FiniteMap valuation;

  friend bool operator==(const SymbolicEdge&, const SymbolicEdge&) = default;
  friend auto operator<=>(const SymbolicEdge&, const SymbolicEdge&) = default;
};

using EdgeSet = std::set<SymbolicEdge>;

/// Finite sets of symbolic edges as a nominal carrier (equality symmetry).
struct EdgeSetCarrier {
  using value_type = EdgeSet;

  EdgeSet act(const GlobalMap& g, const EdgeSet& s) const
  {
    EdgeSet out;
    for (const auto& e : s) {
      SymbolicEdge m{{}, e.target, {}};
      for (const auto& [pos, rel, args] : e.guard) {
        std::vector<Atom> moved;
        for (const auto& a : args)
          moved.push_back(g(a));
        m.guard.emplace_back(pos, rel, std::move(moved));
      }
      for (const auto& [reg, v] : e.valuation)
        m.valuation.emplace(reg, g(v));
      out.insert(std::move(m));
    }
    return out;
  }
  Support supp(const EdgeSet& s) const
  {
    Support out;
    for (const auto& e : s) {
      for (const auto& [pos, rel, args] : e.guard)
        for (const auto& a : args)
          out.insert(a);
      for (const auto& [reg, v] : e.valuation)
        out.insert(v);
    }
    return out;
  }
  bool equal(const EdgeSet& a, const EdgeSet& b) const { return a == b; }
};

/// An element of 2 x [A] P_f(G x Ext Q): finality and the abstracted edges.
struct ConfigBehaviour {
  bool final = false;
  AbsClass<EdgeSet> edges;
};

struct ConfigBehaviourCarrier {
  using value_type = ConfigBehaviour;
  EdgeSetCarrier inner;

  ConfigBehaviour act(const GlobalMap& g, const ConfigBehaviour& b) const
  {
    return {b.final, act_abs(inner, g, b.edges)};
  }
  Support supp(const ConfigBehaviour& b) const { return supp_abs(inner, b.edges); }
  bool equal(const ConfigBehaviour& a, const ConfigBehaviour& b) const
  {
    return a.final == b.final && alpha_eq(inner, a.edges, b.edges);
  }
};

/// The transitions of a location as an element of B P_f(G x Ext Q): input
/// at atom 0, old register k at atom k + 1.
inline BElem<EdgeSet> location_edges(const RegisterAutomaton& ra, std::size_t loc)
{
  EdgeSet s;
  for (const auto& t : ra.transitions) {
    if (t.from != loc)
      continue;
    SymbolicEdge e{{}, t.to, {}};
    for (const auto& lit : t.guard) {
      std::vector<Atom> args;
      for (const auto& r : lit.args)
        args.push_back(r.shifted());
      e.guard.emplace_back(lit.positive, lit.relation, std::move(args));
    }
    for (const auto& [reg, ref] : t.assign)
      e.valuation.emplace(reg, ref.shifted());
    s.insert(std::move(e));
  }
  return {s};
}

/// The Ext monad instance for register automata in the equality symmetry.
struct ExtInstance {
  using free_type = Config;
  const RegisterAutomaton* automaton = nullptr;

  free_type unit(std::size_t q) const
  {
    return nomset::unit(automaton->sym, automaton->locations, q);
  }

  template <class Coalgebra>
  ConfigBehaviour extend(const Coalgebra& c, const free_type& e) const
  {
    if (automaton->sym != SymmetryId::Equality)
      throw std::invalid_argument(
          "the Ext determinization instance is available for the equality symmetry only");
    Extension ext(ConfigBehaviourCarrier{}, automaton->locations, c);
    return ext(e);
  }
};

/// phi . c: the location coalgebra transported across B U = U [A].
inline auto register_coalgebra(const RegisterAutomaton& ra)
{
  if (ra.sym != SymmetryId::Equality)
    throw std::invalid_argument("unsupported monad instance for symmetry " +
                                std::string(to_string(ra.sym)));
  return [&ra](std::size_t q) {
    return ConfigBehaviour{ra.is_final(q), phi(EdgeSetCarrier{}, location_edges(ra, q))};
  };
}

/// Successors of a determinized behaviour on one input: the binder is
/// instantiated with the input, guards are evaluated on data, and
/// non-admissible valuations are dropped.
inline StepResult instantiate(const RegisterAutomaton& ra, const ConfigBehaviour& b,
                              const Atom& input)
{
  StepResult out;
  const auto sig = ra.signature();
  auto sub = [&](const Atom& a) { return a == b.edges.binder ? input : a; };
  std::set<Config> next;
  for (const auto& e : b.edges.body) {
    bool pass = true;
    for (const auto& [pos, rel, args] : e.guard) {
      std::vector<Atom> vals;
      for (const auto& a : args)
        vals.push_back(sub(a));
      if (sig.holds(rel, vals) != pos) {
        pass = false;
        break;
      }
    }
    if (!pass)
      continue;
    FiniteMap val;
    for (const auto& [reg, v] : e.valuation)
      val.emplace(reg, sub(v));
    if (!is_admissible(ra.sym, val)) {
      ++out.dropped;
      continue;
    }
    next.insert(Config{RestrictedMap(ra.sym, std::move(val)), e.target});
  }
  out.successors.assign(next.begin(), next.end());
  return out;
}

// --- shipped automata ---------------------------------------------------------

/// Accepts data words in which some later letter repeats the first one.
/// Locations: q0 (no registers), q1 and qa (register 0 holds the first letter).
inline RegisterAutomaton first_repeat_automaton()
{
  RegisterAutomaton ra;
  ra.sym = SymmetryId::Equality;
  ra.locations = SuppSet({{"q0", {}}, {"q1", {0}}, {"qa", {0}}});
  ra.initial = 0;
  ra.final = {false, false, true};
  auto in = RegisterRef::input();
  auto r0 = RegisterRef::of(0);
  ra.transitions = {
      {0, {}, 1, {{0, in}}},
      {1, {{true, "eq", {in, r0}}}, 2, {{0, r0}}},
      {1, {{false, "eq", {in, r0}}}, 1, {{0, r0}}},
      {2, {}, 2, {{0, r0}}},
  };
  return ra;
}

/// Accepts nonempty strictly increasing rational words.
inline RegisterAutomaton increasing_automaton()
{
  RegisterAutomaton ra;
  ra.sym = SymmetryId::TotalOrder;
  ra.locations = SuppSet({{"start", {}}, {"up", {0}}});
  ra.initial = 0;
  ra.final = {false, true};
  auto in = RegisterRef::input();
  auto r0 = RegisterRef::of(0);
  ra.transitions = {
      {0, {}, 1, {{0, in}}},
      {1, {{true, "lt", {r0, in}}}, 1, {{0, in}}},
  };
  return ra;
}

} // namespace nomset
