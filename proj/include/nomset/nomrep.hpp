#pragma once

// Orbit-finite nominal sets presented by finitely many supported generators
// and equations between elements of Ext G. Equality of presented elements
// is decided over a finite atom pool.

#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "atoms.hpp"
#include "freenom.hpp"
#include "suppset.hpp"

namespace nomset {

using Equation = std::pair<ExtElem, ExtElem>;

struct FinPresentation {
  SymmetryId sym = SymmetryId::Equality;
  SuppSet generators;
  std::vector<Equation> equations;

  FinPresentation() = default;
  FinPresentation(SymmetryId s, SuppSet gens, std::vector<Equation> eqs)
      : sym(s), generators(std::move(gens)), equations(std::move(eqs))
  {
    for (const auto& [l, r] : equations)
      for (const auto* side : {&l, &r}) {
        if (side->pi.symmetry() != sym)
          throw std::invalid_argument("equation side of a different symmetry");
        make_ext(generators, side->base, side->pi); // validates
      }
  }

  /// Spare atoms the pool needs beyond a representative's support.
  std::size_t spare_atoms() const { return 1 + generators.max_support_size(); }
};

struct AtomPool {
  Support atoms;
};

class PoolError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Supports of reps and equation sides, plus 1 + (max generator support)
/// atoms fresh for all of them.
inline AtomPool default_pool(const FinPresentation& p, const std::vector<ExtElem>& reps)
{
  Support s;
  for (const auto& e : reps)
    s = s | ext_support(e);
  for (const auto& [l, r] : p.equations)
    s = s | ext_support(l) | ext_support(r);
  // Spare atoms avoid the equation atoms too; sharing them breaks pool
  // stability on small presentations.
  Support pool = s;
  for (std::size_t i = 0; i < p.spare_atoms(); ++i)
    pool.insert(fresh(p.sym, pool));
  return {pool};
}

/// The pool must contain every representative's support and have at least
/// spare_atoms() atoms beyond the largest generator support.
inline void check_pool(const FinPresentation& p, const std::vector<ExtElem>& reps,
                       const AtomPool& pool)
{
  for (const auto& e : reps)
    if (!ext_support(e).subset_of(pool.atoms))
      throw PoolError("pool " + pool.atoms.str() + " misses the support " +
                      ext_support(e).str() + " of a representative");
  auto need = p.generators.max_support_size() + p.spare_atoms();
  if (pool.atoms.size() < need)
    throw PoolError("pool " + pool.atoms.str() + " has fewer than " + std::to_string(need) +
                    " atoms");
}

/// Every (l . tau, r . tau) for an equation (l, r) and an admissible tau
/// from the equation's support into the pool.
inline std::vector<Equation> equation_instances(const FinPresentation& p, const AtomPool& pool)
{
  std::vector<Equation> out;
  for (const auto& [l, r] : p.equations) {
    auto s = ext_support(l) | ext_support(r);
    for (auto& tau : enumerate_admissible(p.sym, s, pool.atoms)) {
      RestrictedMap t(p.sym, std::move(tau));
      out.emplace_back(act(t, l), act(t, r));
    }
  }
  return out;
}

/// The congruence generated by a presentation on the pool-bounded part of
/// Ext G, closed with union-find.
class Congruence {
public:
  Congruence(const FinPresentation& p, const AtomPool& pool)
      : sym_(p.sym), pool_(pool), elements_(ext_enumerate(p.sym, p.generators, pool.atoms))
  {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      index_.emplace(elements_[i], i);
    parent_.resize(elements_.size());
    std::iota(parent_.begin(), parent_.end(), 0);
    for (const auto& [l, r] : equation_instances(p, pool))
      unite(index_.at(l), index_.at(r));
    for (auto& x : parent_)
      x = root(x);
  }

  const std::vector<ExtElem>& elements() const { return elements_; }
  const AtomPool& pool() const { return pool_; }

  bool contains(const ExtElem& e) const { return index_.contains(e); }

  std::size_t index(const ExtElem& e) const
  {
    auto it = index_.find(e);
    if (it == index_.end())
      throw PoolError("element is not expressible over pool " + pool_.atoms.str());
    return it->second;
  }

  /// Canonical class id: the least element index in the class.
  std::size_t class_of(const ExtElem& e) const { return parent_[index(e)]; }
  std::size_t class_of_index(std::size_t i) const { return parent_[i]; }

  bool same(const ExtElem& a, const ExtElem& b) const { return class_of(a) == class_of(b); }

  std::size_t class_count() const
  {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i)
      n += parent_[i] == i;
    return n;
  }

private:
  std::size_t root(std::size_t i)
  {
    while (parent_[i] != i)
      i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = root(a);
    b = root(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

  SymmetryId sym_;
  AtomPool pool_;
  std::vector<ExtElem> elements_;
  std::map<ExtElem, std::size_t> index_;
  std::vector<std::size_t> parent_;
};

inline bool quot_eq(const FinPresentation& p, const ExtElem& a, const ExtElem& b,
                    const AtomPool& pool)
{
  check_pool(p, {a, b}, pool);
  return Congruence(p, pool).same(a, b);
}

inline std::size_t element_count(const FinPresentation& p, const AtomPool& pool)
{
  return Congruence(p, pool).class_count();
}

namespace detail {

inline void require_group(SymmetryId sym, const char* what)
{
  if (!is_group(sym))
    throw std::invalid_argument(std::string(what) + " needs a group symmetry, not renaming");
}

} // namespace detail

/// Orbits of congruence classes under all admissible maps that keep a
/// representative inside the pool (partial pool isomorphisms; for the
/// equality symmetry these are exactly restrictions of pool permutations).
inline std::size_t orbit_count(const FinPresentation& p, const AtomPool& pool)
{
  detail::require_group(p.sym, "orbit counting");
  Congruence cong(p, pool);
  const auto& elems = cong.elements();
  std::vector<std::size_t> parent(elems.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i)
      i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    unite(i, cong.class_of_index(i));
    for (auto& tau : enumerate_admissible(p.sym, ext_support(elems[i]), pool.atoms))
      unite(i, cong.index(act(RestrictedMap(p.sym, std::move(tau)), elems[i])));
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < elems.size(); ++i)
    n += root(i) == i;
  return n;
}

/// True iff every admissible map into the pool that fixes `s` pointwise
/// fixes the class of e.
inline bool supports_class(const Congruence& cong, SymmetryId sym, const ExtElem& e,
                           const Support& s)
{
  auto own = cong.class_of(e);
  for (auto& tau : enumerate_admissible(sym, ext_support(e), cong.pool().atoms)) {
    bool fixes = true;
    for (const auto& a : s)
      if (tau.at(a) != a) {
        fixes = false;
        break;
      }
    if (fixes && cong.class_of(act(RestrictedMap(sym, std::move(tau)), e)) != own)
      return false;
  }
  return true;
}

/// Least support of the class of e, by greedy removal from ext_support(e).
inline Support supp_of(const FinPresentation& p, const ExtElem& e, const AtomPool& pool)
{
  detail::require_group(p.sym, "least supports");
  check_pool(p, {e}, pool);
  // Order maps can only move an atom into an empty gap next to it, so give
  // each support atom fresh neighbours on both sides.
  AtomPool work = pool;
  if (p.sym == SymmetryId::TotalOrder)
    for (const auto& a : ext_support(e)) {
      const auto& v = pool.atoms.atoms();
      auto it = std::lower_bound(v.begin(), v.end(), a);
      auto next = std::next(it);
      work.atoms.insert(it == v.begin() ? a - 1 : (*std::prev(it) + a) / 2);
      work.atoms.insert(next == v.end() ? a + 1 : (a + *next) / 2);
    }
  Congruence cong(p, work);
  Support s = ext_support(e);
  for (const auto& a : ext_support(e)) {
    auto candidate = s;
    candidate.erase(a);
    if (supports_class(cong, p.sym, e, candidate))
      s = candidate;
  }
  return s;
}

/// An element of the presented nominal set, compared with quot_eq.
struct QuotElem {
  std::shared_ptr<const FinPresentation> presentation;
  ExtElem rep;
};

inline QuotElem act_quot(const GlobalMap& g, const QuotElem& q)
{
  return {q.presentation, act(g, q.rep)};
}

inline bool same_class(const QuotElem& a, const QuotElem& b)
{
  if (a.presentation != b.presentation)
    throw std::invalid_argument("elements of different presentations");
  const auto& p = *a.presentation;
  return quot_eq(p, a.rep, b.rep, default_pool(p, {a.rep, b.rep}));
}

/// The presented nominal set as a carrier; pools are chosen per query.
struct QuotCarrier {
  using value_type = ExtElem;
  std::shared_ptr<const FinPresentation> presentation;

  ExtElem act(const GlobalMap& g, const ExtElem& e) const { return nomset::act(g, e); }
  Support supp(const ExtElem& e) const
  {
    return supp_of(*presentation, e, default_pool(*presentation, {e}));
  }
  bool equal(const ExtElem& a, const ExtElem& b) const
  {
    return quot_eq(*presentation, a, b, default_pool(*presentation, {a, b}));
  }
};

/// The unordered-pairs presentation: one generator g with s(g) = {0, 1}
/// and the single equation (0 1).g = id.g.
inline FinPresentation unordered_pairs()
{
  SuppSet gens({{"g", {0, 1}}});
  const auto sym = SymmetryId::Equality;
  ExtElem swapped{RestrictedMap(sym, {{0, 1}, {1, 0}}), 0};
  ExtElem ident = unit(sym, gens, 0);
  return FinPresentation(sym, gens, {{swapped, ident}});
}

} // namespace nomset
