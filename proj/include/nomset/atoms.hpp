#pragma once

// Atoms, supports and the three symmetries (finite permutations, order
// automorphisms of Q, finite renamings), with materialized monoid elements.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace nomset {

enum class SymmetryId { Equality, TotalOrder, Renaming };

inline std::string_view to_string(SymmetryId sym)
{
  switch (sym) {
  case SymmetryId::Equality: return "equality";
  case SymmetryId::TotalOrder: return "order";
  case SymmetryId::Renaming: return "renaming";
  }
  return "?";
}

inline SymmetryId parse_symmetry(std::string_view name)
{
  if (name == "equality" || name == "eq")
    return SymmetryId::Equality;
  if (name == "order" || name == "total-order" || name == "totalorder")
    return SymmetryId::TotalOrder;
  if (name == "renaming" || name == "fin")
    return SymmetryId::Renaming;
  throw std::invalid_argument("unknown symmetry '" + std::string(name) + "'");
}

inline bool is_group(SymmetryId sym) { return sym != SymmetryId::Renaming; }

/// A data value: a natural number (equality / renaming symmetries) or an
/// exact rational in lowest terms (order symmetry). Naturals are the
/// rationals with denominator one, so rho(k) is the atom k.
class Atom {
public:
  using rational = boost::rational<std::int64_t>;

  Atom() = default;
  Atom(std::int64_t n) : value_(n) {} // NOLINT(google-explicit-constructor)
  Atom(std::int64_t num, std::int64_t den) : value_(num, den) {}
  explicit Atom(rational r) : value_(r) {}

  const rational& value() const { return value_; }
  std::int64_t numerator() const { return value_.numerator(); }
  std::int64_t denominator() const { return value_.denominator(); }

  bool is_integer() const { return value_.denominator() == 1; }
  bool is_natural() const { return is_integer() && value_.numerator() >= 0; }

  /// The k with rho(k) == *this; only meaningful for naturals.
  std::uint64_t index() const
  {
    if (!is_natural())
      throw std::domain_error("atom " + str() + " is not a natural number");
    return static_cast<std::uint64_t>(value_.numerator());
  }

  std::string str() const
  {
    if (is_integer())
      return std::to_string(value_.numerator());
    return std::to_string(value_.numerator()) + "/" +
           std::to_string(value_.denominator());
  }

  static Atom parse(std::string_view text)
  {
    auto to_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty())
        throw std::invalid_argument("malformed atom '" + std::string(text) + "'");
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(std::string(s), &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("malformed atom '" + std::string(text) + "'");
      }
      if (used != s.size())
        throw std::invalid_argument("malformed atom '" + std::string(text) + "'");
      return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
      return Atom(to_int(text));
    auto den = to_int(text.substr(slash + 1));
    if (den == 0)
      throw std::invalid_argument("zero denominator in atom '" + std::string(text) + "'");
    return Atom(to_int(text.substr(0, slash)), den);
  }

  friend bool operator==(const Atom& a, const Atom& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b)
  {
    if (a.value_ < b.value_)
      return std::strong_ordering::less;
    if (b.value_ < a.value_)
      return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Atom operator+(const Atom& a, const Atom& b) { return Atom(a.value_ + b.value_); }
  friend Atom operator-(const Atom& a, const Atom& b) { return Atom(a.value_ - b.value_); }
  friend Atom operator*(const Atom& a, const Atom& b) { return Atom(a.value_ * b.value_); }
  friend Atom operator/(const Atom& a, const Atom& b) { return Atom(a.value_ / b.value_); }

  friend std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.str(); }

private:
  rational value_{0};
};

inline Atom abs(const Atom& a) { return a < Atom(0) ? Atom(0) - a : a; }

inline bool in_domain(SymmetryId sym, const Atom& a)
{
  return sym == SymmetryId::TotalOrder || a.is_natural();
}

/// A finite set of atoms in canonical (sorted, duplicate free) order.
class Support {
public:
  using const_iterator = std::vector<Atom>::const_iterator;

  Support() = default;
  Support(std::initializer_list<Atom> atoms) : atoms_(atoms) { normalize(); }
  explicit Support(std::vector<Atom> atoms) : atoms_(std::move(atoms)) { normalize(); }

  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const Atom& min() const { return atoms_.front(); }
  const Atom& max() const { return atoms_.back(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  bool contains(const Atom& a) const
  {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
  }

  void insert(const Atom& a)
  {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a)
      atoms_.insert(it, a);
  }

  void erase(const Atom& a)
  {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it != atoms_.end() && *it == a)
      atoms_.erase(it);
  }

  bool subset_of(const Support& other) const
  {
    return std::includes(other.atoms_.begin(), other.atoms_.end(), atoms_.begin(),
                         atoms_.end());
  }

  friend Support operator|(const Support& a, const Support& b)
  {
    Support out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.atoms_));
    return out;
  }
  friend Support operator&(const Support& a, const Support& b)
  {
    Support out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out.atoms_));
    return out;
  }
  friend Support operator-(const Support& a, const Support& b)
  {
    Support out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out.atoms_));
    return out;
  }

  friend bool operator==(const Support&, const Support&) = default;
  friend auto operator<=>(const Support&, const Support&) = default;

  std::string str() const
  {
    std::string out = "{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i)
        out += ",";
      out += atoms_[i].str();
    }
    return out + "}";
  }

  friend std::ostream& operator<<(std::ostream& os, const Support& s) { return os << s.str(); }

private:
  void normalize()
  {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  }

  std::vector<Atom> atoms_;
};

/// A finite partial map of atoms; its domain is its key set.
using FiniteMap = std::map<Atom, Atom>;

inline Support domain_of(const FiniteMap& p)
{
  Support s;
  for (const auto& [k, v] : p)
    s.insert(k);
  return s;
}

inline Support image_of(const FiniteMap& p)
{
  Support s;
  for (const auto& [k, v] : p)
    s.insert(v);
  return s;
}

inline std::string to_string(const FiniteMap& p)
{
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : p) {
    if (!first)
      out += ", ";
    first = false;
    out += k.str() + "->" + v.str();
  }
  return out + "}";
}

inline void check_domain(SymmetryId sym, const Atom& a)
{
  if (!in_domain(sym, a))
    throw std::invalid_argument("atom " + a.str() + " is outside the " +
                                std::string(to_string(sym)) + " atom domain");
}

/// True iff p is the restriction of some element of the symmetry's monoid.
inline bool is_admissible(SymmetryId sym, const FiniteMap& p)
{
  for (const auto& [k, v] : p) {
    check_domain(sym, k);
    check_domain(sym, v);
  }
  switch (sym) {
  case SymmetryId::Renaming:
    return true;
  case SymmetryId::Equality:
    return image_of(p).size() == p.size();
  case SymmetryId::TotalOrder: {
    const Atom* prev = nullptr;
    for (const auto& [k, v] : p) { // keys ascend
      if (prev && !(*prev < v))
        return false;
      prev = &v;
    }
    return true;
  }
  }
  return false;
}

/// A materialized monoid element.
///
/// Equality: a finite permutation, stored as its non-fixed points.
/// Renaming: a finite-support function, stored as its non-fixed points.
/// TotalOrder: a strictly increasing piecewise-linear bijection of Q, stored
/// as canonical breakpoints; beyond the outermost breakpoints it continues
/// with slope one, so maps built by this library have identity tails.
class GlobalMap {
public:
  GlobalMap() = default;

  static GlobalMap identity(SymmetryId sym) { return GlobalMap(sym, {}); }

  /// Validates and canonicalizes raw entries (see class comment).
  static GlobalMap from_entries(SymmetryId sym, FiniteMap entries)
  {
    for (const auto& [k, v] : entries) {
      check_domain(sym, k);
      check_domain(sym, v);
    }
    switch (sym) {
    case SymmetryId::Equality:
      if (image_of(entries) != domain_of(entries))
        throw std::invalid_argument("entries do not form a permutation");
      break;
    case SymmetryId::TotalOrder:
      if (!is_admissible(sym, entries))
        throw std::invalid_argument("breakpoints are not strictly increasing");
      break;
    case SymmetryId::Renaming:
      break;
    }
    return GlobalMap(sym, std::move(entries));
  }

  static GlobalMap transposition(SymmetryId sym, const Atom& a, const Atom& b)
  {
    if (sym == SymmetryId::TotalOrder)
      throw std::invalid_argument("transpositions are not order automorphisms");
    if (a == b)
      return identity(sym);
    return from_entries(sym, {{a, b}, {b, a}});
  }

  SymmetryId symmetry() const { return sym_; }
  const FiniteMap& entries() const { return entries_; }
  bool is_identity() const { return entries_.empty(); }

  std::string_view kind() const
  {
    switch (sym_) {
    case SymmetryId::Equality: return "perm";
    case SymmetryId::TotalOrder: return "pwl";
    case SymmetryId::Renaming: return "finmap";
    }
    return "?";
  }

  Atom apply(const Atom& a) const
  {
    if (sym_ != SymmetryId::TotalOrder) {
      auto it = entries_.find(a);
      return it == entries_.end() ? a : it->second;
    }
    return interpolate(entries_, a);
  }

  Atom operator()(const Atom& a) const { return apply(a); }

  /// Points where the map may differ from the identity, plus every
  /// breakpoint for the order symmetry.
  Support carrier() const
  {
    Support s;
    for (const auto& [k, v] : entries_) {
      s.insert(k);
      s.insert(v);
    }
    return s;
  }

  GlobalMap inverse() const
  {
    if (sym_ == SymmetryId::Renaming)
      throw std::invalid_argument("renamings are not invertible in general");
    FiniteMap inv;
    for (const auto& [k, v] : entries_)
      inv.emplace(v, k);
    return GlobalMap(sym_, std::move(inv));
  }

  friend bool operator==(const GlobalMap&, const GlobalMap&) = default;

  std::string str() const { return std::string(kind()) + to_string(entries_); }

private:
  GlobalMap(SymmetryId sym, FiniteMap entries) : sym_(sym), entries_(std::move(entries))
  {
    canonicalize();
  }

  static Atom interpolate(const FiniteMap& pts, const Atom& a)
  {
    if (pts.empty())
      return a;
    auto hi = pts.lower_bound(a);
    if (hi != pts.end() && hi->first == a)
      return hi->second;
    if (hi == pts.begin())
      return a + (hi->second - hi->first);
    auto lo = std::prev(hi);
    if (hi == pts.end())
      return a + (lo->second - lo->first);
    auto slope = (hi->second - lo->second) / (hi->first - lo->first);
    return lo->second + slope * (a - lo->first);
  }

  void canonicalize()
  {
    if (sym_ != SymmetryId::TotalOrder) {
      std::erase_if(entries_, [](const auto& kv) { return kv.first == kv.second; });
      return;
    }
    // Drop breakpoints that do not change the interpolant.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        FiniteMap without = entries_;
        without.erase(it->first);
        if (interpolate(without, it->first) == it->second) {
          entries_ = std::move(without);
          changed = true;
          break;
        }
      }
    }
  }

  SymmetryId sym_ = SymmetryId::Equality;
  FiniteMap entries_;
};

inline std::ostream& operator<<(std::ostream& os, const GlobalMap& g) { return os << g.str(); }

/// apply(compose(g, h), a) == apply(g, apply(h, a)).
inline GlobalMap compose(const GlobalMap& g, const GlobalMap& h)
{
  if (g.symmetry() != h.symmetry())
    throw std::invalid_argument("cannot compose maps of different symmetries");
  const auto sym = g.symmetry();
  FiniteMap out;
  if (sym != SymmetryId::TotalOrder) {
    for (const auto& a : g.carrier() | h.carrier())
      out.emplace(a, g.apply(h.apply(a)));
    return GlobalMap::from_entries(sym, std::move(out));
  }
  // Breakpoints of g.h: those of h and the h-preimages of those of g.
  Support xs;
  for (const auto& [k, v] : h.entries())
    xs.insert(k);
  auto h_inv = h.inverse();
  for (const auto& [k, v] : g.entries())
    xs.insert(h_inv.apply(k));
  for (const auto& x : xs)
    out.emplace(x, g.apply(h.apply(x)));
  return GlobalMap::from_entries(sym, std::move(out));
}

inline GlobalMap operator*(const GlobalMap& g, const GlobalMap& h) { return compose(g, h); }

inline FiniteMap restrict_map(const GlobalMap& g, const Support& s)
{
  FiniteMap out;
  for (const auto& a : s)
    out.emplace(a, g.apply(a));
  return out;
}

namespace detail {

inline Atom smallest_natural_outside(const Support& avoid)
{
  std::int64_t n = 0;
  while (avoid.contains(Atom(n)))
    ++n;
  return Atom(n);
}

inline FiniteMap anchored_breakpoints(const FiniteMap& p, const Atom& margin)
{
  FiniteMap pts = p;
  if (p.empty())
    return pts;
  Support all = domain_of(p) | image_of(p);
  auto lo = all.min() - margin;
  auto hi = all.max() + margin;
  pts.emplace(lo, lo);
  pts.emplace(hi, hi);
  return pts;
}

} // namespace detail

/// A global monoid element whose restriction to dom(p) is p. The completion
/// is deterministic: unmatched image points are sent back to unmatched
/// domain points in sorted order (equality), breakpoints are anchored by
/// fixed points one unit outside (order), identity elsewhere (renaming).
inline GlobalMap extend_to_global(SymmetryId sym, const FiniteMap& p)
{
  if (!is_admissible(sym, p))
    throw std::invalid_argument("map " + to_string(p) + " is not admissible for the " +
                                std::string(to_string(sym)) + " symmetry");
  switch (sym) {
  case SymmetryId::Renaming:
    return GlobalMap::from_entries(sym, p);
  case SymmetryId::Equality: {
    auto dom = domain_of(p);
    auto img = image_of(p);
    auto open_targets = img - dom; // need a preimage
    auto open_sources = dom - img; // need to be hit
    FiniteMap full = p;
    for (std::size_t i = 0; i < open_targets.size(); ++i)
      full.emplace(open_targets[i], open_sources[i]);
    return GlobalMap::from_entries(sym, std::move(full));
  }
  case SymmetryId::TotalOrder:
    return GlobalMap::from_entries(sym, detail::anchored_breakpoints(p, Atom(1)));
  }
  throw std::logic_error("unreachable");
}

/// A second, deliberately different completion of p. Used to check that
/// results depending only on the restriction do not depend on the choice.
inline GlobalMap extend_to_global_alt(SymmetryId sym, const FiniteMap& p)
{
  if (!is_admissible(sym, p))
    throw std::invalid_argument("map " + to_string(p) + " is not admissible");
  switch (sym) {
  case SymmetryId::Renaming: {
    FiniteMap full = p;
    auto spare = detail::smallest_natural_outside(domain_of(p) | image_of(p));
    full.emplace(spare, p.empty() ? Atom(spare.numerator() + 1) : p.begin()->first);
    return GlobalMap::from_entries(sym, std::move(full));
  }
  case SymmetryId::Equality: {
    auto dom = domain_of(p);
    auto img = image_of(p);
    auto open_targets = img - dom;
    auto open_sources = dom - img;
    FiniteMap full = p;
    const auto n = open_targets.size();
    for (std::size_t i = 0; i < n; ++i)
      full.emplace(open_targets[i], open_sources[n - 1 - i]);
    // Also move two atoms far away from everything.
    auto used = dom | img;
    auto x = detail::smallest_natural_outside(used);
    used.insert(x);
    auto y = detail::smallest_natural_outside(used);
    full.emplace(x, y);
    full.emplace(y, x);
    return GlobalMap::from_entries(sym, std::move(full));
  }
  case SymmetryId::TotalOrder: {
    FiniteMap pts = p;
    for (auto it = p.begin(); it != p.end() && std::next(it) != p.end(); ++it) {
      auto nx = std::next(it);
      auto xm = (it->first + nx->first) / Atom(2);
      auto ym = it->second + (nx->second - it->second) / Atom(3);
      pts.emplace(xm, ym);
    }
    return GlobalMap::from_entries(sym, detail::anchored_breakpoints(pts, Atom(2)));
  }
  }
  throw std::logic_error("unreachable");
}

/// An atom outside `avoid`: the smallest natural (equality, renaming) or
/// max(avoid) + 1, defaulting to 0 (order).
inline Atom fresh(SymmetryId sym, const Support& avoid)
{
  if (sym != SymmetryId::TotalOrder)
    return detail::smallest_natural_outside(avoid);
  if (avoid.empty())
    return Atom(0);
  return avoid.max() + Atom(1);
}

/// An element fixing every atom of `fixed` and moving `a`.
inline GlobalMap lock_free_witness(SymmetryId sym, const Support& fixed, const Atom& a)
{
  check_domain(sym, a);
  if (fixed.contains(a))
    throw std::invalid_argument("atom " + a.str() + " lies in the fixed set");
  if (sym != SymmetryId::TotalOrder) {
    auto avoid = fixed;
    avoid.insert(a);
    return GlobalMap::transposition(sym, a, detail::smallest_natural_outside(avoid));
  }
  Atom b = a + Atom(1);
  if (!fixed.empty()) {
    Atom dist = abs(a - fixed[0]);
    for (const auto& x : fixed)
      dist = std::min(dist, abs(a - x));
    b = a + dist / Atom(2);
  }
  FiniteMap pts;
  for (const auto& x : fixed)
    pts.emplace(x, x);
  pts.emplace(a, b);
  return GlobalMap::from_entries(sym, detail::anchored_breakpoints(pts, Atom(1)));
}

/// All admissible maps from `dom` into `pool` in lexicographic order of
/// their image tuples (pool taken in sorted order).
inline std::vector<FiniteMap> enumerate_admissible(SymmetryId sym, const Support& dom,
                                                   const Support& pool)
{
  std::vector<FiniteMap> out;
  std::vector<std::size_t> choice(dom.size(), 0);
  std::vector<bool> used(pool.size(), false);
  FiniteMap current;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == dom.size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (sym != SymmetryId::Renaming && used[j])
        continue;
      if (sym == SymmetryId::TotalOrder && i > 0 && !(pool[choice[i - 1]] < pool[j]))
        continue;
      choice[i] = j;
      used[j] = true;
      current[dom[i]] = pool[j];
      rec(i + 1);
      used[j] = false;
      current.erase(dom[i]);
    }
  };
  rec(0);
  return out;
}

} // namespace nomset
