#pragma once

// Finite supported sets and supported maps, with the (co)limit, exponential,
// image and classifier constructions.

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "atoms.hpp"

namespace nomset {

struct SuppElement {
  std::string id;
  Support support;

  friend bool operator==(const SuppElement&, const SuppElement&) = default;
};

/// A finite carrier of named elements, each with its finite support.
class SuppSet {
public:
  SuppSet() = default;
  explicit SuppSet(std::vector<SuppElement> elements) : elements_(std::move(elements))
  {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (!index_.emplace(elements_[i].id, i).second)
        throw std::invalid_argument("duplicate element id '" + elements_[i].id + "'");
  }

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<SuppElement>& elements() const { return elements_; }
  const SuppElement& operator[](std::size_t i) const { return elements_.at(i); }
  const Support& support(std::size_t i) const { return elements_.at(i).support; }
  const std::string& id(std::size_t i) const { return elements_.at(i).id; }

  std::optional<std::size_t> find(const std::string& id) const
  {
    auto it = index_.find(id);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const std::string& id) const
  {
    auto i = find(id);
    if (!i)
      throw std::invalid_argument("unknown element id '" + id + "'");
    return *i;
  }

  /// Largest support size over all elements (0 when empty).
  std::size_t max_support_size() const
  {
    std::size_t m = 0;
    for (const auto& e : elements_)
      m = std::max(m, e.support.size());
    return m;
  }

  friend bool operator==(const SuppSet& a, const SuppSet& b) { return a.elements_ == b.elements_; }

private:
  std::vector<SuppElement> elements_;
  std::map<std::string, std::size_t> index_;
};

/// The terminal supported set: one element with empty support.
inline SuppSet terminal_set() { return SuppSet(std::vector<SuppElement>{{"*", {}}}); }

/// Truth values {0, 1}, both with empty support.
inline SuppSet two_set() { return SuppSet(std::vector<SuppElement>{{"0", {}}, {"1", {}}}); }

/// A function between supported sets with s_Y(f(x)) contained in s_X(x).
/// Construct through check_supported_map.
class SuppMap {
public:
  const SuppSet& source() const { return source_; }
  const SuppSet& target() const { return target_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t operator()(std::size_t x) const { return table_.at(x); }

  friend bool operator==(const SuppMap&, const SuppMap&) = default;

private:
  SuppMap(SuppSet source, SuppSet target, std::vector<std::size_t> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table))
  {}

  friend struct MapCheck check_supported_map(const std::vector<std::size_t>&, const SuppSet&,
                                             const SuppSet&);

  SuppSet source_;
  SuppSet target_;
  std::vector<std::size_t> table_;
};

struct Violation {
  std::size_t element;
  Support source_support;
  Support image_support;
};

/// Either a valid SuppMap or the elements at which supports grow.
struct MapCheck {
  std::optional<SuppMap> map;
  std::vector<Violation> violations;

  bool ok() const { return map.has_value(); }
  const SuppMap& value() const
  {
    if (!map) {
      std::string msg = "not a supported map; support grows at";
      for (const auto& v : violations)
        msg += " #" + std::to_string(v.element);
      throw std::invalid_argument(msg);
    }
    return *map;
  }
};

inline MapCheck check_supported_map(const std::vector<std::size_t>& table, const SuppSet& x,
                                    const SuppSet& y)
{
  if (table.size() != x.size())
    throw std::invalid_argument("function is not total on its source");
  MapCheck out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= y.size())
      throw std::invalid_argument("function leaves its target");
    if (!y.support(table[i]).subset_of(x.support(i)))
      out.violations.push_back({i, x.support(i), y.support(table[i])});
  }
  if (out.violations.empty())
    out.map = SuppMap(x, y, table);
  return out;
}

/// Convenience overload keyed by element ids.
inline MapCheck check_supported_map(const std::map<std::string, std::string>& mapping,
                                    const SuppSet& x, const SuppSet& y)
{
  std::vector<std::size_t> table(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = mapping.find(x.id(i));
    if (it == mapping.end())
      throw std::invalid_argument("function undefined at '" + x.id(i) + "'");
    table[i] = y.index_of(it->second);
  }
  return check_supported_map(table, x, y);
}

inline SuppMap identity_map(const SuppSet& x)
{
  std::vector<std::size_t> table(x.size());
  std::iota(table.begin(), table.end(), 0);
  return check_supported_map(table, x, x).value();
}

inline SuppMap compose(const SuppMap& g, const SuppMap& f)
{
  if (!(f.target() == g.source()))
    throw std::invalid_argument("maps are not composable");
  std::vector<std::size_t> table(f.source().size());
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = g(f(i));
  return check_supported_map(table, f.source(), g.target()).value();
}

inline bool is_injective(const SuppMap& f)
{
  std::vector<bool> hit(f.target().size(), false);
  for (auto y : f.table()) {
    if (hit[y])
      return false;
    hit[y] = true;
  }
  return true;
}

inline bool is_surjective(const SuppMap& f)
{
  std::vector<bool> hit(f.target().size(), false);
  for (auto y : f.table())
    hit[y] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline bool is_support_reflecting(const SuppMap& f)
{
  for (std::size_t i = 0; i < f.source().size(); ++i)
    if (f.target().support(f(i)) != f.source().support(i))
      return false;
  return true;
}

/// Isomorphisms are exactly the support-reflecting bijections.
inline bool is_iso(const SuppMap& f)
{
  return is_injective(f) && is_surjective(f) && is_support_reflecting(f);
}

struct Product {
  SuppSet set;
  SuppMap first;
  SuppMap second;
};

inline Product product(const SuppSet& x, const SuppSet& y)
{
  std::vector<SuppElement> elems;
  std::vector<std::size_t> p1, p2;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      elems.push_back({"(" + x.id(i) + "," + y.id(j) + ")", x.support(i) | y.support(j)});
      p1.push_back(i);
      p2.push_back(j);
    }
  SuppSet prod(std::move(elems));
  return {prod, check_supported_map(p1, prod, x).value(),
          check_supported_map(p2, prod, y).value()};
}

struct Coproduct {
  SuppSet set;
  SuppMap left;
  SuppMap right;
};

inline Coproduct coproduct(const SuppSet& x, const SuppSet& y)
{
  std::vector<SuppElement> elems;
  std::vector<std::size_t> in1, in2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    in1.push_back(elems.size());
    elems.push_back({"inl:" + x.id(i), x.support(i)});
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    in2.push_back(elems.size());
    elems.push_back({"inr:" + y.id(j), y.support(j)});
  }
  SuppSet sum(std::move(elems));
  return {sum, check_supported_map(in1, x, sum).value(),
          check_supported_map(in2, y, sum).value()};
}

struct Quotient {
  SuppSet set;
  SuppMap projection;
  /// For each class, the member element indices of the target.
  std::vector<std::vector<std::size_t>> classes;
};

/// Quotient of the common target by the equivalence generated by
/// f(r) ~ g(r). Each class is named by its least member and supported by
/// the intersection of its members' supports.
inline Quotient coequalizer(const SuppMap& f, const SuppMap& g)
{
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw std::invalid_argument("coequalizer needs parallel maps");
  const auto& x = f.target();
  std::vector<std::size_t> parent(x.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i)
      i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t r = 0; r < f.source().size(); ++r) {
    auto a = find(f(r));
    auto b = find(g(r));
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::size_t> class_of_root;
  Quotient q{{}, identity_map(SuppSet{}), {}};
  std::vector<SuppElement> elems;
  std::vector<std::size_t> table(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto root = find(i);
    auto [it, fresh_class] = class_of_root.emplace(root, elems.size());
    if (fresh_class) {
      elems.push_back({x.id(i), x.support(i)}); // i is the least member
      q.classes.emplace_back();
    } else {
      elems[it->second].support = elems[it->second].support & x.support(i);
    }
    q.classes[it->second].push_back(i);
    table[i] = it->second;
  }
  q.set = SuppSet(std::move(elems));
  q.projection = check_supported_map(table, x, q.set).value();
  return q;
}

struct Subobject {
  SuppSet set;
  SuppMap inclusion;
};

inline Subobject equalizer(const SuppMap& f, const SuppMap& g)
{
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw std::invalid_argument("equalizer needs parallel maps");
  const auto& x = f.source();
  std::vector<SuppElement> elems;
  std::vector<std::size_t> table;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (f(i) == g(i)) {
      elems.push_back(x[i]);
      table.push_back(i);
    }
  SuppSet sub(std::move(elems));
  return {sub, check_supported_map(table, sub, x).value()};
}

struct Exponential {
  SuppSet set;
  /// functions[k][e] is the image of exponent element e under function k.
  std::vector<std::vector<std::size_t>> functions;
};

/// Support of a function E -> X: the union over e of s_X(f(e)) \ s_E(e).
inline Support function_support(const SuppSet& e, const SuppSet& x,
                                const std::vector<std::size_t>& f)
{
  Support s;
  for (std::size_t i = 0; i < e.size(); ++i)
    s = s | (x.support(f[i]) - e.support(i));
  return s;
}

inline Exponential exponential(const SuppSet& e, const SuppSet& x)
{
  Exponential out;
  std::vector<SuppElement> elems;
  std::vector<std::size_t> f(e.size(), 0);
  if (!e.empty() && x.empty()) {
    out.set = SuppSet{};
    return out;
  }
  while (true) {
    std::string id = "[";
    for (std::size_t i = 0; i < f.size(); ++i)
      id += (i ? "," : "") + e.id(i) + "->" + x.id(f[i]);
    id += "]";
    elems.push_back({id, function_support(e, x, f)});
    out.functions.push_back(f);
    std::size_t k = 0;
    while (k < f.size() && ++f[k] == x.size())
      f[k++] = 0;
    if (k == f.size())
      break;
  }
  out.set = SuppSet(std::move(elems));
  return out;
}

/// The characteristic map of a regular (support-reflecting) mono.
inline SuppMap classify_regular_subobject(const SuppMap& m)
{
  if (!is_injective(m))
    throw std::invalid_argument("subobject is not injective");
  if (!is_support_reflecting(m))
    throw std::invalid_argument("subobject is not support-reflecting");
  std::vector<std::size_t> chi(m.target().size(), 0);
  for (auto y : m.table())
    chi[y] = 1;
  return check_supported_map(chi, m.target(), two_set()).value();
}

/// The map 1 -> 2 picking true.
inline SuppMap true_map()
{
  return check_supported_map(std::vector<std::size_t>{1}, terminal_set(), two_set()).value();
}

enum class ImageSupport {
  /// Each image point supported by the intersection over its fibre (the
  /// regular-epi half of the factorization).
  Intersection,
  /// Each image point keeps its support in the target (the regular-mono half).
  Inherited,
};

struct ImageFactorization {
  SuppSet image;
  SuppMap epi;
  SuppMap mono;
};

inline ImageFactorization image_factorization(const SuppMap& f, ImageSupport mode)
{
  std::map<std::size_t, std::size_t> slot;
  std::vector<SuppElement> elems;
  std::vector<std::size_t> epi(f.source().size()), mono;
  for (std::size_t i = 0; i < f.source().size(); ++i) {
    auto y = f(i);
    auto [it, inserted] = slot.emplace(y, elems.size());
    if (inserted) {
      elems.push_back({f.target().id(y), mode == ImageSupport::Inherited
                                             ? f.target().support(y)
                                             : f.source().support(i)});
      mono.push_back(y);
    } else if (mode == ImageSupport::Intersection) {
      elems[it->second].support = elems[it->second].support & f.source().support(i);
    }
    epi[i] = it->second;
  }
  SuppSet img(std::move(elems));
  auto e = check_supported_map(epi, f.source(), img).value();
  // With intersected supports the mono may enlarge supports; report it.
  auto m = check_supported_map(mono, img, f.target());
  if (!m.ok())
    throw std::logic_error("image factorization produced an unsupported map");
  return {img, e, m.value()};
}

/// Support of a finite subset: the union of member supports.
inline Support pf_support(const SuppSet& x, const std::vector<std::size_t>& members)
{
  Support s;
  for (auto i : members)
    s = s | x.support(i);
  return s;
}

/// A possibly infinite family of supports: explicitly listed members, plus
/// optionally every permutation image of a pattern support (one orbit).
struct SupportFamily {
  std::vector<Support> members;
  std::optional<Support> orbit_of;
};

/// Union of member supports, or nullopt when that union is infinite.
inline std::optional<Support> ufs_support(const SupportFamily& family)
{
  if (family.orbit_of && !family.orbit_of->empty())
    return std::nullopt;
  Support s;
  for (const auto& m : family.members)
    s = s | m;
  return s;
}

} // namespace nomset
