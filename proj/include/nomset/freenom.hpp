#pragma once

// The free nominal M-set Ext X on a supported set: restricted maps [m]_S,
// the action, unit, functorial action, universal extension and
// multiplication of the monad.

#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "atoms.hpp"
#include "suppset.hpp"

namespace nomset {

/// Canonical representative of [m]_S: the pointwise restriction m|_S.
class RestrictedMap {
public:
  RestrictedMap() = default;
  RestrictedMap(SymmetryId sym, FiniteMap images) : sym_(sym), images_(std::move(images))
  {
    if (!is_admissible(sym_, images_))
      throw std::invalid_argument("restriction " + to_string(images_) +
                                  " is not admissible for the " +
                                  std::string(to_string(sym_)) + " symmetry");
  }

  static RestrictedMap identity(SymmetryId sym, const Support& s)
  {
    return RestrictedMap(sym, restrict_map(GlobalMap::identity(sym), s));
  }

  SymmetryId symmetry() const { return sym_; }
  const FiniteMap& images() const { return images_; }
  Support domain() const { return domain_of(images_); }
  Support image() const { return image_of(images_); }

  const Atom& operator()(const Atom& a) const
  {
    auto it = images_.find(a);
    if (it == images_.end())
      throw std::out_of_range("atom " + a.str() + " outside the restriction domain");
    return it->second;
  }

  RestrictedMap restricted_to(const Support& s) const
  {
    FiniteMap out;
    for (const auto& a : s)
      out.emplace(a, (*this)(a));
    return RestrictedMap(sym_, std::move(out));
  }

  /// Some global element restricting to this map.
  GlobalMap global() const { return extend_to_global(sym_, images_); }

  friend bool operator==(const RestrictedMap&, const RestrictedMap&) = default;
  friend auto operator<=>(const RestrictedMap& a, const RestrictedMap& b)
  {
    return a.images_ <=> b.images_;
  }

private:
  SymmetryId sym_ = SymmetryId::Equality;
  FiniteMap images_;
};

/// outer . inner, pointwise; outer must be defined on inner's image.
inline RestrictedMap then(const RestrictedMap& inner, const RestrictedMap& outer)
{
  if (inner.symmetry() != outer.symmetry())
    throw std::invalid_argument("restricted maps of different symmetries");
  FiniteMap out;
  for (const auto& [a, b] : inner.images())
    out.emplace(a, outer(b));
  return RestrictedMap(inner.symmetry(), std::move(out));
}

inline RestrictedMap restrict(const GlobalMap& g, const Support& s)
{
  return RestrictedMap(g.symmetry(), restrict_map(g, s));
}

/// An element ([m]_{s(x)}, x) of Ext X; `base` indexes into X.
struct ExtElem {
  RestrictedMap pi;
  std::size_t base = 0;

  friend bool operator==(const ExtElem&, const ExtElem&) = default;
  friend auto operator<=>(const ExtElem& a, const ExtElem& b)
  {
    if (auto c = a.base <=> b.base; c != 0)
      return c;
    return a.pi <=> b.pi;
  }
};

inline ExtElem make_ext(const SuppSet& x, std::size_t base, RestrictedMap pi)
{
  if (base >= x.size())
    throw std::invalid_argument("base element out of range");
  if (pi.domain() != x.support(base))
    throw std::invalid_argument("restriction domain " + pi.domain().str() +
                                " differs from the support " + x.support(base).str() +
                                " of '" + x.id(base) + "'");
  return {std::move(pi), base};
}

inline Support ext_support(const ExtElem& e) { return e.pi.image(); }

inline ExtElem act(const GlobalMap& g, const ExtElem& e)
{
  if (g.symmetry() != e.pi.symmetry())
    throw std::invalid_argument("action by a map of a different symmetry");
  FiniteMap out;
  for (const auto& [a, b] : e.pi.images())
    out.emplace(a, g.apply(b));
  return {RestrictedMap(e.pi.symmetry(), std::move(out)), e.base};
}

/// Action by any admissible map defined on the element's support.
inline ExtElem act(const RestrictedMap& g, const ExtElem& e) { return {then(e.pi, g), e.base}; }

inline ExtElem unit(SymmetryId sym, const SuppSet& x, std::size_t i)
{
  return {RestrictedMap::identity(sym, x.support(i)), i};
}

inline ExtElem ext_map(const SuppMap& f, const ExtElem& e)
{
  auto y = f(e.base);
  return {e.pi.restricted_to(f.target().support(y)), y};
}

/// Monad multiplication on the canonical pair (outer, e) of Ext Ext X.
inline ExtElem mult(const RestrictedMap& outer, const ExtElem& e)
{
  if (outer.domain() != ext_support(e))
    throw std::invalid_argument("outer restriction is not defined on the element's support");
  return {then(e.pi, outer), e.base};
}

/// Every (pi, x) with pi admissible from s(x) into the pool.
inline std::vector<ExtElem> ext_enumerate(SymmetryId sym, const SuppSet& x, const Support& pool)
{
  std::vector<ExtElem> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (auto& p : enumerate_admissible(sym, x.support(i), pool))
      out.push_back({RestrictedMap(sym, std::move(p)), i});
  return out;
}

/// Values with decidable equality, an action of global maps and a support.
template <class C>
concept NominalCarrier = requires(const C& c, const typename C::value_type& v,
                                  const GlobalMap& g) {
  { c.act(g, v) } -> std::convertible_to<typename C::value_type>;
  { c.supp(v) } -> std::convertible_to<Support>;
  { c.equal(v, v) } -> std::convertible_to<bool>;
};

/// Ext Y itself as a carrier, for extensions into free nominal sets.
struct ExtCarrier {
  using value_type = ExtElem;
  const SuppSet* set = nullptr;

  ExtElem act(const GlobalMap& g, const ExtElem& e) const { return nomset::act(g, e); }
  Support supp(const ExtElem& e) const { return ext_support(e); }
  bool equal(const ExtElem& a, const ExtElem& b) const { return a == b; }
};

struct ExtendViolation {
  std::size_t element;
  Support element_support;
  Support value_support;
};

class ExtendPreconditionError : public std::invalid_argument {
public:
  explicit ExtendPreconditionError(std::vector<ExtendViolation> violations)
      : std::invalid_argument(describe(violations)), violations_(std::move(violations))
  {}
  const std::vector<ExtendViolation>& violations() const { return violations_; }

private:
  static std::string describe(const std::vector<ExtendViolation>& vs)
  {
    std::string msg = "value support exceeds element support at";
    for (const auto& v : vs)
      msg += " #" + std::to_string(v.element) + " (" + v.value_support.str() + " vs " +
             v.element_support.str() + ")";
    return msg;
  }
  std::vector<ExtendViolation> violations_;
};

/// The equivariant map Ext X -> V extending f along unit: (pi, x) goes to
/// m . f(x) for any global m restricting to pi. Two different global
/// completions are tried; a disagreement is an internal error.
template <NominalCarrier C, class F>
  requires std::invocable<const F&, std::size_t>
class Extension {
public:
  using value_type = typename C::value_type;

  Extension(C carrier, const SuppSet& x, F f)
      : carrier_(std::move(carrier)), x_(x), f_(std::move(f))
  {
    std::vector<ExtendViolation> bad;
    values_.reserve(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      values_.push_back(f_(i));
      auto s = carrier_.supp(values_.back());
      if (!s.subset_of(x_.support(i)))
        bad.push_back({i, x_.support(i), s});
    }
    if (!bad.empty())
      throw ExtendPreconditionError(std::move(bad));
  }

  value_type operator()(const ExtElem& e) const
  {
    const auto& base = values_.at(e.base);
    auto sym = e.pi.symmetry();
    auto v1 = carrier_.act(extend_to_global(sym, e.pi.images()), base);
    auto v2 = carrier_.act(extend_to_global_alt(sym, e.pi.images()), base);
    if (!carrier_.equal(v1, v2))
      throw std::logic_error("extension depends on the chosen global representative");
    return v1;
  }

  const C& carrier() const { return carrier_; }

private:
  C carrier_;
  SuppSet x_;
  F f_;
  std::vector<value_type> values_;
};

template <NominalCarrier C, class F>
typename C::value_type extend(const C& carrier, const SuppSet& x, const F& f, const ExtElem& e)
{
  return Extension<C, F>(carrier, x, f)(e);
}

} // namespace nomset
