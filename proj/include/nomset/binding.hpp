#pragma once

// Name binding two ways: the de Bruijn support transformer on supported
// sets and nominal abstraction, related by the isomorphism phi. Lambda
// terms serve as the running carrier.

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atoms.hpp"
#include "freenom.hpp"

namespace nomset {

// --- support transformer -------------------------------------------------

/// {k | k+1 in s}: the support of a term under one de Bruijn binder.
inline Support b_support(const Support& s)
{
  Support out;
  for (const auto& a : s)
    if (a.index() > 0)
      out.insert(Atom(static_cast<std::int64_t>(a.index() - 1)));
  return out;
}

/// 1 + the largest index in s; 0 for the empty support.
inline std::uint64_t maxidx(const Support& s)
{
  std::uint64_t m = 0;
  for (const auto& a : s)
    m = std::max(m, a.index() + 1);
  return m;
}

/// The cycle (0 1 ... m): l -> l+1 below m, m -> 0.
inline GlobalMap sigma(std::uint64_t m)
{
  FiniteMap cycle;
  for (std::uint64_t l = 0; l < m; ++l)
    cycle.emplace(Atom(static_cast<std::int64_t>(l)), Atom(static_cast<std::int64_t>(l + 1)));
  cycle.emplace(Atom(static_cast<std::int64_t>(m)), Atom(0));
  return GlobalMap::from_entries(SymmetryId::Equality, std::move(cycle));
}

/// The de Bruijn binder on a supported set: same elements, shifted supports.
inline SuppSet b_functor(const SuppSet& x)
{
  std::vector<SuppElement> elems;
  for (const auto& e : x.elements())
    elems.push_back({"\\." + e.id, b_support(e.support)});
  return SuppSet(std::move(elems));
}

// --- named terms ----------------------------------------------------------

class NamedTerm {
public:
  enum class Kind { Var, App, Lam };

  NamedTerm() = default;

  static NamedTerm var(Atom a);
  static NamedTerm app(NamedTerm f, NamedTerm x);
  static NamedTerm lam(Atom binder, NamedTerm body);

  Kind kind() const;
  /// Variable name or binder.
  const Atom& atom() const;
  const NamedTerm& fun() const;
  const NamedTerm& arg() const;
  const NamedTerm& body() const;

  /// Raw structural equality (not alpha-equivalence).
  friend bool operator==(const NamedTerm& a, const NamedTerm& b)
  {
    if (a.node_ == b.node_)
      return true;
    if (a.kind() != b.kind())
      return false;
    switch (a.kind()) {
    case Kind::Var: return a.atom() == b.atom();
    case Kind::App: return a.fun() == b.fun() && a.arg() == b.arg();
    case Kind::Lam: return a.atom() == b.atom() && a.body() == b.body();
    }
    return false;
  }

private:
  struct Node;
  explicit NamedTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Atom check(const Atom& a)
  {
    if (!a.is_natural())
      throw std::invalid_argument("term atoms must be naturals, got " + a.str());
    return a;
  }

  std::shared_ptr<const Node> node_;
};

struct NamedTerm::Node {
  Kind kind;
  Atom atom;
  NamedTerm left;
  NamedTerm right;
};

inline NamedTerm NamedTerm::var(Atom a)
{
  return NamedTerm(std::make_shared<const Node>(Node{Kind::Var, check(a), {}, {}}));
}
inline NamedTerm NamedTerm::app(NamedTerm f, NamedTerm x)
{
  return NamedTerm(
      std::make_shared<const Node>(Node{Kind::App, Atom(0), std::move(f), std::move(x)}));
}
inline NamedTerm NamedTerm::lam(Atom binder, NamedTerm body)
{
  return NamedTerm(
      std::make_shared<const Node>(Node{Kind::Lam, check(binder), std::move(body), {}}));
}
inline NamedTerm::Kind NamedTerm::kind() const { return node_->kind; }
inline const Atom& NamedTerm::atom() const { return node_->atom; }
inline const NamedTerm& NamedTerm::fun() const { return node_->left; }
inline const NamedTerm& NamedTerm::arg() const { return node_->right; }
inline const NamedTerm& NamedTerm::body() const { return node_->left; }

/// Free atoms: the least support of the alpha-class.
inline Support free_atoms(const NamedTerm& t)
{
  switch (t.kind()) {
  case NamedTerm::Kind::Var: return Support{t.atom()};
  case NamedTerm::Kind::App: return free_atoms(t.fun()) | free_atoms(t.arg());
  case NamedTerm::Kind::Lam: {
    auto s = free_atoms(t.body());
    s.erase(t.atom());
    return s;
  }
  }
  return {};
}

inline Support all_atoms(const NamedTerm& t)
{
  switch (t.kind()) {
  case NamedTerm::Kind::Var: return Support{t.atom()};
  case NamedTerm::Kind::App: return all_atoms(t.fun()) | all_atoms(t.arg());
  case NamedTerm::Kind::Lam: return all_atoms(t.body()) | Support{t.atom()};
  }
  return {};
}

/// Renames every occurrence, bound or free.
inline NamedTerm act_term(const GlobalMap& g, const NamedTerm& t)
{
  if (g.symmetry() != SymmetryId::Equality)
    throw std::invalid_argument("terms are acted on by finite permutations only");
  switch (t.kind()) {
  case NamedTerm::Kind::Var: return NamedTerm::var(g(t.atom()));
  case NamedTerm::Kind::App: return NamedTerm::app(act_term(g, t.fun()), act_term(g, t.arg()));
  case NamedTerm::Kind::Lam: return NamedTerm::lam(g(t.atom()), act_term(g, t.body()));
  }
  return t;
}

inline GlobalMap swap(const Atom& a, const Atom& b)
{
  return GlobalMap::transposition(SymmetryId::Equality, a, b);
}

/// Alpha-equivalence by the nominal definition at every binder: <a>x and
/// <b>y agree iff (c a).x and (c b).y agree for one c fresh for all of them.
inline bool term_alpha_eq(const NamedTerm& s, const NamedTerm& t)
{
  if (s.kind() != t.kind())
    return false;
  switch (s.kind()) {
  case NamedTerm::Kind::Var: return s.atom() == t.atom();
  case NamedTerm::Kind::App: return term_alpha_eq(s.fun(), t.fun()) && term_alpha_eq(s.arg(), t.arg());
  case NamedTerm::Kind::Lam: {
    const auto &a = s.atom(), &b = t.atom();
    if (a == b)
      return term_alpha_eq(s.body(), t.body());
    auto c = fresh(SymmetryId::Equality,
                   Support{a, b} | free_atoms(s.body()) | free_atoms(t.body()));
    return term_alpha_eq(act_term(swap(c, a), s.body()), act_term(swap(c, b), t.body()));
  }
  }
  return false;
}

/// Lambda terms modulo alpha as a nominal carrier.
struct LambdaCarrier {
  using value_type = NamedTerm;
  NamedTerm act(const GlobalMap& g, const NamedTerm& t) const { return act_term(g, t); }
  Support supp(const NamedTerm& t) const { return free_atoms(t); }
  bool equal(const NamedTerm& a, const NamedTerm& b) const { return term_alpha_eq(a, b); }
};

// --- abstraction ------------------------------------------------------------

/// <binder>body, compared by alpha_eq.
template <class V>
struct AbsClass {
  Atom binder;
  V body;
};

/// An element lambda.x of the de Bruijn binder applied to a carrier.
template <class V>
struct BElem {
  V body;
};

template <NominalCarrier C>
Support supp_abs(const C& carrier, const AbsClass<typename C::value_type>& a)
{
  auto s = carrier.supp(a.body);
  s.erase(a.binder);
  return s;
}

template <NominalCarrier C>
Support supp_b(const C& carrier, const BElem<typename C::value_type>& b)
{
  return b_support(carrier.supp(b.body));
}

template <NominalCarrier C>
bool alpha_eq(const C& carrier, const AbsClass<typename C::value_type>& l,
              const AbsClass<typename C::value_type>& r)
{
  const auto &a = l.binder, &b = r.binder;
  auto c = fresh(SymmetryId::Equality,
                 Support{a, b} | carrier.supp(l.body) | carrier.supp(r.body));
  return carrier.equal(carrier.act(swap(c, a), l.body), carrier.act(swap(c, b), r.body));
}

template <NominalCarrier C>
AbsClass<typename C::value_type> act_abs(const C& carrier, const GlobalMap& g,
                                         const AbsClass<typename C::value_type>& a)
{
  return {g(a.binder), carrier.act(g, a.body)};
}

/// phi(lambda.x) = sigma_m^-1 . <0>x with m = maxidx(supp x).
template <NominalCarrier C>
AbsClass<typename C::value_type> phi(const C& carrier, const BElem<typename C::value_type>& b)
{
  auto inv = sigma(maxidx(carrier.supp(b.body))).inverse();
  return {inv(Atom(0)), carrier.act(inv, b.body)};
}

/// Inverse of phi: for <k>y, with m = max(maxidx(y), k) + 1, the body is
/// (0 k+1) . sigma_m . y.
template <NominalCarrier C>
BElem<typename C::value_type> phi_inv(const C& carrier, const AbsClass<typename C::value_type>& a)
{
  auto k = a.binder.index();
  auto m = std::max(maxidx(carrier.supp(a.body)), k) + 1;
  auto shifted = carrier.act(sigma(m), a.body);
  return {carrier.act(swap(Atom(0), Atom(static_cast<std::int64_t>(k + 1))), shifted)};
}

// --- de Bruijn terms --------------------------------------------------------

class DBTerm {
public:
  enum class Kind { Idx, App, Lam };

  DBTerm() = default;

  static DBTerm idx(std::uint64_t n);
  static DBTerm app(DBTerm f, DBTerm x);
  static DBTerm lam(DBTerm body);

  Kind kind() const;
  std::uint64_t index() const;
  const DBTerm& fun() const;
  const DBTerm& arg() const;
  const DBTerm& body() const;

  friend bool operator==(const DBTerm& a, const DBTerm& b)
  {
    if (a.node_ == b.node_)
      return true;
    if (a.kind() != b.kind())
      return false;
    switch (a.kind()) {
    case Kind::Idx: return a.index() == b.index();
    case Kind::App: return a.fun() == b.fun() && a.arg() == b.arg();
    case Kind::Lam: return a.body() == b.body();
    }
    return false;
  }

private:
  struct Node;
  explicit DBTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct DBTerm::Node {
  Kind kind;
  std::uint64_t index;
  DBTerm left;
  DBTerm right;
};

inline DBTerm DBTerm::idx(std::uint64_t n)
{
  return DBTerm(std::make_shared<const Node>(Node{Kind::Idx, n, {}, {}}));
}
inline DBTerm DBTerm::app(DBTerm f, DBTerm x)
{
  return DBTerm(std::make_shared<const Node>(Node{Kind::App, 0, std::move(f), std::move(x)}));
}
inline DBTerm DBTerm::lam(DBTerm body)
{
  return DBTerm(std::make_shared<const Node>(Node{Kind::Lam, 0, std::move(body), {}}));
}
inline DBTerm::Kind DBTerm::kind() const { return node_->kind; }
inline std::uint64_t DBTerm::index() const { return node_->index; }
inline const DBTerm& DBTerm::fun() const { return node_->left; }
inline const DBTerm& DBTerm::arg() const { return node_->right; }
inline const DBTerm& DBTerm::body() const { return node_->left; }

namespace detail {

inline DBTerm to_db(const NamedTerm& t, std::vector<Atom>& binders)
{
  switch (t.kind()) {
  case NamedTerm::Kind::Var: {
    for (std::size_t d = 0; d < binders.size(); ++d)
      if (binders[binders.size() - 1 - d] == t.atom())
        return DBTerm::idx(d);
    return DBTerm::idx(t.atom().index() + binders.size());
  }
  case NamedTerm::Kind::App: {
    auto f = to_db(t.fun(), binders);
    return DBTerm::app(std::move(f), to_db(t.arg(), binders));
  }
  case NamedTerm::Kind::Lam: {
    binders.push_back(t.atom());
    auto body = to_db(t.body(), binders);
    binders.pop_back();
    return DBTerm::lam(std::move(body));
  }
  }
  throw std::logic_error("unreachable");
}

inline void db_free(const DBTerm& t, std::uint64_t depth, Support& out)
{
  switch (t.kind()) {
  case DBTerm::Kind::Idx:
    if (t.index() >= depth)
      out.insert(Atom(static_cast<std::int64_t>(t.index() - depth)));
    return;
  case DBTerm::Kind::App:
    db_free(t.fun(), depth, out);
    db_free(t.arg(), depth, out);
    return;
  case DBTerm::Kind::Lam:
    db_free(t.body(), depth + 1, out);
    return;
  }
}

inline NamedTerm from_db(const DBTerm& t, std::vector<Atom>& binders, const Support& ambient)
{
  switch (t.kind()) {
  case DBTerm::Kind::Idx:
    if (t.index() < binders.size())
      return NamedTerm::var(binders[binders.size() - 1 - t.index()]);
    return NamedTerm::var(Atom(static_cast<std::int64_t>(t.index() - binders.size())));
  case DBTerm::Kind::App: {
    auto f = from_db(t.fun(), binders, ambient);
    return NamedTerm::app(std::move(f), from_db(t.arg(), binders, ambient));
  }
  case DBTerm::Kind::Lam: {
    auto avoid = ambient | Support(binders);
    auto b = fresh(SymmetryId::Equality, avoid);
    binders.push_back(b);
    auto body = from_db(t.body(), binders, ambient);
    binders.pop_back();
    return NamedTerm::lam(b, std::move(body));
  }
  }
  throw std::logic_error("unreachable");
}

} // namespace detail

/// Bound occurrences become distances to their binder; a free atom k at
/// depth d becomes index k + d.
inline DBTerm to_debruijn(const NamedTerm& t)
{
  std::vector<Atom> binders;
  return detail::to_db(t, binders);
}

/// Free atoms of a de Bruijn term (indices reaching past all binders).
inline Support db_free_atoms(const DBTerm& t)
{
  Support s;
  detail::db_free(t, 0, s);
  return s;
}

/// Binders get the smallest atom unused by free atoms and enclosing binders.
inline NamedTerm from_debruijn(const DBTerm& t)
{
  std::vector<Atom> binders;
  return detail::from_db(t, binders, db_free_atoms(t));
}

// --- concrete syntax ----------------------------------------------------------

namespace detail {

class TermLexer {
public:
  explicit TermLexer(std::string_view text) : text_(text) {}

  void skip()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool done()
  {
    skip();
    return pos_ >= text_.size();
  }
  char peek()
  {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c)
  {
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::uint64_t number()
  {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected a number");
    return std::stoull(std::string(text_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(const std::string& what) const
  {
    throw std::invalid_argument("term syntax error at offset " + std::to_string(pos_) + ": " +
                                what + " in '" + std::string(text_) + "'");
  }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline bool starts_atom(char c) { return c == 'v' || c == '(' || c == '\\' || c == '#'; }

inline NamedTerm parse_named(TermLexer& lx);

inline NamedTerm parse_named_atom(TermLexer& lx)
{
  char c = lx.peek();
  if (c == '(') {
    lx.advance();
    auto t = parse_named(lx);
    lx.expect(')');
    return t;
  }
  if (c == '\\') {
    lx.advance();
    lx.expect('v');
    auto b = lx.number();
    lx.expect('.');
    return NamedTerm::lam(Atom(static_cast<std::int64_t>(b)), parse_named(lx));
  }
  if (c == 'v') {
    lx.advance();
    return NamedTerm::var(Atom(static_cast<std::int64_t>(lx.number())));
  }
  lx.fail("expected a variable, '(' or '\\'");
}

inline NamedTerm parse_named(TermLexer& lx)
{
  auto t = parse_named_atom(lx);
  while (!lx.done() && starts_atom(lx.peek()) && lx.peek() != '#') {
    bool lambda = lx.peek() == '\\';
    t = NamedTerm::app(std::move(t), parse_named_atom(lx));
    if (lambda)
      break; // a lambda extends to the right
  }
  return t;
}

inline DBTerm parse_db(TermLexer& lx);

inline DBTerm parse_db_atom(TermLexer& lx)
{
  char c = lx.peek();
  if (c == '(') {
    lx.advance();
    auto t = parse_db(lx);
    lx.expect(')');
    return t;
  }
  if (c == '\\') {
    lx.advance();
    return DBTerm::lam(parse_db(lx));
  }
  if (c == '#') {
    lx.advance();
    return DBTerm::idx(lx.number());
  }
  lx.fail("expected an index, '(' or '\\'");
}

inline DBTerm parse_db(TermLexer& lx)
{
  auto t = parse_db_atom(lx);
  while (!lx.done() && starts_atom(lx.peek()) && lx.peek() != 'v') {
    bool lambda = lx.peek() == '\\';
    t = DBTerm::app(std::move(t), parse_db_atom(lx));
    if (lambda)
      break;
  }
  return t;
}

} // namespace detail

/// Named syntax: `\v0. v0 v2`, application by juxtaposition.
inline NamedTerm parse_named_term(std::string_view text)
{
  detail::TermLexer lx(text);
  auto t = detail::parse_named(lx);
  if (!lx.done())
    lx.fail("trailing input");
  return t;
}

/// De Bruijn syntax: `\ #0 #3`.
inline DBTerm parse_db_term(std::string_view text)
{
  detail::TermLexer lx(text);
  auto t = detail::parse_db(lx);
  if (!lx.done())
    lx.fail("trailing input");
  return t;
}

inline std::string to_string(const NamedTerm& t)
{
  switch (t.kind()) {
  case NamedTerm::Kind::Var: return "v" + t.atom().str();
  case NamedTerm::Kind::Lam: return "\\v" + t.atom().str() + ". " + to_string(t.body());
  case NamedTerm::Kind::App: {
    auto f = to_string(t.fun());
    if (t.fun().kind() == NamedTerm::Kind::Lam)
      f = "(" + f + ")";
    auto x = to_string(t.arg());
    if (t.arg().kind() != NamedTerm::Kind::Var)
      x = "(" + x + ")";
    return f + " " + x;
  }
  }
  return "?";
}

inline std::string to_string(const DBTerm& t)
{
  switch (t.kind()) {
  case DBTerm::Kind::Idx: return "#" + std::to_string(t.index());
  case DBTerm::Kind::Lam: return "\\ " + to_string(t.body());
  case DBTerm::Kind::App: {
    auto f = to_string(t.fun());
    if (t.fun().kind() == DBTerm::Kind::Lam)
      f = "(" + f + ")";
    auto x = to_string(t.arg());
    if (t.arg().kind() != DBTerm::Kind::Idx)
      x = "(" + x + ")";
    return f + " " + x;
  }
  }
  return "?";
}

} // namespace nomset
