#pragma once

// Property suites. Each returns counts plus verbatim counterexamples and
// is deterministic in the engine state it receives.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../atoms.hpp"
#include "../automata.hpp"
#include "../binding.hpp"
#include "../freenom.hpp"
#include "../nomrep.hpp"
#include "../suppset.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace nomset::testkit {

struct SuiteResult {
  explicit SuiteResult(std::string suite_name) : name(std::move(suite_name)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return failures == 0; }

  void check(bool pass, const std::function<std::string()>& describe)
  {
    ++cases;
    if (pass)
      return;
    ++failures;
    if (counterexamples.size() < 10)
      counterexamples.push_back(describe());
  }
};

inline std::string show(const ExtElem& e, const SuppSet& x)
{
  return "(" + to_string(e.pi.images()) + ", " + x.id(e.base) + ")";
}

inline std::string show(const SuppSet& x)
{
  std::string s = "{";
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (i ? ", " : "") + x.id(i) + ":" + x.support(i).str();
  return s + "}";
}

inline std::string show(const std::vector<Atom>& w)
{
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i)
    s += (i ? " " : "") + w[i].str();
  return s + "]";
}

// --- free nominal sets --------------------------------------------------------

/// Unit and associativity laws of Ext on random supported sets, plus
/// naturality of unit and equivariance of mult.
inline SuiteResult monad_laws(Rng& rng, SymmetryId sym, std::size_t sets)
{
  SuiteResult r{"monad-laws/" + std::string(to_string(sym))};
  const auto pool = atom_pool(sym, 6);
  for (std::size_t n = 0; n < sets; ++n) {
    auto x = random_suppset(rng, pool, 5, 3);
    auto e = random_ext(rng, sym, x, pool);
    auto ctx = [&] { return show(x) + " e=" + show(e, x); };

    // mult . unit_{Ext X} = id
    r.check(mult(RestrictedMap::identity(sym, ext_support(e)), e) == e,
            [&] { return "left unit " + ctx(); });
    // mult . Ext(unit_X) = id: Ext(unit) sends (pi, x) to (pi, unit(x))
    auto lifted_unit = unit(sym, x, e.base);
    r.check(mult(e.pi, lifted_unit) == e, [&] { return "right unit " + ctx(); });

    // associativity on (rho, (sigma, e))
    auto sigma = RestrictedMap(sym, random_admissible(rng, sym, ext_support(e), pool));
    auto rho = RestrictedMap(sym, random_admissible(rng, sym, sigma.image(), pool));
    auto inner_first = mult(rho.restricted_to(ext_support(mult(sigma, e))), mult(sigma, e));
    auto outer_first = mult(then(sigma, rho), e);
    r.check(inner_first == outer_first, [&] {
      return "associativity " + ctx() + " sigma=" + to_string(sigma.images()) +
             " rho=" + to_string(rho.images());
    });

    // mult commutes with a restricted action
    auto g = RestrictedMap(sym, random_admissible(rng, sym, rho.image(), pool));
    r.check(act(g, mult(rho, mult(sigma, e))) == mult(then(rho, g), mult(sigma, e)),
            [&] { return "mult equivariance " + ctx(); });

    // canonical representatives: acting by two global completions agrees
    auto p = e.pi.images();
    r.check(act(extend_to_global(sym, p), unit(sym, x, e.base)) ==
                act(extend_to_global_alt(sym, p), unit(sym, x, e.base)),
            [&] { return "completion independence " + ctx(); });
  }
  return r;
}

// --- presentations ------------------------------------------------------------

/// The unordered-pairs presentation: enumeration and counts, quot_eq
/// against the closure oracle, and stability when the pool grows.
inline SuiteResult unordered_pairs_suite()
{
  SuiteResult r{"unordered-pairs"};
  const auto p = unordered_pairs();
  const auto sym = p.sym;
  Support small{0, 1, 2};
  auto elems = ext_enumerate(sym, p.generators, small);
  r.check(elems.size() == 6, [&] { return "ext_enumerate gave " + std::to_string(elems.size()); });
  auto count = element_count(p, {small});
  r.check(count == 3, [&] { return "element_count gave " + std::to_string(count); });
  auto orbits = orbit_count(p, {small});
  r.check(orbits == 1, [&] { return "orbit_count gave " + std::to_string(orbits); });

  Support pool5{0, 1, 2, 3, 4};
  Support pool6 = pool5;
  pool6.insert(Atom(5));
  oracle::ClosureOracle closure(p, pool5);
  Congruence c5(p, {pool5});
  Congruence c6(p, {pool6});
  for (const auto& a : elems)
    for (const auto& b : elems) {
      bool lib = c5.same(a, b);
      bool ref = closure.equal(a, b);
      r.check(lib == ref, [&] {
        return "quot_eq " + show(a, p.generators) + " " + show(b, p.generators) +
               " library=" + std::to_string(lib) + " oracle=" + std::to_string(ref);
      });
      r.check(quot_eq(p, a, b, {pool5}) == quot_eq(p, a, b, {pool6}) && lib == c6.same(a, b),
              [&] { return "pool stability " + show(a, p.generators) + " " + show(b, p.generators); });
    }
  return r;
}

/// Random equality presentations: the congruence agrees with the closure
/// oracle on every pair of pool elements.
inline SuiteResult presentation_vs_closure(Rng& rng, std::size_t presentations)
{
  SuiteResult r{"presentation-vs-closure"};
  const auto sym = SymmetryId::Equality;
  for (std::size_t n = 0; n < presentations; ++n) {
    auto atoms = atom_pool(sym, 3);
    auto gens = random_suppset(rng, atoms, 2, 2);
    std::vector<Equation> eqs;
    auto k = below(rng, 3);
    for (std::size_t i = 0; i < k; ++i) {
      auto l = random_ext(rng, sym, gens, atoms);
      auto rr = random_ext(rng, sym, gens, atoms);
      eqs.emplace_back(l, rr);
    }
    FinPresentation p(sym, gens, eqs);
    auto pool = default_pool(p, {});
    Congruence cong(p, pool);
    oracle::ClosureOracle closure(p, pool.atoms);
    const auto& es = cong.elements();
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = i; j < es.size(); ++j)
        r.check(cong.same(es[i], es[j]) == closure.equal(es[i], es[j]), [&] {
          return "presentation " + show(gens) + " pair " + show(es[i], gens) + " " +
                 show(es[j], gens);
        });
  }
  return r;
}

// --- binding ------------------------------------------------------------------

inline SuiteResult phi_suite(Rng& rng, std::size_t terms)
{
  SuiteResult r{"phi"};
  LambdaCarrier lc;
  for (std::size_t n = 0; n < terms; ++n) {
    auto x = random_term(rng, 6, 5);
    BElem<NamedTerm> bx{x};
    auto a = phi(lc, bx);
    r.check(supp_abs(lc, a) == b_support(free_atoms(x)),
            [&] { return "support reflection x=" + to_string(x); });
    auto back = phi_inv(lc, a);
    r.check(term_alpha_eq(back.body, x), [&] { return "phi_inv(phi) x=" + to_string(x); });

    AbsClass<NamedTerm> abs{Atom(static_cast<std::int64_t>(below(rng, 5))), random_term(rng, 6, 5)};
    auto again = phi(lc, phi_inv(lc, abs));
    r.check(alpha_eq(lc, again, abs), [&] {
      return "phi(phi_inv) <" + abs.binder.str() + ">" + to_string(abs.body);
    });
  }
  return r;
}

inline SuiteResult alpha_triple(Rng& rng, std::size_t pairs)
{
  SuiteResult r{"alpha-triple"};
  for (std::size_t n = 0; n < pairs; ++n) {
    auto s = random_term(rng, 6, 5);
    NamedTerm t;
    switch (below(rng, 4)) {
    case 0: t = rename_binder(rng, rename_binder(rng, s, 5), 5); break;
    case 1: t = mutate_var(rng, s, 5); break;
    case 2: t = mutate_var(rng, rename_binder(rng, s, 5), 5); break;
    default: t = random_term(rng, 6, 5); break;
    }
    bool db = to_debruijn(s) == to_debruijn(t);
    bool nominal = term_alpha_eq(s, t);
    bool brute = oracle::alpha_bruteforce(s, t);
    r.check(db == nominal && nominal == brute, [&] {
      return to_string(s) + " vs " + to_string(t) + " db=" + std::to_string(db) +
             " nominal=" + std::to_string(nominal) + " brute=" + std::to_string(brute);
    });
  }
  return r;
}

/// Conversions to and from de Bruijn terms.
inline SuiteResult debruijn_roundtrip(Rng& rng, std::size_t terms)
{
  SuiteResult r{"debruijn-roundtrip"};
  for (std::size_t n = 0; n < terms; ++n) {
    auto t = random_term(rng, 6, 5);
    auto d = to_debruijn(t);
    r.check(term_alpha_eq(from_debruijn(d), t) && to_debruijn(from_debruijn(d)) == d,
            [&] { return to_string(t); });
    r.check(db_free_atoms(d) == free_atoms(t), [&] { return "free atoms " + to_string(t); });
  }
  return r;
}

// --- automata -----------------------------------------------------------------

inline void all_words(std::size_t len, const Support& pool, std::vector<Atom>& w,
                      const std::function<void(const std::vector<Atom>&)>& visit)
{
  if (!w.empty())
    visit(w);
  if (w.size() == len)
    return;
  for (const auto& a : pool) {
    w.push_back(a);
    all_words(len, pool, w, visit);
    w.pop_back();
  }
}

inline SuiteResult first_repeat_suite(Rng& rng, std::size_t perms)
{
  SuiteResult r{"first-repeat"};
  const auto ra = first_repeat_automaton();
  const auto pool = atom_pool(ra.sym, 4);
  std::vector<Atom> w;
  std::size_t words = 0;
  all_words(4, pool, w, [&](const std::vector<Atom>& word) {
    ++words;
    r.check(run(ra, word) == oracle::first_letter_repeats(word),
            [&] { return "word " + show(word); });
  });
  r.check(words == 340, [&] { return "enumerated " + std::to_string(words) + " words"; });
  const auto wide = atom_pool(ra.sym, 8);
  for (std::size_t n = 0; n < perms; ++n) {
    auto len = below(rng, 6);
    std::vector<Atom> word;
    for (std::size_t i = 0; i < len; ++i)
      word.push_back(pick(rng, pool));
    auto g = random_global(rng, ra.sym, wide);
    std::vector<Atom> moved;
    for (const auto& a : word)
      moved.push_back(g(a));
    r.check(run(ra, word) == run(ra, moved),
            [&] { return "equivariance " + show(word) + " under " + g.str(); });
  }
  return r;
}

inline SuiteResult determinization_suite(Rng& rng, std::size_t nfas)
{
  SuiteResult r{"determinization"};
  for (std::size_t n = 0; n < nfas; ++n) {
    auto nfa = random_nfa(rng, 4, 2);
    oracle::SubsetDfa dfa(nfa);
    std::vector<std::size_t> w;
    std::function<void()> visit = [&] {
      r.check(determinized_accepts(nfa, w) == dfa.accepts(w), [&] {
        std::string s = "nfa#" + std::to_string(n) + " word";
        for (auto a : w)
          s += " " + std::to_string(a);
        return s;
      });
      if (w.size() == 6)
        return;
      for (std::size_t a = 0; a < nfa.letters; ++a) {
        w.push_back(a);
        visit();
        w.pop_back();
      }
    };
    visit();
    PowersetInstance inst{nfa.letters};
    auto c = nfa_coalgebra(nfa);
    auto d = determinize_generic(inst, c);
    for (std::size_t q = 0; q < nfa.states; ++q)
      r.check(d(inst.unit(q)) == c(q), [&] { return "d({q}) != c(q) at q=" + std::to_string(q); });
  }
  return r;
}

/// Equivariance of one step, and stability of the orbit summary.
inline SuiteResult config_equivariance(Rng& rng, const RegisterAutomaton& ra, std::size_t samples)
{
  SuiteResult r{"config-equivariance/" + ra.locations.id(ra.initial)};
  const auto pool = atom_pool(ra.sym, 5);
  const auto wide = atom_pool(ra.sym, 9);
  for (std::size_t n = 0; n < samples; ++n) {
    std::vector<Atom> word;
    for (std::size_t i = 0, len = below(rng, 4); i < len; ++i)
      word.push_back(pick(rng, pool));
    auto tr = run_trace(ra, word);
    std::vector<Config> reach(tr.trace.back().begin(), tr.trace.back().end());
    if (reach.empty())
      reach.push_back(initial_config(ra));
    auto c = reach[below(rng, reach.size())];
    auto a = pick(rng, pool);
    auto g = random_global(rng, ra.sym, wide);
    std::set<Config> lhs;
    for (auto& s : step(ra, act(g, c), g(a)).successors)
      lhs.insert(s);
    std::set<Config> rhs;
    for (auto& s : step(ra, c, a).successors)
      rhs.insert(act(g, s));
    r.check(lhs == rhs, [&] {
      return "config " + show(c, ra.locations) + " input " + a.str() + " under " + g.str();
    });
  }
  for (std::size_t size = 2; size <= 4; ++size) {
    auto base = atom_pool(ra.sym, size);
    auto bigger = base;
    bigger.insert(fresh(ra.sym, base));
    auto o1 = reachable_orbits(ra, base, 4).orbits;
    auto o2 = reachable_orbits(ra, bigger, 4).orbits;
    r.check(o1 == o2, [&] {
      return "orbits " + std::to_string(o1) + " vs " + std::to_string(o2) + " at pool " +
             base.str();
    });
  }
  return r;
}

/// The configuration automaton obtained by generic determinization over Ext
/// agrees with direct stepping.
inline SuiteResult ext_determinization(Rng& rng, std::size_t samples)
{
  SuiteResult r{"ext-determinization"};
  const auto ra = first_repeat_automaton();
  ExtInstance inst{&ra};
  auto d = determinize_generic(inst, register_coalgebra(ra));
  const auto pool = atom_pool(ra.sym, 5);
  for (std::size_t n = 0; n < samples; ++n) {
    auto c = random_ext(rng, ra.sym, ra.locations, pool);
    auto a = pick(rng, pool);
    auto b = d(c);
    auto via = instantiate(ra, b, a);
    auto direct = step(ra, c, a);
    r.check(via.successors == direct.successors && b.final == ra.is_final(c.base),
            [&] { return "config " + show(c, ra.locations) + " input " + a.str(); });
  }
  return r;
}

// --- supported sets -------------------------------------------------------------

inline SuiteResult coequalizer_suite(Rng& rng, std::size_t instances)
{
  SuiteResult r{"coequalizer"};
  const auto pool = atom_pool(SymmetryId::Equality, 4);
  for (std::size_t n = 0; n < instances; ++n) {
    auto x = random_suppset(rng, pool, 5, 3);
    auto rel = random_suppset(rng, pool, 4, 3);
    auto ft = random_supported_table(rng, rel, x);
    auto gt = random_supported_table(rng, rel, x);
    if (ft.empty() || gt.empty()) {
      --n;
      continue;
    }
    auto f = check_supported_map(ft, rel, x).value();
    auto g = check_supported_map(gt, rel, x).value();
    auto q = coequalizer(f, g);
    for (std::size_t y = 0; y < q.set.size(); ++y) {
      Support expect = x.support(q.classes[y].front());
      for (auto i : q.classes[y])
        expect = expect & x.support(i);
      r.check(q.set.support(y) == expect, [&] { return "class " + q.set.id(y) + " of " + show(x); });
    }
    for (std::size_t k = 0; k < rel.size(); ++k)
      r.check(q.projection(f(k)) == q.projection(g(k)),
              [&] { return "coequalizing " + show(rel) + " -> " + show(x); });
  }
  return r;
}

inline void all_carriers(std::size_t max_size, const std::vector<Support>& supports,
                         std::vector<SuppSet>& out)
{
  std::vector<std::size_t> pick_idx;
  std::function<void()> rec = [&] {
    if (!pick_idx.empty()) {
      std::vector<SuppElement> elems;
      for (std::size_t i = 0; i < pick_idx.size(); ++i)
        elems.push_back({"e" + std::to_string(i), supports[pick_idx[i]]});
      out.emplace_back(std::move(elems));
    }
    if (pick_idx.size() == max_size)
      return;
    for (std::size_t s = 0; s < supports.size(); ++s) {
      pick_idx.push_back(s);
      rec();
      pick_idx.pop_back();
    }
  };
  rec();
}

inline SuiteResult iso_suite()
{
  SuiteResult r{"iso-vs-inverse"};
  std::vector<SuppSet> carriers;
  all_carriers(3, {Support{}, Support{0}, Support{1}, Support{0, 1}}, carriers);
  for (const auto& x : carriers)
    for (const auto& y : carriers) {
      if (x.size() != y.size())
        continue; // no bijection, both sides trivially false
      std::vector<std::size_t> t(x.size(), 0);
      while (true) {
        auto m = check_supported_map(t, x, y);
        if (m.ok())
          r.check(is_iso(*m.map) == oracle::has_supported_inverse(*m.map),
                  [&] { return show(x) + " -> " + show(y); });
        std::size_t k = 0;
        while (k < t.size() && ++t[k] == y.size())
          t[k++] = 0;
        if (k == t.size())
          break;
      }
    }
  return r;
}

/// chi . m = true . ! and every map into the true-part of chi factors
/// uniquely through m.
inline SuiteResult classifier_suite(Rng& rng, std::size_t monos)
{
  SuiteResult r{"classifier"};
  const auto pool = atom_pool(SymmetryId::Equality, 3);
  for (std::size_t n = 0; n < monos; ++n) {
    auto x = random_suppset(rng, pool, 5, 2);
    // a support-reflecting mono: a random subset of x with the same supports
    std::vector<std::size_t> chosen;
    std::vector<SuppElement> elems;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (coin(rng)) {
        chosen.push_back(i);
        elems.push_back({"a" + std::to_string(i), x.support(i)});
      }
    SuppSet a(std::move(elems));
    auto m = check_supported_map(chosen, a, x).value();
    auto chi = classify_regular_subobject(m);
    auto tru = true_map();
    for (std::size_t i = 0; i < a.size(); ++i)
      r.check(chi(m(i)) == tru(0), [&] { return "chi.m != true at " + show(x); });

    auto z = random_suppset(rng, pool, 3, 2);
    std::vector<std::size_t> t(z.size(), 0);
    while (true) {
      auto f = check_supported_map(t, z, x);
      if (f.ok()) {
        bool lands = true;
        for (std::size_t k = 0; k < z.size(); ++k)
          lands = lands && chi(t[k]) == tru(0);
        std::size_t factorizations = 0;
        if (!a.empty()) {
          std::vector<std::size_t> h(z.size(), 0);
          while (true) {
            auto hm = check_supported_map(h, z, a);
            if (hm.ok()) {
              bool same = true;
              for (std::size_t k = 0; k < z.size(); ++k)
                same = same && m(h[k]) == t[k];
              factorizations += same;
            }
            std::size_t k = 0;
            while (k < h.size() && ++h[k] == a.size())
              h[k++] = 0;
            if (k == h.size())
              break;
          }
        }
        r.check(lands == (factorizations == 1), [&] {
          return "pullback at " + show(a) + " -> " + show(x) + " from " + show(z);
        });
      }
      std::size_t k = 0;
      while (k < t.size() && ++t[k] == x.size())
        t[k++] = 0;
      if (k == t.size())
        break;
    }
  }
  return r;
}

// --- atoms ----------------------------------------------------------------------

inline SuiteResult lock_free_suite(Rng& rng, SymmetryId sym, std::size_t samples)
{
  SuiteResult r{"lock-free/" + std::string(to_string(sym))};
  const auto pool = atom_pool(sym, 8);
  for (std::size_t n = 0; n < samples; ++n) {
    auto fixed = random_subset(rng, pool, 5);
    Atom a = pick(rng, pool);
    if (fixed.contains(a))
      fixed.erase(a);
    auto l = lock_free_witness(sym, fixed, a);
    bool fixes = true;
    for (const auto& x : fixed)
      fixes = fixes && l(x) == x;
    r.check(fixes && l(a) != a, [&] { return "R=" + fixed.str() + " a=" + a.str(); });
    if (sym == SymmetryId::TotalOrder)
      r.check(l(a) == oracle::order_witness_image(fixed, a),
              [&] { return "witness value R=" + fixed.str() + " a=" + a.str(); });
  }
  return r;
}

/// pwl composition and inversion against pointwise evaluation.
inline SuiteResult global_map_algebra(Rng& rng, SymmetryId sym, std::size_t samples)
{
  SuiteResult r{"global-maps/" + std::string(to_string(sym))};
  const auto pool = atom_pool(sym, 6);
  for (std::size_t n = 0; n < samples; ++n) {
    auto g = random_global(rng, sym, pool);
    auto h = random_global(rng, sym, pool);
    auto gh = compose(g, h);
    for (const auto& a : atom_pool(sym, 10)) {
      r.check(gh(a) == g(h(a)), [&] { return "compose " + g.str() + " " + h.str() + " at " + a.str(); });
      if (is_group(sym))
        r.check(g.inverse()(g(a)) == a, [&] { return "inverse " + g.str() + " at " + a.str(); });
    }
  }
  return r;
}

} // namespace nomset::testkit
