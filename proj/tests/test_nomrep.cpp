#include <gtest/gtest.h>

#include <nomset/nomrep.hpp>
#include <nomset/testing/properties.hpp>

using namespace nomset;

namespace {

const auto Eq = SymmetryId::Equality;

ExtElem g_at(std::int64_t a, std::int64_t b) { return {RestrictedMap(Eq, {{0, a}, {1, b}}), 0}; }

FinPresentation free_on(std::vector<SuppElement> gens, SymmetryId sym = Eq)
{
  return FinPresentation(sym, SuppSet(std::move(gens)), {});
}

} // namespace

TEST(FinPresentation, RejectsMalformedEquations)
{
  SuppSet gens(std::vector<SuppElement>{{"g", {0, 1}}});
  ExtElem bad{RestrictedMap(Eq, {{0, 1}}), 0};
  EXPECT_THROW(FinPresentation(Eq, gens, {{bad, unit(Eq, gens, 0)}}), std::invalid_argument);
}

TEST(DefaultPool, Examples)
{
  auto p = unordered_pairs();
  // Spare atoms are fresh for both the reps {4,7} and the equation atoms {0,1}.
  auto pool = default_pool(p, {g_at(4, 7), g_at(7, 4)});
  EXPECT_EQ(pool.atoms, (Support{0, 1, 2, 3, 4, 5, 7}));

  auto q = free_on({{"g", {}}});
  auto one = default_pool(q, {unit(Eq, q.generators, 0)});
  EXPECT_EQ(one.atoms.size(), 1u);
}

TEST(CheckPool, RejectsSmallPools)
{
  auto p = unordered_pairs();
  EXPECT_THROW(quot_eq(p, g_at(0, 1), g_at(1, 0), {Support{0, 1, 2}}), PoolError);
  EXPECT_THROW(quot_eq(p, g_at(0, 9), g_at(1, 0), {Support{0, 1, 2, 3, 4}}), PoolError);
}

TEST(QuotEq, UnorderedPairs)
{
  auto p = unordered_pairs();
  AtomPool pool{{0, 1, 2, 3, 4}};
  EXPECT_TRUE(quot_eq(p, g_at(0, 1), g_at(1, 0), pool));
  EXPECT_FALSE(quot_eq(p, g_at(0, 1), g_at(0, 2), pool));
}

TEST(ElementCount, Examples)
{
  EXPECT_EQ(element_count(unordered_pairs(), {Support{0, 1, 2}}), 3u);
  EXPECT_EQ(element_count(free_on({{"g", {0}}}), {Support{0, 1, 2}}), 3u);
  EXPECT_EQ(element_count(free_on({}), {Support{0, 1, 2}}), 0u);
}

TEST(OrbitCount, Examples)
{
  EXPECT_EQ(orbit_count(unordered_pairs(), {Support{0, 1, 2}}), 1u);
  EXPECT_EQ(orbit_count(free_on({{"g1", {0}}, {"g2", {0}}}), {Support{0, 1, 2}}), 2u);
  EXPECT_EQ(orbit_count(free_on({}), {Support{0, 1, 2}}), 0u);
  EXPECT_THROW(orbit_count(free_on({{"g", {0}}}, SymmetryId::Renaming), {Support{0, 1}}),
               std::invalid_argument);
}

TEST(OrbitCount, IncreasingPairsFormOneOrderOrbit)
{
  // All increasing pairs lie in one orbit of the order symmetry.
  auto p = free_on({{"g", {0, 1}}}, SymmetryId::TotalOrder);
  EXPECT_EQ(orbit_count(p, {Support{0, 1, 2, 3}}), 1u);
  EXPECT_EQ(element_count(p, {Support{0, 1, 2, 3}}), 6u);
}

TEST(SuppOf, Examples)
{
  auto q = free_on({{"g", {0, 1}}});
  ExtElem e = g_at(4, 7);
  EXPECT_EQ(supp_of(q, e, default_pool(q, {e})), (Support{4, 7}));
  auto p = unordered_pairs();
  EXPECT_EQ(supp_of(p, e, default_pool(p, {e})), (Support{4, 7}));
}

TEST(SuppOf, EquationsCanShrinkSupport)
{
  // g(0,1) = g(2,1) forgets the first atom, leaving {7} as least support.
  SuppSet gens(std::vector<SuppElement>{{"g", {0, 1}}});
  ExtElem moved{RestrictedMap(Eq, {{0, 2}, {1, 1}}), 0};
  FinPresentation p(Eq, gens, {{moved, unit(Eq, gens, 0)}});
  ExtElem e = g_at(4, 7);
  EXPECT_EQ(supp_of(p, e, default_pool(p, {e})), (Support{7}));
}

TEST(ActQuot, Examples)
{
  auto p = std::make_shared<const FinPresentation>(unordered_pairs());
  QuotElem q{p, g_at(4, 7)};
  EXPECT_TRUE(same_class(act_quot(GlobalMap::identity(Eq), q), q));
  EXPECT_TRUE(same_class(act_quot(GlobalMap::transposition(Eq, 4, 7), q), q));
  auto moved = act_quot(GlobalMap::transposition(Eq, 4, 9), q);
  EXPECT_FALSE(same_class(moved, q));
  EXPECT_EQ(supp_of(*p, moved.rep, default_pool(*p, {moved.rep})), (Support{7, 9}));
}

TEST(NomrepProperties, UnorderedPairsSuite)
{
  auto r = testkit::unordered_pairs_suite();
  EXPECT_TRUE(r.ok()) << (r.counterexamples.empty() ? "" : r.counterexamples[0]);
}

TEST(NomrepProperties, AgreesWithClosureOracle)
{
  testkit::Rng rng(41);
  auto r = testkit::presentation_vs_closure(rng, 60);
  EXPECT_TRUE(r.ok()) << (r.counterexamples.empty() ? "" : r.counterexamples[0]);
}

TEST(NomrepProperties, PoolStability)
{
  testkit::Rng rng(42);
  for (int n = 0; n < 60; ++n) {
    auto atoms = testkit::atom_pool(Eq, 3);
    auto gens = testkit::random_suppset(rng, atoms, 2, 2);
    std::vector<Equation> eqs;
    for (std::size_t i = 0, k = testkit::below(rng, 3); i < k; ++i)
      eqs.emplace_back(testkit::random_ext(rng, Eq, gens, atoms),
                       testkit::random_ext(rng, Eq, gens, atoms));
    FinPresentation p(Eq, gens, eqs);
    auto pool = default_pool(p, {});
    auto bigger = pool;
    bigger.atoms.insert(fresh(Eq, pool.atoms));
    Congruence small(p, pool), big(p, bigger);
    for (const auto& a : small.elements())
      for (const auto& b : small.elements())
        EXPECT_EQ(small.same(a, b), big.same(a, b));
    EXPECT_EQ(orbit_count(p, pool), orbit_count(p, bigger));
  }
}

TEST(NomrepProperties, CongruenceForTheAction)
{
  testkit::Rng rng(43);
  auto p = unordered_pairs();
  AtomPool pool{{0, 1, 2, 3, 4}};
  Congruence c(p, pool);
  for (int i = 0; i < 100; ++i) {
    auto g = testkit::random_global(rng, Eq, pool.atoms);
    for (const auto& a : c.elements())
      for (const auto& b : c.elements())
        if (c.same(a, b)) {
          EXPECT_TRUE(c.same(act(g, a), act(g, b)));
        }
  }
}

TEST(NomrepProperties, FreePresentationsMatchEnumeration)
{
  for (auto sym : {Eq, SymmetryId::TotalOrder, SymmetryId::Renaming}) {
    auto p = free_on({{"a", {0, 1}}, {"b", {2}}}, sym);
    auto pool = testkit::atom_pool(sym, 5);
    EXPECT_EQ(element_count(p, {pool}), ext_enumerate(sym, p.generators, pool).size());
    if (!is_group(sym))
      continue;
    for (const auto& e : ext_enumerate(sym, p.generators, pool))
      EXPECT_EQ(supp_of(p, e, {pool}), ext_support(e));
  }
}
