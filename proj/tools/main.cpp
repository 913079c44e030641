// nomset command-line tool. Exit codes: 0 ok / accept / true, 1 reject /
// false, 2 parse or validation errors.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <nomset/nomset.hpp>
#include <nomset/testing/properties.hpp>

using namespace nomset;
using json = nlohmann::json;

namespace {

enum class Format { Text, Json };

struct Error {
  std::string code;
  std::string where;
  std::string message;
};

// Raised anywhere below to end the command with exit code 2.
struct Failure {
  std::vector<Error> errors;
};

[[noreturn]] void fail(std::string code, std::string where, std::string message)
{
  throw Failure{{{std::move(code), std::move(where), std::move(message)}}};
}

struct Report {
  int exit_code = 0;
  std::string text;
  json doc = json::object();
};

json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail("io", path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail("json", path, e.what());
  }
}

template <class F>
auto parsing(const std::string& where, F&& f) -> decltype(f())
{
  try {
    return f();
  } catch (const Failure&) {
    throw;
  } catch (const json::exception& e) {
    fail("schema", where, e.what());
  } catch (const std::exception& e) {
    fail("schema", where, e.what());
  }
}

std::vector<Atom> read_word_file(const std::string& path)
{
  return parsing(path, [&] {
    if (path == "-")
      return io::read_word(std::cin);
    std::ifstream in(path);
    if (!in)
      fail("io", path, "cannot open file");
    return io::read_word(in);
  });
}

RegisterAutomaton load_automaton(const std::string& path)
{
  auto j = read_json_file(path);
  auto ra = parsing(path, [&] { return io::automaton_from_json(j); });
  auto issues = validate(ra);
  if (!issues.empty()) {
    Failure f;
    for (const auto& i : issues)
      f.errors.push_back({i.code, path + ": " + i.where, i.message});
    throw f;
  }
  return ra;
}

FinPresentation load_presentation(const std::string& path)
{
  auto j = read_json_file(path);
  return parsing(path, [&] { return io::presentation_from_json(j); });
}

ExtElem parse_elem(const FinPresentation& p, const std::string& text)
{
  return parsing(text, [&] {
    return io::ext_from_json(json::parse(text), p.generators, p.sym);
  });
}

Support first_atoms(std::size_t n)
{
  Support s;
  for (std::size_t i = 0; i < n; ++i)
    s.insert(Atom(static_cast<std::int64_t>(i)));
  return s;
}

// Grows a pool with fresh atoms up to n; never shrinks it.
AtomPool enlarged(AtomPool pool, SymmetryId sym, std::optional<std::size_t> n)
{
  while (n && pool.atoms.size() < *n)
    pool.atoms.insert(fresh(sym, pool.atoms));
  return pool;
}

AtomPool counting_pool(const FinPresentation& p, std::optional<std::size_t> n)
{
  return n ? AtomPool{first_atoms(*n)} : default_pool(p, {});
}

json errors_json(const std::vector<Error>& errors)
{
  json out = json::array();
  for (const auto& e : errors)
    out.push_back({{"code", e.code}, {"where", e.where}, {"message", e.message}});
  return out;
}

// ---- commands ----

Report cmd_validate(const std::string& path)
{
  auto j = read_json_file(path);
  Report r;
  if (j.contains("transitions")) {
    auto ra = load_automaton(path);
    r.doc = {{"kind", "automaton"}, {"document", io::automaton_to_json(ra)}};
  } else if (j.contains("generators")) {
    auto p = load_presentation(path);
    r.doc = {{"kind", "presentation"}, {"document", io::presentation_to_json(p)}};
  } else if (j.contains("elements")) {
    auto x = parsing(path, [&] { return io::suppset_from_json(j); });
    r.doc = {{"kind", "suppset"}, {"document", io::suppset_to_json(x)}};
  } else {
    fail("schema", path, "not an automaton, presentation or supported set");
  }
  r.doc["valid"] = true;
  r.text = "valid " + r.doc["kind"].get<std::string>();
  return r;
}

Report cmd_run(const std::string& automaton, const std::string& word_path, bool trace)
{
  auto ra = load_automaton(automaton);
  auto word = read_word_file(word_path);
  auto res = parsing(word_path, [&] { return run_trace(ra, word); });
  Report r;
  r.exit_code = res.accepted ? 0 : 1;
  r.text = res.accepted ? "accept" : "reject";
  r.doc = {{"accepted", res.accepted}, {"dropped", res.dropped}};
  if (trace) {
    json steps = json::array();
    std::ostringstream out;
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
      json configs = json::array();
      out << "\n" << i << ":";
      for (const auto& c : res.trace[i]) {
        configs.push_back(io::ext_to_json(c, ra.locations));
        out << " " << ra.locations.id(c.base) << to_string(c.pi.images());
      }
      steps.push_back(configs);
    }
    r.doc["trace"] = steps;
    r.text += out.str();
  }
  return r;
}

Report cmd_orbits(const std::string& automaton, std::optional<std::size_t> pool_size,
                  std::size_t depth)
{
  auto ra = load_automaton(automaton);
  auto n = pool_size.value_or(1 + ra.locations.max_support_size());
  auto s = parsing(automaton, [&] { return reachable_orbits(ra, first_atoms(n), depth); });
  Report r;
  r.doc = {{"orbits", s.orbits}, {"configurations", s.configs}, {"per_location", s.per_location},
           {"pool", n}, {"depth", depth}};
  std::ostringstream out;
  out << "orbits " << s.orbits;
  for (const auto& [loc, k] : s.per_location)
    out << "\n  " << loc << " " << k;
  r.text = out.str();
  return r;
}

Report cmd_to_db(const std::string& term)
{
  auto t = parsing(term, [&] { return parse_named_term(term); });
  auto d = to_debruijn(t);
  Report r;
  r.text = to_string(d);
  r.doc = {{"term", io::db_to_json(d)}, {"text", r.text}};
  return r;
}

Report cmd_from_db(const std::string& term)
{
  auto d = parsing(term, [&] { return parse_db_term(term); });
  auto t = from_debruijn(d);
  Report r;
  r.text = to_string(t);
  r.doc = {{"term", io::term_to_json(t)}, {"text", r.text}};
  return r;
}

Report cmd_alpha_eq(const std::string& a, const std::string& b)
{
  auto s = parsing(a, [&] { return parse_named_term(a); });
  auto t = parsing(b, [&] { return parse_named_term(b); });
  bool eq = term_alpha_eq(s, t);
  Report r;
  r.exit_code = eq ? 0 : 1;
  r.text = eq ? "alpha-equivalent" : "not alpha-equivalent";
  r.doc = {{"alpha_equivalent", eq}};
  return r;
}

Report cmd_quot_eq(const std::string& path, const std::string& a, const std::string& b,
                   std::optional<std::size_t> pool_size)
{
  auto p = load_presentation(path);
  auto x = parse_elem(p, a), y = parse_elem(p, b);
  auto pool = enlarged(default_pool(p, {x, y}), p.sym, pool_size);
  bool eq = parsing(path, [&] { return quot_eq(p, x, y, pool); });
  Report r;
  r.exit_code = eq ? 0 : 1;
  r.text = eq ? "equal" : "distinct";
  r.doc = {{"equal", eq}, {"pool", io::support_to_json(pool.atoms)}};
  return r;
}

Report cmd_quot_count(const std::string& path, std::optional<std::size_t> pool_size, bool orbits)
{
  auto p = load_presentation(path);
  auto pool = counting_pool(p, pool_size);
  auto n = parsing(path, [&] { return orbits ? orbit_count(p, pool) : element_count(p, pool); });
  Report r;
  r.text = std::to_string(n);
  r.doc = {{orbits ? "orbits" : "elements", n}, {"pool", io::support_to_json(pool.atoms)}};
  return r;
}

Report cmd_quot_supp(const std::string& path, const std::string& elem,
                     std::optional<std::size_t> pool_size)
{
  auto p = load_presentation(path);
  auto e = parse_elem(p, elem);
  auto pool = enlarged(default_pool(p, {e}), p.sym, pool_size);
  auto s = parsing(path, [&] { return supp_of(p, e, pool); });
  Report r;
  r.text = s.str();
  r.doc = {{"support", io::support_to_json(s)}, {"pool", io::support_to_json(pool.atoms)}};
  return r;
}

std::vector<testkit::SuiteResult> run_suites(std::uint64_t seed, std::size_t budget)
{
  using namespace testkit;
  std::vector<SuiteResult> out;
  if (budget == 0)
    return out;
  auto n = [&](std::size_t base) { return base * budget; };
  std::uint64_t k = 0;
  auto rng = [&] { return Rng(seed + k++); };
  for (auto sym : {SymmetryId::Equality, SymmetryId::TotalOrder, SymmetryId::Renaming}) {
    auto g = rng();
    out.push_back(global_map_algebra(g, sym, n(200)));
    auto l = rng();
    out.push_back(lock_free_suite(l, sym, n(200)));
    auto m = rng();
    out.push_back(monad_laws(m, sym, n(300)));
  }
  {
    auto r1 = rng(), r2 = rng(), r3 = rng();
    out.push_back(coequalizer_suite(r1, n(200)));
    out.push_back(iso_suite());
    out.push_back(classifier_suite(r2, n(100)));
    out.push_back(presentation_vs_closure(r3, n(30)));
  }
  out.push_back(unordered_pairs_suite());
  {
    auto r1 = rng(), r2 = rng(), r3 = rng();
    out.push_back(phi_suite(r1, n(500)));
    out.push_back(alpha_triple(r2, n(500)));
    out.push_back(debruijn_roundtrip(r3, n(500)));
  }
  {
    auto r1 = rng(), r2 = rng(), r3 = rng(), r4 = rng(), r5 = rng();
    out.push_back(first_repeat_suite(r1, n(100)));
    out.push_back(determinization_suite(r2, n(50)));
    out.push_back(config_equivariance(r3, first_repeat_automaton(), n(100)));
    out.push_back(config_equivariance(r4, increasing_automaton(), n(100)));
    out.push_back(ext_determinization(r5, n(200)));
  }
  return out;
}

Report cmd_selfcheck(std::uint64_t seed, std::size_t budget)
{
  auto suites = run_suites(seed, budget);
  Report r;
  json arr = json::array();
  std::ostringstream out;
  std::size_t failed = 0;
  for (const auto& s : suites) {
    failed += !s.ok();
    arr.push_back({{"suite", s.name},
                   {"cases", s.cases},
                   {"failures", s.failures},
                   {"counterexamples", s.counterexamples}});
    out << (s.ok() ? "ok   " : "FAIL ") << s.name << " " << s.cases << " cases, " << s.failures
        << " failures\n";
    for (const auto& c : s.counterexamples)
      out << "     " << c << "\n";
  }
  r.exit_code = failed ? 1 : 0;
  r.doc = {{"seed", seed}, {"budget", budget}, {"suites", arr}, {"failed", failed}};
  if (!suites.empty())
    out << failed << " of " << suites.size() << " suites failed";
  r.text = out.str();
  return r;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Finitely supported sets, nominal presentations, binding and register automata"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::optional<std::size_t> pool;
  std::function<Report()> action;
  std::string a, b, c;
  std::size_t depth = 4, budget = 1;
  std::uint64_t seed = 1;
  bool trace = false;

  auto pool_opt = [&](CLI::App* sub, const char* help) {
    sub->add_option("--pool", pool, help);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check an automaton, presentation or set file");
  validate_cmd->add_option("file", a)->required();
  validate_cmd->callback([&] { action = [&] { return cmd_validate(a); }; });

  auto* run_cmd = app.add_subcommand("run", "Run a register automaton on a word file ('-' for stdin)");
  run_cmd->add_option("automaton", a)->required();
  run_cmd->add_option("word", b)->required();
  run_cmd->add_flag("--trace", trace, "Print reachable configurations after each letter");
  run_cmd->callback([&] { action = [&] { return cmd_run(a, b, trace); }; });

  auto* orbits_cmd = app.add_subcommand("orbits", "Count reachable configuration orbits");
  orbits_cmd->add_option("automaton", a)->required();
  pool_opt(orbits_cmd, "Input atoms {0..N-1} (default: 1 + largest location support)");
  orbits_cmd->add_option("--depth", depth, "Word length bound")->capture_default_str();
  orbits_cmd->callback([&] { action = [&] { return cmd_orbits(a, pool, depth); }; });

  auto* lambda = app.add_subcommand("lambda", "Lambda-term conversions");
  lambda->require_subcommand(1);
  auto* to_db = lambda->add_subcommand("to-db", "Named term to de Bruijn form");
  to_db->add_option("term", a)->required();
  to_db->callback([&] { action = [&] { return cmd_to_db(a); }; });
  auto* from_db = lambda->add_subcommand("from-db", "De Bruijn term to named form");
  from_db->add_option("term", a)->required();
  from_db->callback([&] { action = [&] { return cmd_from_db(a); }; });
  auto* alpha = lambda->add_subcommand("alpha-eq", "Decide alpha-equivalence of two named terms");
  alpha->add_option("left", a)->required();
  alpha->add_option("right", b)->required();
  alpha->callback([&] { action = [&] { return cmd_alpha_eq(a, b); }; });

  auto* quot = app.add_subcommand("quot", "Queries on a finite nominal presentation");
  quot->require_subcommand(1);
  auto* qeq = quot->add_subcommand("eq", "Compare two elements given as ExtElem JSON");
  qeq->add_option("presentation", a)->required();
  qeq->add_option("left", b)->required();
  qeq->add_option("right", c)->required();
  pool_opt(qeq, "Grow the default pool to at least N atoms");
  qeq->callback([&] { action = [&] { return cmd_quot_eq(a, b, c, pool); }; });
  auto* qcount = quot->add_subcommand("count", "Count classes over a pool");
  qcount->add_option("presentation", a)->required();
  pool_opt(qcount, "Use the pool {0..N-1}");
  qcount->callback([&] { action = [&] { return cmd_quot_count(a, pool, false); }; });
  auto* qorbits = quot->add_subcommand("orbits", "Count orbits over a pool");
  qorbits->add_option("presentation", a)->required();
  pool_opt(qorbits, "Use the pool {0..N-1}");
  qorbits->callback([&] { action = [&] { return cmd_quot_count(a, pool, true); }; });
  auto* qsupp = quot->add_subcommand("supp", "Least support of an element's class");
  qsupp->add_option("presentation", a)->required();
  qsupp->add_option("element", b)->required();
  pool_opt(qsupp, "Grow the default pool to at least N atoms");
  qsupp->callback([&] { action = [&] { return cmd_quot_supp(a, b, pool); }; });

  auto* self = app.add_subcommand("selfcheck", "Run every property suite");
  self->add_option("--seed", seed, "Random seed")->capture_default_str();
  self->add_option("--budget", budget, "Sample-size multiplier; 0 runs nothing")
      ->capture_default_str();
  self->callback([&] { action = [&] { return cmd_selfcheck(seed, budget); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto fmt = format == "json" ? Format::Json : Format::Text;
  try {
    auto r = action();
    if (fmt == Format::Json)
      std::cout << r.doc.dump(2) << "\n";
    else if (!r.text.empty())
      std::cout << r.text << "\n";
    return r.exit_code;
  } catch (const Failure& f) {
    if (fmt == Format::Json) {
      std::cout << json{{"errors", errors_json(f.errors)}}.dump(2) << "\n";
    } else {
      for (const auto& e : f.errors)
        std::cerr << "error [" << e.code << "] " << e.where << ": " << e.message << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    if (fmt == Format::Json)
      std::cout << json{{"errors", errors_json({{"internal", "", e.what()}})}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
