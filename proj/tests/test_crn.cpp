#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sqcrn/crn.hpp"
#include "sqcrn/parser.hpp"

using namespace sqcrn;

TEST_CASE("parsing the degradation toy") {
  Crn crn = parse_crn("species L\ninit L=13\nr d: L -> 0 @ 1e-4\n");
  REQUIRE(crn.species.size() == 1);
  CHECK(crn.species[0].name == "L");
  REQUIRE(crn.reactions.size() == 1);
  CHECK(crn.reactions[0].change == std::vector<Count>{-1});
  CHECK(crn.reactions[0].rate_coefficient == doctest::Approx(1e-4));
  CHECK(crn.initial_state == State{13});
}

TEST_CASE("parsing stoichiometry with coefficients") {
  Crn crn = parse_crn("species A, B, C\nr t1: A + B -> 2 C @ 0.5\n");
  const Reaction& r = crn.reactions[0];
  CHECK(r.reactants == std::vector<Count>{1, 1, 0});
  CHECK(r.products == std::vector<Count>{0, 0, 2});
  CHECK(r.change == std::vector<Count>{-1, -1, 2});
}

TEST_CASE("parser errors carry line numbers and names") {
  CHECK_THROWS_WITH_AS(parse_crn("species A\nr bad: A -> Z @ 1\n"),
                       doctest::Contains("Z"), ParseError);
  try {
    parse_crn("species A\nr bad: A -> Z @ 1\n");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_crn("species A, A\n"), ParseError);
  CHECK_THROWS_AS(parse_crn("species A\nr r1: A -> 0 @ 0\n"), ParseError);
  CHECK_THROWS_AS(parse_crn("species A\nr r1: A -> 0 @ -1\n"), ParseError);
  CHECK_THROWS_AS(parse_crn("species A\nr r1: A 0 @ 1\n"), ParseError);
  CHECK_THROWS_AS(parse_crn("species A\nr r1: A + -> 0 @ 1\n"), ParseError);
}

TEST_CASE("enabledness") {
  Crn crn = parse_crn("species A, B, C\nr t1: A + B -> 2 C @ 0.5\nr t2: 2 A -> B @ 1\n");
  CHECK(enabled(crn.reactions[0], State{2, 3, 0}));
  CHECK_FALSE(enabled(crn.reactions[1], State{1, 5, 0}));
  Crn empty_complex = parse_crn("species A\nr b: 0 -> A @ 1\n");
  CHECK(enabled(empty_complex.reactions[0], State{0}));
  CHECK(enabled(empty_complex.reactions[0], State{7}));
}

TEST_CASE("applying reactions") {
  Crn crn = parse_crn("species A, B, C\nr t1: A + B -> 2 C @ 0.5\n");
  CHECK(apply_reaction(State{2, 3, 0}, crn.reactions[0]) == State{1, 2, 2});
  Crn deg = parse_crn("species L\nr d: L -> 0 @ 1e-4\n");
  CHECK(apply_reaction(State{13}, deg.reactions[0]) == State{12});
  CHECK_THROWS_AS(apply_reaction(State{0}, deg.reactions[0]), std::invalid_argument);
}

TEST_CASE("propensity uses the combinatorial form") {
  Crn deg = parse_crn("species L\nr d: L -> 0 @ 1e-4\n");
  CHECK(propensity(deg, deg.reactions[0], State{13}) == doctest::Approx(13e-4));

  Crn dimer = parse_crn("species M, D\nr dim: M + M -> D @ 0.083\n");
  CHECK(propensity(dimer, dimer.reactions[0], State{2, 0}) == doctest::Approx(0.083));
  CHECK(propensity(dimer, dimer.reactions[0], State{1, 0}) == 0.0);
  CHECK(propensity(dimer, dimer.reactions[0], State{0, 0}) == 0.0);
  // binom(5,2) = 10
  CHECK(propensity(dimer, dimer.reactions[0], State{5, 0}) == doctest::Approx(0.83));
}

TEST_CASE("propensity is positive exactly when enabled") {
  Crn crn = parse_crn(
      "species A, B\nr t1: A + B -> B @ 0.5\nr t2: 2 A -> B @ 1\nr t3: 0 -> A @ 2\n");
  for (Count a = 0; a <= 4; ++a)
    for (Count b = 0; b <= 4; ++b)
      for (const Reaction& r : crn.reactions)
        CHECK((propensity(crn, r, State{a, b}) > 0.0) == enabled(r, State{a, b}));
}

TEST_CASE("propensity is monotone in each reactant population") {
  Crn crn = parse_crn("species A, B\nr t: 2 A + B -> B @ 0.7\n");
  for (Count a = 0; a <= 10; ++a)
    for (Count b = 0; b <= 10; ++b) {
      double here = propensity(crn, crn.reactions[0], State{a, b});
      CHECK(propensity(crn, crn.reactions[0], State{a + 1, b}) >= here);
      CHECK(propensity(crn, crn.reactions[0], State{a, b + 1}) >= here);
    }
}

TEST_CASE("total rate entry") {
  Crn deg = parse_crn("species L\ninit L=13\nr d: L -> 0 @ 1e-4\n");
  CHECK(total_rate_entry(deg, State{13}, State{12}) == doctest::Approx(13e-4));
  CHECK(total_rate_entry(deg, State{13}, State{13}) == 0.0);

  Crn twin = parse_crn("species A, B\nr t1: A -> B @ 1\nr t2: A -> B @ 1\n");
  CHECK(total_rate_entry(twin, State{1, 0}, State{0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("total rate entry equals a brute-force sum over reactions") {
  Crn crn = parse_crn(
      "species A, B\nr t1: A -> B @ 0.3\nr t2: A -> B @ 1.1\nr t3: B -> A @ 2\n"
      "r t4: A + B -> 2 B @ 0.05\n");
  for (Count a = 0; a <= 3; ++a)
    for (Count b = 0; b <= 3; ++b)
      for (Count a2 = 0; a2 <= 4; ++a2)
        for (Count b2 = 0; b2 <= 4; ++b2) {
          State from{a, b}, to{a2, b2};
          double expected = 0.0;
          for (const Reaction& r : crn.reactions) {
            if (!enabled(r, from) || from == to)
              continue;
            if (from[0] + r.change[0] == to[0] && from[1] + r.change[1] == to[1])
              expected += propensity(crn, r, from);
          }
          CHECK(total_rate_entry(crn, from, to) == doctest::Approx(expected));
        }
}

namespace {

Crn random_crn(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> species_count(1, 4);
  std::uniform_int_distribution<int> reaction_count(1, 5);
  std::uniform_int_distribution<int> coefficient(0, 2);
  std::uniform_int_distribution<int> population(0, 30);
  std::uniform_real_distribution<double> rate(1e-6, 10.0);

  Crn crn;
  int ns = species_count(rng);
  for (int i = 0; i < ns; ++i)
    crn.species.push_back({"s" + std::to_string(i), static_cast<std::size_t>(i)});
  crn.initial_state.resize(ns);
  for (int i = 0; i < ns; ++i)
    crn.initial_state[i] = population(rng);
  int nr = reaction_count(rng);
  for (int i = 0; i < nr; ++i) {
    Reaction r;
    r.label = "r" + std::to_string(i);
    r.reactants.resize(ns);
    r.products.resize(ns);
    r.change.resize(ns);
    for (int sp = 0; sp < ns; ++sp) {
      r.reactants[sp] = coefficient(rng);
      r.products[sp] = coefficient(rng);
      r.change[sp] = r.products[sp] - r.reactants[sp];
    }
    r.rate_coefficient = rate(rng);
    crn.reactions.push_back(std::move(r));
  }
  return crn;
}

bool same_crn(const Crn& a, const Crn& b) {
  if (a.species.size() != b.species.size() || a.reactions.size() != b.reactions.size())
    return false;
  for (std::size_t i = 0; i < a.species.size(); ++i)
    if (a.species[i].name != b.species[i].name)
      return false;
  if (a.initial_state != b.initial_state || a.time_unit != b.time_unit)
    return false;
  for (std::size_t i = 0; i < a.reactions.size(); ++i) {
    const Reaction& x = a.reactions[i];
    const Reaction& y = b.reactions[i];
    if (x.label != y.label || x.reactants != y.reactants || x.products != y.products ||
        x.rate_coefficient != y.rate_coefficient)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("print/parse round-trips exactly") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    Crn crn = random_crn(rng);
    Crn reparsed = parse_crn(print_crn(crn));
    CAPTURE(print_crn(crn));
    CHECK(same_crn(crn, reparsed));
  }
  for (const char* name : {"degradation.crn", "gene_slow.crn", "goutsias.crn", "viral.crn"}) {
    Crn crn = test_helpers::load_crn(name);
    CHECK(same_crn(crn, parse_crn(print_crn(crn))));
  }
}

TEST_CASE("corpus models load with the published stoichiometry") {
  Crn goutsias = test_helpers::load_crn("goutsias.crn");
  CHECK(goutsias.species.size() == 6);
  CHECK(goutsias.reactions.size() == 10);
  CHECK(goutsias.initial_state == State{2, 6, 0, 1, 0, 0});

  Crn viral = test_helpers::load_crn("viral.crn");
  CHECK(viral.species.size() == 4);
  CHECK(viral.initial_state == State{0, 1, 0, 0});
  // the packaging reaction consumes its reactants and yields inert V
  const Reaction& pack = viral.reactions[0];
  CHECK(pack.change == std::vector<Count>{-1, 0, -1, 1});
}
