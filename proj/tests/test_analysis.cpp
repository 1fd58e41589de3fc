#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sqcrn/analysis.hpp"
#include "sqcrn/concrete_ctmc.hpp"
#include "sqcrn/magnitude.hpp"
#include "sqcrn/scc.hpp"

using namespace sqcrn;
using test_helpers::CycleFixture;
using test_helpers::cycle_fixture;

namespace {

std::vector<std::vector<std::uint32_t>> kept_adjacency(const PrunedGraph& pruned) {
  std::vector<std::vector<std::uint32_t>> adj(pruned.model->state_count());
  for (std::uint32_t s = 0; s < adj.size(); ++s)
    adj[s] = pruned.kept_successors(s);
  return adj;
}

// Random sparse graphs with rates spread over several orders of magnitude.
AbstractCtmc random_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> state_count(2, 12);
  std::uniform_int_distribution<int> edge_count(1, 30);
  std::uniform_int_distribution<int> mag(-4, 3);
  std::uniform_real_distribution<double> mantissa(1.0, 9.99);

  AbstractCtmc m;
  int n = state_count(rng);
  for (int i = 0; i < n; ++i) {
    m.labels.push_back("n" + std::to_string(i));
    m.outgoing.emplace_back();
  }
  int edges = edge_count(rng);
  for (int e = 0; e < edges; ++e)
    m.reaction_labels.push_back("e" + std::to_string(e));
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int e = 0; e < edges; ++e) {
    std::uint32_t source = static_cast<std::uint32_t>(pick(rng));
    std::uint32_t target = static_cast<std::uint32_t>(pick(rng));
    double rate = mantissa(rng) * std::pow(10.0, mag(rng));
    add_transition(m, source, target, static_cast<std::uint32_t>(e), rate);
  }
  m.initial = 0;
  return m;
}

const ComponentRecord& component_with_members(const AnalysisReport& report,
                                              std::vector<std::uint32_t> members) {
  std::sort(members.begin(), members.end());
  for (const ComponentRecord& c : report.components)
    if (c.members == members)
      return c;
  REQUIRE(false);
  static ComponentRecord dummy;
  return dummy;
}

}  // namespace

TEST_CASE("scc decomposition") {
  SUBCASE("kept part of the cycle fixture") {
    CycleFixture f = cycle_fixture();
    PrunedGraph pruned = prune(f.model, 0);
    auto sccs = strongly_connected_components(kept_adjacency(pruned));
    // {s0}, {s1,s2,s3}, {t}, {u}
    REQUIRE(sccs.size() == 4);
    CHECK(sccs[0] == std::vector<std::uint32_t>{CycleFixture::s0});
    CHECK(sccs[1] == std::vector<std::uint32_t>{CycleFixture::s1, CycleFixture::s2,
                                                CycleFixture::s3});
    CHECK(sccs[2] == std::vector<std::uint32_t>{CycleFixture::t});
    CHECK(sccs[3] == std::vector<std::uint32_t>{CycleFixture::u});
  }
  SUBCASE("a DAG decomposes into singletons") {
    std::vector<std::vector<std::uint32_t>> adj = {{1, 2}, {2}, {}};
    CHECK(strongly_connected_components(adj).size() == 3);
  }
  SUBCASE("a full cycle is one component") {
    std::vector<std::vector<std::uint32_t>> adj = {{1}, {2}, {0}};
    auto sccs = strongly_connected_components(adj);
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0] == std::vector<std::uint32_t>{0, 1, 2});
  }
}

TEST_CASE("pruning keeps the per-state magnitude band") {
  AbstractCtmc m;
  m.labels = {"a", "b", "c", "d"};
  m.outgoing.resize(4);
  m.reaction_labels = {"x", "y", "z", "w", "v"};
  std::uint32_t e100 = add_transition(m, 0, 1, 0, 100.0);
  std::uint32_t e10 = add_transition(m, 0, 2, 1, 10.0);
  std::uint32_t e1 = add_transition(m, 0, 3, 2, 1.0);
  std::uint32_t tie_a = add_transition(m, 1, 2, 3, 200.0);
  std::uint32_t tie_b = add_transition(m, 1, 3, 4, 700.0);

  PrunedGraph p0 = prune(m, 0);
  CHECK(p0.is_kept(e100));
  CHECK_FALSE(p0.is_kept(e10));
  CHECK_FALSE(p0.is_kept(e1));
  CHECK(p0.is_kept(tie_a));  // same magnitude as the maximum
  CHECK(p0.is_kept(tie_b));

  PrunedGraph p1 = prune(m, 1);
  CHECK(p1.is_kept(e100));
  CHECK(p1.is_kept(e10));
  CHECK_FALSE(p1.is_kept(e1));
}

TEST_CASE("pruning is monotone, non-empty per state, and scale invariant") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    AbstractCtmc m = random_graph(rng);
    PrunedGraph previous = prune(m, 0);
    for (std::uint32_t s = 0; s < m.state_count(); ++s)
      if (!m.outgoing[s].empty()) {
        bool any = false;
        for (std::uint32_t t : m.outgoing[s])
          any = any || previous.is_kept(t);
        CHECK(any);
      }
    for (unsigned n = 1; n <= 8; ++n) {
      PrunedGraph next = prune(m, n);
      for (std::uint32_t t = 0; t < m.transitions.size(); ++t)
        if (previous.is_kept(t))
          CHECK(next.is_kept(t));
      previous = next;
    }
    CHECK(std::count(previous.kept.begin(), previous.kept.end(), false) == 0);

    AbstractCtmc scaled = m;
    for (std::uint32_t t = 0; t < scaled.transitions.size(); ++t) {
      scaled.transitions[t].rate *= 1000.0;
      scaled.transitions[t].magnitude += 3;
    }
    CHECK(prune(scaled, 2).kept == prune(m, 2).kept);
  }
}

TEST_CASE("component steady state") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  SUBCASE("staying rates 10, 10, 100") {
    auto steady = component_steady_state(
        pruned, {CycleFixture::s1, CycleFixture::s2, CycleFixture::s3});
    REQUIRE(steady.size() == 3);
    CHECK(steady[0].weight == 0.5);
    CHECK(steady[1].weight == 0.5);
    CHECK(steady[2].weight == 0.05);
    CHECK(steady[0].mag == -1);
    CHECK(steady[1].mag == -1);
    CHECK(steady[2].mag == -2);
  }
  SUBCASE("uniform cycles spread evenly") {
    AbstractCtmc m;
    m.labels = {"a", "b", "c", "d"};
    m.outgoing.resize(4);
    m.reaction_labels = {"r"};
    for (std::uint32_t i = 0; i < 4; ++i)
      add_transition(m, i, (i + 1) % 4, 0, 2.5);
    PrunedGraph p = prune(m, 0);
    auto steady = component_steady_state(p, {0, 1, 2, 3});
    for (const auto& e : steady)
      CHECK(e.weight == doctest::Approx(0.25));
  }
  SUBCASE("two-cycle magnitudes match the oracle stationary distribution") {
    AbstractCtmc m;
    m.labels = {"a", "b"};
    m.outgoing.resize(2);
    m.reaction_labels = {"r", "s"};
    add_transition(m, 0, 1, 0, 1.0);
    add_transition(m, 1, 0, 1, 1000.0);
    PrunedGraph p = prune(m, 0);
    auto steady = component_steady_state(p, {0, 1});
    // minStayingRate 1 occurs once: weights 1/1 and 1/1000
    CHECK(steady[0].weight == doctest::Approx(1.0));
    CHECK(steady[1].weight == doctest::Approx(0.001));

    ConcreteCtmc oracle;
    oracle.states = {{0}, {1}};
    oracle.index = {{{0}, 0}, {{1}, 1}};
    oracle.rows = {{{1, 1.0}}, {{0, 1000.0}}};
    oracle.exit_rates = {1.0, 1000.0};
    oracle.initial = {1.0, 0.0};
    auto pi = bscc_steady_state(oracle, {0, 1});
    double total = steady[0].weight + steady[1].weight;
    CHECK(magnitude(steady[0].weight / total) == magnitude(pi[0]));
    CHECK(magnitude(steady[1].weight / total) == magnitude(pi[1]));
  }
}

TEST_CASE("exit state selection") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  SUBCASE("magnitude ties select both candidates") {
    auto exits = select_exit_states(
        pruned, {CycleFixture::s1, CycleFixture::s2, CycleFixture::s3});
    CHECK(exits == std::vector<std::uint32_t>{CycleFixture::s2, CycleFixture::s3});
  }
  SUBCASE("a clearly better ratio wins alone") {
    AbstractCtmc m;
    m.labels = {"a", "b", "x", "y"};
    m.outgoing.resize(4);
    m.reaction_labels = {"r0", "r1", "r2", "r3"};
    add_transition(m, 0, 1, 0, 100.0);  // staying a
    add_transition(m, 1, 0, 1, 100.0);  // staying b
    add_transition(m, 0, 2, 2, 10.0);   // ratio magnitude 1
    add_transition(m, 1, 3, 3, 0.1);    // ratio magnitude 3
    PrunedGraph p = prune(m, 0);
    CHECK(select_exit_states(p, {0, 1}) == std::vector<std::uint32_t>{0});
  }
  SUBCASE("single exit candidate") {
    AbstractCtmc m;
    m.labels = {"a", "b", "x"};
    m.outgoing.resize(3);
    m.reaction_labels = {"r0", "r1", "r2"};
    add_transition(m, 0, 1, 0, 10.0);
    add_transition(m, 1, 0, 1, 10.0);
    add_transition(m, 0, 2, 2, 0.5);
    PrunedGraph p = prune(m, 0);
    CHECK(select_exit_states(p, {0, 1}) == std::vector<std::uint32_t>{0});
  }
}

TEST_CASE("time to exit") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  std::vector<std::uint32_t> members{CycleFixture::s1, CycleFixture::s2,
                                     CycleFixture::s3};
  TimeEstimate a = time_to_exit(pruned, members, CycleFixture::s2);
  CHECK(a.value == 1.0);  // 10*2 / (2*10*1)
  CHECK(a.mag == 0);
  TimeEstimate b = time_to_exit(pruned, members, CycleFixture::s3);
  CHECK(b.value == 1.0);  // 100*2 / (2*10*10)
  CHECK(b.mag == 0);

  SUBCASE("a singleton component reduces to the exponential mean") {
    AbstractCtmc m;
    m.labels = {"a", "x"};
    m.outgoing.resize(2);
    m.reaction_labels = {"stay", "go"};
    add_transition(m, 0, 0, 0, 50.0);
    add_transition(m, 0, 1, 1, 0.2);
    PrunedGraph p = prune(m, 0);
    TimeEstimate t = time_to_exit(p, {0}, 0);
    CHECK(t.value == doctest::Approx(1.0 / 0.2));
    CHECK(t.mag == 1 - 0 - 0 - 1 - (-1));
  }
}

TEST_CASE("exit distribution") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  std::vector<std::uint32_t> members{CycleFixture::s1, CycleFixture::s2,
                                     CycleFixture::s3};
  SUBCASE("the cycle's two exits are equally likely") {
    auto shares = exit_distribution(pruned, members,
                                    {{CycleFixture::s2, 1.0}, {CycleFixture::s3, 10.0}});
    REQUIRE(shares.size() == 2);
    CHECK(shares[0].first == doctest::Approx(0.5));
    CHECK(shares[1].first == doctest::Approx(0.5));
    CHECK(shares[0].second == shares[1].second);
  }
  SUBCASE("a single exit takes everything") {
    auto shares = exit_distribution(pruned, members, {{CycleFixture::s2, 1.0}});
    REQUIRE(shares.size() == 1);
    CHECK(shares[0].first == doctest::Approx(1.0));
  }
  SUBCASE("shares two orders apart") {
    auto shares = exit_distribution(pruned, members,
                                    {{CycleFixture::s2, 1.0}, {CycleFixture::s2, 100.0}});
    CHECK(shares[1].second - shares[0].second == 2);
  }
}

TEST_CASE("transient time") {
  TimeEstimate a = transient_time({1.0, 10.0, 100.0});
  CHECK(a.value == doctest::Approx(1.0));
  CHECK(a.mag == 0);
  TimeEstimate b = transient_time({5.0, 5.0});
  CHECK(b.value == doctest::Approx(0.4));
  CHECK(b.mag == 0 - 0);
  TimeEstimate c = transient_time({});
  CHECK(c.value == 0.0);
}

TEST_CASE("analysis of the cycle fixture at pruning level 0") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  AnalysisReport report = analyze(f.model, pruned);

  // iteration 1 finds {t} (confirmed bottom) and the cycle
  const ComponentRecord& bottom = component_with_members(report, {CycleFixture::t});
  CHECK(bottom.kind == ComponentKind::confirmed_bottom);
  CHECK(bottom.iteration == 1);
  const ComponentRecord& cycle = component_with_members(
      report, {CycleFixture::s1, CycleFixture::s2, CycleFixture::s3});
  CHECK(cycle.iteration == 1);
  REQUIRE(cycle.steady.size() == 3);
  CHECK(cycle.steady[0].weight == 0.5);
  CHECK(cycle.steady[1].weight == 0.5);
  CHECK(cycle.steady[2].weight == 0.05);

  // iteration 2 exits via s2->s0 and s3->s1 with unit expected times
  REQUIRE(report.exits.size() == 2);
  for (const ExitRecord& e : report.exits) {
    CHECK(e.iteration == 2);
    CHECK(e.time_to_exit.value == 1.0);
    CHECK(e.share == 0.5);
  }
  CHECK(report.exits[0].transition == f.e_s2_s0);
  CHECK(report.exits[1].transition == f.e_s3_s1_slow);

  // the s2->s0 exit reaches the initial component: alternation merge
  REQUIRE(report.merges.size() == 1);
  CHECK(report.merges[0].kind == MergeEvent::Kind::alternation);
  const ComponentRecord& merged = component_with_members(
      report, {CycleFixture::s0, CycleFixture::s1, CycleFixture::s2, CycleFixture::s3});
  CHECK(merged.kind == ComponentKind::transient_merged);
  CHECK(merged.iteration == 1);

  // the fast edge to u is never followed at pruning level 0
  CHECK(report.component_of_state(CycleFixture::u) == nullptr);
  CHECK(report.transition_iteration[f.e_s3_u] == -1);
  for (const ExitRecord& e : report.exits)
    CHECK(e.transition != f.e_s3_u);
}

TEST_CASE("analysis of the cycle fixture at pruning level 1") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 1);
  AnalysisReport report = analyze(f.model, pruned);

  // everything is kept; the flow continues through to t and u
  const ComponentRecord* u_comp = report.component_of_state(CycleFixture::u);
  REQUIRE(u_comp != nullptr);
  CHECK(u_comp->kind == ComponentKind::confirmed_bottom);
  CHECK(report.transition_iteration[f.e_s3_u] >= 1);
}

TEST_CASE("an absorbing single state is a confirmed bottom with unit mass") {
  AbstractCtmc m;
  m.labels = {"only"};
  m.outgoing.resize(1);
  m.initial = 0;
  PrunedGraph pruned = prune(m, 0);
  AnalysisReport report = analyze(m, pruned);
  const ComponentRecord& c = component_with_members(report, {0});
  CHECK(c.kind == ComponentKind::confirmed_bottom);
  REQUIRE(c.steady.size() == 1);
  CHECK(c.steady[0].weight == 1.0);
  CHECK(report.exits.empty());
}

TEST_CASE("a two-component chain reports the transient path and the bottom") {
  AbstractCtmc m;
  m.labels = {"a", "mid", "b"};
  m.outgoing.resize(3);
  m.reaction_labels = {"stay_a", "leave", "walk", "stay_b"};
  add_transition(m, 0, 0, 0, 10.0);  // a cycles on itself
  add_transition(m, 0, 1, 1, 0.01);  // slow exit
  add_transition(m, 1, 2, 2, 5.0);   // transient walk
  add_transition(m, 2, 2, 3, 1.0);   // b cycles on itself
  m.initial = 0;
  PrunedGraph pruned = prune(m, 0);
  AnalysisReport report = analyze(m, pruned);

  const ComponentRecord& b = component_with_members(report, {2});
  CHECK(b.iteration == 2);
  REQUIRE(report.exits.size() == 1);
  CHECK(report.exits[0].state == 0);
  bool found_path = false;
  for (const PathRecord& p : report.paths)
    if (p.to_component == b.id && p.states == std::vector<std::uint32_t>{1}) {
      found_path = true;
      CHECK(p.time.value == doctest::Approx(0.2));
      CHECK(p.min_rate == 5.0);
    }
  CHECK(found_path);
}

TEST_CASE("iteration indices are the parent's plus one") {
  CycleFixture f = cycle_fixture();
  PrunedGraph pruned = prune(f.model, 0);
  AnalysisReport report = analyze(f.model, pruned);
  for (const ExitRecord& e : report.exits) {
    const ComponentRecord& c = report.components[e.component];
    CHECK(e.iteration == c.iteration + 1);
  }
  for (const PathRecord& p : report.paths)
    if (p.via_transition != kNoId)
      CHECK(p.iteration == report.transition_iteration[p.via_transition]);
}

TEST_CASE("rescaling all rates shifts time magnitudes and nothing else") {
  CycleFixture base = cycle_fixture(1.0);
  CycleFixture scaled = cycle_fixture(1000.0);
  for (unsigned level : {0u, 1u}) {
    AnalysisReport a = analyze(base.model, prune(base.model, level));
    AnalysisReport b = analyze(scaled.model, prune(scaled.model, level));
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
      CHECK(a.components[i].members == b.components[i].members);
      CHECK(a.components[i].kind == b.components[i].kind);
      CHECK(a.components[i].iteration == b.components[i].iteration);
      REQUIRE(a.components[i].steady.size() == b.components[i].steady.size());
      for (std::size_t j = 0; j < a.components[i].steady.size(); ++j)
        CHECK(a.components[i].steady[j].mag == b.components[i].steady[j].mag);
    }
    REQUIRE(a.exits.size() == b.exits.size());
    for (std::size_t i = 0; i < a.exits.size(); ++i) {
      CHECK(a.exits[i].transition == b.exits[i].transition);
      CHECK(a.exits[i].share_mag == b.exits[i].share_mag);
      CHECK(a.exits[i].time_to_exit.mag - b.exits[i].time_to_exit.mag == 3);
    }
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i)
      if (!a.paths[i].states.empty() || a.paths[i].min_rate > 0.0)
        CHECK(a.paths[i].time.mag - b.paths[i].time.mag == 3);
  }
}

TEST_CASE("confirmed bottoms of the level-0 analysis are kept-graph BSCCs") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    AbstractCtmc m = random_graph(rng);
    PrunedGraph pruned = prune(m, 0);
    AnalysisReport report;
    try {
      report = analyze(m, pruned);
    } catch (const std::invalid_argument&) {
      continue;  // graphs where some rate rounds to zero magnitude-wise
    }
    auto adjacency = kept_adjacency(pruned);
    for (std::uint32_t id : report.bottom_components()) {
      const ComponentRecord& c = report.components[id];
      for (std::uint32_t s : c.members)
        for (std::uint32_t next : adjacency[s])
          CHECK(std::binary_search(c.members.begin(), c.members.end(), next));
    }
  }
}
