#include <algorithm>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "z3flow/delta.hpp"
#include "z3flow/io.hpp"

namespace z3flow {
namespace {

constexpr IndependenceOptions kRelaxed{.relax_preconditions = true};

// Every nowhere-zero flow of g, by enumerating {1,2}^m.
std::vector<Gf3Vector> all_nz_flows(const MultiGraph& g) {
  std::vector<Gf3Vector> out;
  const std::size_t m = g.edge_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Gf3Vector v(m);
    for (std::size_t p = 0; p < m; ++p) v[p] = Gf3((mask >> p) & 1 ? 2 : 1);
    if (verify_flow(g, v).nowhere_zero()) out.push_back(v);
  }
  return out;
}

std::vector<Gf3Vector> generator_rows(const MultiGraph& g, VertexId u) {
  std::vector<Gf3Vector> rows;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (v != u)
      for (auto& r : delta_generators(g, v)) rows.push_back(r);
  return rows;
}

TEST(DeltaPair, TailThenHead) {
  // vertex 1 is the tail of edge 1 and the head of edge 0
  auto g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  auto d = delta_pair(g, 1, 1, 0);
  EXPECT_EQ(d, (Gf3Vector{2, 2, 0}));
  EXPECT_EQ(delta_pair(g, 1, 0, 1), -d);
}

TEST(DeltaPair, Rejections) {
  auto g = build_graph(3, {{0, 1}, {1, 2}, {1, 1}});
  EXPECT_THROW(delta_pair(g, 1, 0, 0), GraphError);
  EXPECT_THROW(delta_pair(g, 1, 0, 2), GraphError);  // loop
  EXPECT_THROW(delta_pair(g, 0, 0, 1), GraphError);  // edge 1 not at vertex 0
}

// <delta_{v,e1,e2}, phi> = 0 iff phi brings the same amount into v along e1 and e2.
TEST(DeltaPair, EqualFlowCharacterization) {
  auto g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  auto d = delta_pair(g, 1, 0, 1);
  for (int a = 1; a < 3; ++a)
    for (int b = 1; b < 3; ++b) {
      Gf3Vector phi{a, b, 1};
      const Gf3 into_e0 = incidence(g.edge(0), 1) * phi[0];
      const Gf3 into_e1 = incidence(g.edge(1), 1) * phi[1];
      EXPECT_EQ(dot(d, phi).is_zero(), into_e0 == into_e1);
    }
  // the circulation brings 1 in along edge 0 and takes 1 out along edge 1
  EXPECT_FALSE(dot(d, Gf3Vector{1, 1, 1}).is_zero());
}

TEST(DeltaGenerators, SpanShape) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = make_random_min3(6, 10, seed);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      auto gens = delta_generators(g, v);
      auto span = delta_span(g, v);
      std::sort(span.begin(), span.end(), [](const Gf3Vector& a, const Gf3Vector& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](Gf3 x, Gf3 y) { return x.value() < y.value(); });
      });
      EXPECT_EQ(std::unique(span.begin(), span.end()) - span.begin(), g.degree(v) == 3 ? 9 : 3);
      if (g.degree(v) != 3) continue;
      // the span is {0, +-delta_v, delta_{v,ei,ej}} for the three incident edges
      std::vector<Gf3Vector> expected{Gf3Vector(g.edge_count()), gens[0], -gens[0]};
      const auto& inc = g.incident_positions(v);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (i != j) expected.push_back(delta_pair(g, v, g.edge_at(inc[i]).id, g.edge_at(inc[j]).id));
      for (const auto& x : expected) EXPECT_NE(std::find(span.begin(), span.end(), x), span.end());
    }
  }
}

// Every vector of Delta_v annihilates every nowhere-zero flow.
TEST(DeltaGenerators, OrthogonalToNowhereZeroFlows) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = make_random_min3(5, 9, seed);
    for (const auto& phi : all_nz_flows(g))
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        for (const auto& c : delta_span(g, v)) EXPECT_TRUE(dot(c, phi).is_zero());
  }
}

TEST(IndependenceTest, K4Relaxed) {
  auto k4 = make_k4();
  auto res = independence_test(k4, 3, kRelaxed);
  ASSERT_TRUE(std::holds_alternative<IndependentData>(res));
  const auto& data = std::get<IndependentData>(res);
  EXPECT_EQ(data.echelon.rank, 6u);
  EXPECT_EQ(data.expected_rank, 6u);
  EXPECT_EQ(testing::rank_bruteforce(generator_rows(k4, 3), 6), 6u);
  EXPECT_EQ(vperp(k4, data).b, 0u);
}

TEST(IndependenceTest, Wheel4HubIsDependent) {
  auto w = make_wheel(4);
  EXPECT_LE(testing::rank_bruteforce(generator_rows(w, 0), w.edge_count()), 7u);
  auto res = independence_test(w, 0);
  ASSERT_TRUE(std::holds_alternative<DependencyWitness>(res));
  const auto& wit = std::get<DependencyWitness>(res);
  EXPECT_NO_THROW(validate_witness(w, wit));
  EXPECT_TRUE(wit.x[0].is_zero());

  EdgeId e = witness_to_irrelevant_edge(w, wit);
  auto child = contract_edge(w, e).first;
  EXPECT_TRUE(oracle_nz_flow(w));
  EXPECT_TRUE(oracle_nz_flow(child));
}

TEST(IndependenceTest, K33PlusEdge) {
  auto g = make_k33e(7);
  EXPECT_EQ(testing::rank_bruteforce(generator_rows(g, 0), g.edge_count()), 10u);
  auto res = independence_test(g, 0);
  ASSERT_TRUE(std::holds_alternative<IndependentData>(res));
  const auto& data = std::get<IndependentData>(res);
  EXPECT_EQ(data.echelon.rank, 10u);
  auto vp = vperp(g, data);
  EXPECT_EQ(vp.b, 3u);
  EXPECT_EQ(vp.free_edges.size(), 3u);
  for (const auto& basis : vp.kernel.basis)
    for (const auto& row : data.generators.rows()) EXPECT_TRUE(dot(row, basis).is_zero());
}

TEST(IndependenceTest, Wheel5Hub) {
  auto g = make_wheel(5);
  auto res = independence_test(g, 0);
  ASSERT_TRUE(std::holds_alternative<IndependentData>(res));
  EXPECT_EQ(vperp(g, std::get<IndependentData>(res)).b, 0u);
  EXPECT_FALSE(oracle_nz_flow(g));
}

TEST(IndependenceTest, Preconditions) {
  EXPECT_THROW(independence_test(make_k4(), 0), GraphError);            // deg(u) = 3
  EXPECT_THROW(independence_test(make_wheel(4), 1), GraphError);        // deg(u) = 3
  EXPECT_THROW(independence_test(build_graph(3, {{0, 1}, {1, 2}, {2, 0}}), 0), GraphError);  // min degree 2
  auto looped = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 2}});
  EXPECT_THROW(independence_test(looped, 0), GraphError);
  EXPECT_THROW(independence_test(looped, 0, kRelaxed), GraphError);
  EXPECT_THROW(independence_test(make_k4(), 9, kRelaxed), GraphError);
}

// Dependent iff the brute-force rank falls short of the generator count.
TEST(IndependenceTest, MatchesBruteForceRank) {
  int dependent = 0, independent = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto g = make_random_min3(5, 8 + seed % 3, seed);
    auto profile = degree_profile(g);
    VertexId u = std::max_element(profile.degrees.begin(), profile.degrees.end()) - profile.degrees.begin();
    if (profile.degrees[u] < 4) continue;
    auto rows = generator_rows(g, u);
    if (rows.size() > 11) continue;
    const bool full = testing::rank_bruteforce(rows, g.edge_count()) == rows.size();
    auto res = independence_test(g, u);
    EXPECT_EQ(std::holds_alternative<IndependentData>(res), full) << seed;
    (full ? independent : dependent)++;
  }
  EXPECT_GT(dependent, 0);
  EXPECT_GT(independent, 0);
}

// A witness edge e satisfies: g has a nowhere-zero flow iff g/e does, and
// lifting any nowhere-zero flow of g/e gives a nowhere-zero flow of g.
TEST(WitnessEdge, SoundnessAndLiftingStrength) {
  int witnesses = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto g = make_random_min3(4 + seed % 4, 7 + seed % 5, seed);
    auto profile = degree_profile(g);
    VertexId u = std::max_element(profile.degrees.begin(), profile.degrees.end()) - profile.degrees.begin();
    if (profile.degrees[u] < 4) continue;
    auto res = independence_test(g, u);
    const auto* w = std::get_if<DependencyWitness>(&res);
    if (!w) continue;
    ++witnesses;
    EdgeId e = witness_to_irrelevant_edge(g, *w);
    const Edge& edge = g.edge(e);
    // the boundary edge joins a zero vertex to a degree-3 vertex
    const bool tail_zero = w->x[edge.tail].is_zero(), head_zero = w->x[edge.head].is_zero();
    ASSERT_NE(tail_zero, head_zero);
    EXPECT_EQ(g.degree(tail_zero ? edge.head : edge.tail), 3u);

    auto [child, corr] = contract_edge(g, e);
    auto child_flow = oracle_nz_flow(child);
    EXPECT_EQ(oracle_nz_flow(g).has_value(), child_flow.has_value()) << seed;
    if (child_flow) {
      EXPECT_TRUE(verify_flow(g, extend_flow(g, e, *child_flow, corr)).nowhere_zero()) << seed;
    }
  }
  EXPECT_GT(witnesses, 20);
}

TEST(WitnessEdge, RejectsInvalidWitness) {
  auto w = make_wheel(4);
  DependencyWitness bogus;
  bogus.excluded = 0;
  bogus.x.assign(5, Gf3Vector(8));
  EXPECT_THROW(witness_to_irrelevant_edge(w, bogus), std::invalid_argument);  // all zero
  bogus.x[1] = incidence_vector(w, 1);
  EXPECT_THROW(witness_to_irrelevant_edge(w, bogus), std::invalid_argument);  // does not sum to zero
}

// Every nowhere-zero flow lies in V-perp and is rebuilt from its values on B.
TEST(VPerp, ContainsEveryNowhereZeroFlow) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto g = make_random_min3(5 + seed % 3, 9 + seed % 4, seed);
    if (g.edge_count() > 14) continue;
    auto profile = degree_profile(g);
    VertexId u = std::max_element(profile.degrees.begin(), profile.degrees.end()) - profile.degrees.begin();
    if (profile.degrees[u] < 4) continue;
    auto res = independence_test(g, u);
    const auto* data = std::get_if<IndependentData>(&res);
    if (!data) continue;
    auto vp = vperp(g, *data);
    EXPECT_EQ(vp.b, g.edge_count() - (g.vertex_count() + profile.n3 - 1));
    for (const auto& phi : all_nz_flows(g)) {
      ++checked;
      for (const auto& row : data->generators.rows()) EXPECT_TRUE(dot(row, phi).is_zero());
      EXPECT_EQ(vp.reconstruct(vp.kernel.restrict_to_free(phi)), phi);
    }
  }
  EXPECT_GT(checked, 0);
}

}  // namespace
}  // namespace z3flow
