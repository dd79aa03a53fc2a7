#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gdm/graph.hpp"
#include "support.hpp"

using namespace gdm;
using namespace gdm::testsupport;

TEST_CASE("degrees are adjacency row sums") {
  SUBCASE("single edge") {
    Graph g = from_adjacency((Matrix(2, 2) << 0, 1, 1, 0).finished(), one_hot(0, 2));
    const Vector d = degrees(g);
    CHECK(d(0) == 1.0);
    CHECK(d(1) == 1.0);
  }
  SUBCASE("empty graph") {
    Graph g = from_adjacency(Matrix::Zero(2, 2), one_hot(0, 2));
    CHECK(degrees(g).isZero());
  }
  SUBCASE("3-node path") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 2) = a(2, 1) = 1.0;
    const Vector d = degrees(from_adjacency(std::move(a), one_hot(0, 2)));
    CHECK(d(0) == 1.0);
    CHECK(d(1) == 2.0);
    CHECK(d(2) == 1.0);
  }
}

TEST_CASE("pad_to extends with zeros and keeps the label") {
  SUBCASE("no-op at the current size") {
    Graph g = ring_graph(4, one_hot(1, 2));
    const Graph p = pad_to(g, 4);
    CHECK(p.adjacency == g.adjacency);
    CHECK(p.node_features == g.node_features);
  }
  SUBCASE("single node padded to three") {
    Graph g;
    g.node_features = Matrix::Constant(1, 1, 5.0);
    g.adjacency = Matrix::Zero(1, 1);
    g.label = one_hot(0, 2);
    const Graph p = pad_to(g, 3);
    CHECK(p.n() == 3);
    CHECK(p.node_features(0, 0) == 5.0);
    CHECK(p.node_features(1, 0) == 0.0);
    CHECK(p.node_features(2, 0) == 0.0);
    CHECK(p.adjacency.isZero());
    CHECK(p.label == g.label);
  }
  SUBCASE("padded nodes have degree zero") {
    const Graph p = pad_to(ring_graph(3, one_hot(0, 2)), 6);
    const Vector d = degrees(p);
    for (Index i = 3; i < 6; ++i) CHECK(d(i) == 0.0);
  }
  SUBCASE("shrinking is a contract violation") {
    CHECK_THROWS_AS(pad_to(ring_graph(4, one_hot(0, 2)), 3), std::invalid_argument);
  }
  SUBCASE("restriction to the original block is the identity") {
    const Graph g = ring_graph(5, one_hot(0, 2));
    const Graph p = pad_to(g, 9);
    CHECK(p.adjacency.topLeftCorner(5, 5) == g.adjacency);
    CHECK(p.node_features.topRows(5) == g.node_features);
  }
}

TEST_CASE("random_node_permutation") {
  SUBCASE("single-node graph is unchanged") {
    Graph g;
    g.node_features = Matrix::Constant(1, 2, 3.0);
    g.adjacency = Matrix::Zero(1, 1);
    g.label = one_hot(0, 2);
    const Graph p = random_node_permutation(g, 99);
    CHECK(p.node_features == g.node_features);
    CHECK(p.adjacency == g.adjacency);
  }
  SUBCASE("degree multiset is preserved") {
    const Graph g = star_graph(7, one_hot(0, 2));
    const Graph p = random_node_permutation(g, 1234);
    Vector dg = degrees(g), dp = degrees(p);
    std::sort(dg.data(), dg.data() + dg.size());
    std::sort(dp.data(), dp.data() + dp.size());
    CHECK(dg == dp);
  }
  SUBCASE("inverse permutation recovers the original") {
    const Graph g = star_graph(6, one_hot(1, 2));
    std::vector<Index> perm = {3, 0, 5, 1, 4, 2};
    std::vector<Index> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      inverse[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
    const Graph p = permute_nodes(g, perm);
    const Graph back = permute_nodes(p, inverse);
    CHECK(back.adjacency == g.adjacency);
    CHECK(back.node_features == g.node_features);
  }
  SUBCASE("label is untouched") {
    const Graph g = ring_graph(5, one_hot(1, 3));
    CHECK(random_node_permutation(g, 7).label == g.label);
  }
}

TEST_CASE("graph validation catches broken invariants") {
  Graph g = ring_graph(3, one_hot(0, 2));
  CHECK_NOTHROW(g.validate());

  SUBCASE("self-loop") {
    g.adjacency(1, 1) = 1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("asymmetric") {
    g.adjacency(0, 1) = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("label off the simplex") {
    g.label(0) = 0.5;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("negative weight") {
    g.adjacency(0, 1) = g.adjacency(1, 0) = -1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("feature row mismatch") {
    g.node_features = Matrix::Ones(2, 1);
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
}

TEST_CASE("edges enumerates the upper triangle once") {
  const Graph g = ring_graph(4, one_hot(0, 2));
  const auto e = g.edges();
  CHECK(e.size() == 4);
  for (const auto& [i, j] : e) CHECK(i < j);
}
