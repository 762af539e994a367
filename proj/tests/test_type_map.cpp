#include <gtest/gtest.h>

#include "arw/binning.hpp"
#include "arw/error.hpp"
#include "arw/graphlets.hpp"
#include "arw/type_map.hpp"
#include "support.hpp"

using namespace arw;
using namespace arw::testing;

TEST(TypeMap, ConcatGroupsIdenticalRows) {
  AttributeMatrix a(3, 2, {1, 2, 1, 2, 0, 1});
  const TypeMap t = map_concat(a);
  EXPECT_EQ(std::vector<TypeId>(t.node_types().begin(), t.node_types().end()),
            (std::vector<TypeId>{0, 0, 1}));
  EXPECT_EQ(t.num_types(), 2u);
  EXPECT_EQ(t.signature(0), "1-2");
  EXPECT_EQ(t.find("0-1"), TypeId{1});
}

TEST(TypeMap, SeparatorAvoidsAmbiguity) {
  AttributeMatrix a(2, 2, {1, 23, 12, 3});
  EXPECT_EQ(map_concat(a).num_types(), 2u);
}

TEST(TypeMap, RejectsNonFinite) {
  AttributeMatrix a(1, 1, std::vector<double>{std::nan("")});
  EXPECT_THROW(map_concat(a), InvalidArgument);
}

TEST(TypeMap, KarateRawTypes) {
  const Graph g = karate();
  const std::vector<std::string> cols{"x2", "x3"};
  const auto x = count_graphlets(g).select(cols);
  EXPECT_EQ(map_concat(x).num_types(), 27u);
}

TEST(TypeMap, IdentityIsBijective) {
  const Graph g = karate();
  const TypeMap t = map_identity(g);
  EXPECT_EQ(t.num_types(), g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    EXPECT_EQ(t.type_of(v), v);
    EXPECT_EQ(t.signature(v), std::to_string(g.external_id(v)));
  }
}

TEST(TypeMap, StrictEquivalenceProperty) {
  const Graph g = powerlaw_cluster(300, 3, 0.4, 2);
  const auto x = transform(count_graphlets(g), {});
  const TypeMap t = map_concat(x);
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    for (NodeId v = u + 1; v < g.num_nodes(); ++v) {
      const auto ru = x.row(u), rv = x.row(v);
      const bool same = std::equal(ru.begin(), ru.end(), rv.begin());
      EXPECT_EQ(same, t.type_of(u) == t.type_of(v));
    }
  EXPECT_GE(t.num_types(), 1u);
  EXPECT_LE(t.num_types(), g.num_nodes());
}

TEST(TypeMap, FromAssignmentValidates) {
  EXPECT_THROW(TypeMap::from_assignment({0, 2}, {"a", "b"}), InvalidArgument);
  EXPECT_THROW(TypeMap::from_assignment({0}, {"a", "a"}), InvalidArgument);
  const TypeMap t = TypeMap::from_assignment({1, 1}, {"a", "b"});
  EXPECT_EQ(t.num_types(), 2u);
}

TEST(TypeMap, FileRoundTrip) {
  TempDir dir;
  const Graph g = karate();
  const TypeMap t = map_concat(transform(count_graphlets(g), {}));
  write_typemap(dir / "t.tsv", g, t);
  write_vocabulary(dir / "v.tsv", t);
  EXPECT_EQ(load_typemap(dir / "t.tsv", g, dir / "v.tsv"), t);
  EXPECT_EQ(load_typemap(dir / "t.tsv", g), t);
  // Unused vocabulary entries survive only with the vocabulary file.
  const TypeMap sparse = TypeMap::from_assignment(std::vector<TypeId>(34, 1), {"u", "v", "w"});
  write_typemap(dir / "s.tsv", g, sparse);
  write_vocabulary(dir / "sv.tsv", sparse);
  EXPECT_EQ(load_typemap(dir / "s.tsv", g, dir / "sv.tsv"), sparse);
  EXPECT_EQ(load_typemap(dir / "s.tsv", g).num_types(), 1u);
}
