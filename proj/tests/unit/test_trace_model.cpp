#include <doctest.h>

#include <algorithm>

#include "spmdiag/errors.hpp"
#include "spmdiag/trace_model.hpp"
#include "support.hpp"

using namespace spmdiag;
using spmdiag::testing::flat_tree;
using spmdiag::testing::make_trace;

TEST_CASE("region tree derives depths and pre-order") {
  RegionTree tree({{1, "a", std::nullopt, 0},
                   {2, "b", 1, 0},
                   {3, "c", std::nullopt, 1},
                   {4, "d", 2, 3},
                   {5, "e", 1, 0}});
  CHECK(tree.depth(1) == 1);
  CHECK(tree.depth(2) == 2);
  CHECK(tree.depth(4) == 3);
  CHECK(tree.preorder() == std::vector<RegionId>{1, 2, 4, 5, 3});
  CHECK(tree.roots() == std::vector<RegionId>{1, 3});
  CHECK(tree.children(1) == std::vector<RegionId>{2, 5});
  CHECK(tree.ancestors(4) == std::vector<RegionId>{2, 1});
  CHECK(tree.subtree(1) == std::vector<RegionId>{1, 2, 4, 5});
}

TEST_CASE("region tree rejects malformed hierarchies") {
  CHECK_THROWS_AS(RegionTree({{1, "", std::nullopt, 0}, {1, "", std::nullopt, 0}}), ValidationError);
  CHECK_THROWS_AS(RegionTree({{1, "", 7, 0}}), ValidationError);
  CHECK_THROWS_AS(RegionTree({{1, "", 2, 0}, {2, "", 1, 0}}), ValidationError);
  CHECK_THROWS_AS(RegionTree({{1, "", std::nullopt, 2}}), ValidationError);
  CHECK_THROWS_AS(RegionTree({{0, "", std::nullopt, 0}}), ValidationError);
}

TEST_CASE("metric kinds order built-ins first") {
  CHECK(MetricKind::cpu_time() < MetricKind::instruction_count());
  CHECK(MetricKind::instruction_count() < MetricKind("aaa_custom"));
  CHECK(MetricKind("aaa_custom") < MetricKind("zzz_custom"));
  CHECK(MetricKind("l2_miss_rate").is_builtin());
  CHECK_FALSE(MetricKind("gpu_stall").is_builtin());
}

TEST_CASE("trace set validation") {
  const auto tree = flat_tree(2);
  auto profile = [](Rank r, double a, double b) {
    ProcessProfile p;
    p.rank = r;
    p.samples[{1, MetricKind::cpu_time()}] = a;
    p.samples[{2, MetricKind::cpu_time()}] = b;
    return p;
  };

  SUBCASE("duplicate rank") {
    CHECK_THROWS_WITH_AS(TraceSet(tree, {profile(0, 1, 1), profile(0, 1, 1)}), doctest::Contains("duplicate rank 0"),
                         ValidationError);
  }
  SUBCASE("rank gap") { CHECK_THROWS_AS(TraceSet(tree, {profile(0, 1, 1), profile(2, 1, 1)}), ValidationError); }
  SUBCASE("negative value") { CHECK_THROWS_AS(TraceSet(tree, {profile(0, -1, 1)}), ValidationError); }
  SUBCASE("non-finite value") {
    CHECK_THROWS_AS(TraceSet(tree, {profile(0, std::numeric_limits<double>::infinity(), 1)}), ValidationError);
  }
  SUBCASE("missing cpu_time") {
    auto p = profile(0, 1, 1);
    p.samples.erase({2, MetricKind::cpu_time()});
    CHECK_THROWS_WITH_AS(TraceSet(tree, {p}), doctest::Contains("region 2"), ValidationError);
  }
  SUBCASE("unknown region") {
    auto p = profile(0, 1, 1);
    p.samples[{9, MetricKind::l1_miss_rate()}] = 0.1;
    CHECK_THROWS_AS(TraceSet(tree, {p}), ValidationError);
  }
}

TEST_CASE("build_vectors") {
  SUBCASE("two identical processes") {
    auto vs = build_vectors(make_trace(flat_tree(2), {{1.0, 2.0}, {1.0, 2.0}}));
    REQUIRE(vs.size() == 2);
    CHECK(vs[0].readings() == std::vector<double>{1.0, 2.0});
    CHECK(vs[1].readings() == std::vector<double>{1.0, 2.0});
    CHECK(vs[0].rank() == 0);
    CHECK(vs[1].rank() == 1);
    CHECK(vs[0].mask().empty());
  }
  SUBCASE("single zero process") {
    auto vs = build_vectors(make_trace(flat_tree(1), {{0.0}}));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].readings() == std::vector<double>{0.0});
  }
  SUBCASE("geo-st-shaped fixture matches generator parameters") {
    const auto trace = spmdiag::testing::geost_trace();
    auto vs = build_vectors(trace);
    REQUIRE(vs.size() == 8);
    const std::vector<double> mult{1.0, 1.3, 1.3, 1.6, 2.0, 2.4, 2.0, 2.4};
    for (const auto& v : vs) {
      REQUIRE(v.dimension() == 14);
      const auto& order = v.regions();
      const auto at = [&](RegionId r) {
        return v.reading(static_cast<std::size_t>(std::find(order.begin(), order.end(), r) - order.begin()));
      };
      const double m = mult[static_cast<std::size_t>(v.rank())];
      CHECK(at(11) == doctest::Approx(40.0 * m).epsilon(1e-12));
      CHECK(at(12) == doctest::Approx(8.0).epsilon(1e-12));
      CHECK(at(14) == doctest::Approx(5.0 + 8.0 + 40.0 * m).epsilon(1e-12));
      CHECK(at(4) == doctest::Approx(9.0).epsilon(1e-12));
    }
  }
  SUBCASE("order is stable under profile permutation") {
    const auto tree = flat_tree(2);
    std::vector<ProcessProfile> ps;
    for (Rank r : {2, 0, 1}) {
      ProcessProfile p;
      p.rank = r;
      p.samples[{1, MetricKind::cpu_time()}] = r;
      p.samples[{2, MetricKind::cpu_time()}] = 2.0 * r;
      ps.push_back(p);
    }
    auto forward = build_vectors(TraceSet(tree, ps));
    std::reverse(ps.begin(), ps.end());
    CHECK(build_vectors(TraceSet(tree, ps)) == forward);
    CHECK(forward[2].readings() == std::vector<double>{2.0, 4.0});
  }
}

TEST_CASE("mask_vector") {
  const PerformanceVector v(0, {1, 2, 3}, {1.0, 2.0, 3.0});

  CHECK(mask_vector(v, {2}).readings() == std::vector<double>{1.0, 0.0, 3.0});
  CHECK(mask_vector(v, {}).readings() == v.readings());
  CHECK(mask_vector(v, {1, 2, 3}).readings() == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(v.readings() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_AS(mask_vector(v, {4}), ValidationError);

  SUBCASE("idempotent and cumulative") {
    auto once = mask_vector(v, {1});
    CHECK(mask_vector(once, {1}) == once);
    CHECK(mask_vector(once, {3}).mask() == std::set<RegionId>{1, 3});
  }
  SUBCASE("unmask restores raw value") {
    CHECK(mask_vector(v, {1, 2}).without_mask({2}).readings() == std::vector<double>{0.0, 2.0, 3.0});
  }
}
