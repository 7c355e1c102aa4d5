#include <doctest.h>

#include "spmdiag/ccr_search.hpp"
#include "spmdiag/decision_builder.hpp"
#include "spmdiag/errors.hpp"
#include "support.hpp"

using namespace spmdiag;
using spmdiag::testing::flat_tree;
using spmdiag::testing::make_trace;

namespace {

TraceSet with_metric(const TraceSet& t, RegionId region, const MetricKind& metric, const std::vector<double>& values) {
  auto profiles = t.profiles();
  for (std::size_t i = 0; i < profiles.size(); ++i) profiles[i].samples[{region, metric}] = values[i];
  return TraceSet(t.tree(), profiles, t.metadata());
}

std::vector<std::string> column(const DecisionTable& t, std::size_t a) {
  std::vector<std::string> out;
  for (const auto& e : t.entries()) out.push_back(e.values[a]);
  return out;
}

}  // namespace

TEST_CASE("geo-st-shaped decision table") {
  const auto trace = spmdiag::testing::geost_trace();
  const std::vector<RegionId> core{11};
  const auto part = baseline_partition(trace, OpticsParams{});
  const auto specs = default_attribute_specs(trace, core, OpticsParams{});
  REQUIRE(specs.size() == 5);
  CHECK(specs[0].metric == MetricKind::l1_miss_rate());
  CHECK(specs[4].metric == MetricKind::instruction_count());

  const auto table = build_decision_table(trace, core, part, specs);
  CHECK(table.attribute_names() == std::vector<std::string>{"l1_miss_rate", "l2_miss_rate", "disk_io_quantity",
                                                            "network_io_quantity", "instruction_count"});
  std::vector<std::string> decisions;
  for (const auto& e : table.entries()) decisions.push_back(e.decision);
  CHECK(decisions == std::vector<std::string>{"0", "1", "1", "2", "3", "4", "3", "4"});

  const auto expected = load_decision_table(spmdiag::testing::fixture("table2.tsv"));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(table.entries()[i].values == expected.entries()[i].values);
    CHECK(table.entries()[i].id == std::to_string(i));
  }

  const auto core_result = extract_core(build_matrix(table));
  REQUIRE(core_result.cores.size() == 1);
  CHECK(core_result.names(core_result.cores[0]) == std::vector<std::string>{"instruction_count"});
}

TEST_CASE("binary split on three ranks") {
  auto t = make_trace(flat_tree(1), {{1}, {1}, {5}});
  t = with_metric(t, 1, MetricKind::instruction_count(), {10, 10, 90});
  t = with_metric(t, 1, MetricKind::l1_miss_rate(), {0.5, 0.5, 0.5});
  const Partition part({{0, 1}, {2}});
  const std::vector<RegionId> core{1};
  const auto table = build_decision_table(t, core, part, default_attribute_specs(t, core, OpticsParams{}));
  REQUIRE(table.attribute_names() == std::vector<std::string>{"l1_miss_rate", "instruction_count"});
  CHECK(column(table, 0) == std::vector<std::string>{"0", "0", "0"});
  CHECK(column(table, 1) == std::vector<std::string>{"0", "0", "1"});

  // Exhaustive check: only instruction_count separates the classes.
  const auto reducts = brute_force_reducts(table);
  REQUIRE(reducts.size() == 1);
  CHECK(reducts[0] == AttributeSet::of({1}));
  CHECK(extract_core(build_matrix(table)).cores == reducts);
}

TEST_CASE("a constant metric never joins the core") {
  const auto base = spmdiag::testing::geost_trace();
  const auto t = with_metric(base, 11, MetricKind("register_spills"), std::vector<double>(8, 42.0));
  const std::vector<RegionId> core{11};
  const auto specs = default_attribute_specs(t, core, OpticsParams{});
  REQUIRE(specs.size() == 6);
  const auto table = build_decision_table(t, core, baseline_partition(t, OpticsParams{}), specs);
  CHECK(column(table, 5) == std::vector<std::string>(8, "0"));
  const auto r = extract_core(build_matrix(table));
  REQUIRE(r.cores.size() == 1);
  CHECK(r.names(r.cores[0]) == std::vector<std::string>{"instruction_count"});
}

TEST_CASE("input validation") {
  auto t = make_trace(flat_tree(2), {{1, 1}, {1, 1}, {5, 1}});
  const Partition part({{0, 1}, {2}});
  const std::vector<RegionId> core{1};
  SUBCASE("missing sample") {
    auto profiles = t.profiles();
    profiles[0].samples[{1, MetricKind::instruction_count()}] = 3;
    const TraceSet partial(t.tree(), profiles);
    const std::vector<AttributeSpec> specs{{MetricKind::instruction_count(), 1, {}}};
    CHECK_THROWS_AS(build_decision_table(partial, core, part, specs), ValidationError);

    std::vector<std::string> skipped;
    CHECK(default_attribute_specs(partial, core, OpticsParams{}, &skipped).empty());
    CHECK(skipped.size() == 1);
  }
  SUBCASE("region outside the core") {
    t = with_metric(t, 2, MetricKind::instruction_count(), {1, 2, 3});
    const std::vector<AttributeSpec> specs{{MetricKind::instruction_count(), 2, {}}};
    CHECK_THROWS_AS(build_decision_table(t, core, part, specs), ValidationError);
  }
  SUBCASE("partition must cover every rank") {
    CHECK_THROWS_AS(build_decision_table(t, core, Partition({{0, 1}}), std::vector<AttributeSpec>{}), ValidationError);
  }
}

TEST_CASE("attribute naming") {
  const AttributeSpec spec{MetricKind::l2_miss_rate(), 11, {}};
  CHECK(attribute_name(spec, false) == "l2_miss_rate");
  CHECK(attribute_name(spec, true) == "l2_miss_rate@11");

  auto t = make_trace(flat_tree(2), {{1, 1}, {1, 2}, {5, 1}});
  t = with_metric(t, 1, MetricKind::l1_miss_rate(), {1, 1, 2});
  t = with_metric(t, 2, MetricKind::l1_miss_rate(), {1, 2, 2});
  const std::vector<RegionId> core{1, 2};
  const auto table = build_decision_table(t, core, Partition({{0}, {1}, {2}}), default_attribute_specs(t, core, {}));
  CHECK(table.attribute_names() == std::vector<std::string>{"l1_miss_rate@1", "l1_miss_rate@2"});
}
