#include <doctest.h>

#include <sstream>

#include "spmdiag/errors.hpp"
#include "spmdiag/report.hpp"
#include "support.hpp"

using namespace spmdiag;

namespace {

std::string render(const DiagnosisReport& r) {
  std::ostringstream out;
  render_text(out, r);
  return out.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l == line) return true;
  }
  return false;
}

AnalysisConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return read_config(in, "cfg");
}

}  // namespace

TEST_CASE("geo-st-shaped report") {
  const auto report = analyze(spmdiag::testing::geost_trace(), AnalysisConfig{});
  CHECK(report.partition.size() == 5);
  CHECK(report.core_regions == std::vector<RegionId>{11});
  REQUIRE(report.core.has_value());
  CHECK(report.warnings.empty());

  const auto text = render(report);
  CHECK(has_line(text, "there are 5 kinds of processes"));
  CHECK(has_line(text, "kind 1: 1 2"));
  CHECK(has_line(text, "kind 4: 5 7"));
  CHECK(has_line(text, "CCCR: region 11"));
  CHECK(has_line(text, "region 14 (1-CCR) ---> region 11 (2-CCR & CCCR)"));
  CHECK(has_line(text, "  a5 = instruction_count"));
  CHECK(has_line(text, "5\t1\t1\t0\t1\t4\t4"));
  CHECK(has_line(text, "core attributes: instruction_count (a5)"));
  CHECK(text.find("dissimilarity severity: 1.16") != std::string::npos);

  // Re-running gives the same bytes.
  CHECK(render(analyze(spmdiag::testing::geost_trace(), AnalysisConfig{})) == text);
}

TEST_CASE("balanced report") {
  const auto report = analyze(spmdiag::testing::balanced_trace(), AnalysisConfig{});
  CHECK(report.ccr.no_problem);
  CHECK(report.severity.severity == 0.0);
  CHECK_FALSE(report.decision_table.has_value());
  const auto text = render(report);
  CHECK(has_line(text, "there are 1 kinds of processes"));
  CHECK(has_line(text, "dissimilarity severity: 0.000000"));
  CHECK(has_line(text, "no external performance problem"));
  CHECK(text.find("CCCR") == std::string::npos);
}

TEST_CASE("summary document round trip") {
  const auto summary = summarize(analyze(spmdiag::testing::geost_trace(), AnalysisConfig{}));
  CHECK(summary.cccrs == std::vector<std::vector<RegionId>>{{11}});
  CHECK(summary.cores == std::vector<std::vector<std::string>>{{"instruction_count"}});
  REQUIRE(summary.chains.size() == 1);
  CHECK(summary.chains[0] == std::vector<ChainLink>{{{14}, 1, false}, {{11}, 2, true}});

  const auto doc = to_json(summary);
  CHECK(doc.at("format") == "spmdiag-result");
  CHECK(summary_from_json(doc) == summary);
  CHECK(summary_from_json(nlohmann::json::parse(doc.dump())) == summary);
  CHECK_THROWS_AS(summary_from_json(nlohmann::json{{"format", "other"}}), ParseError);
}

TEST_CASE("chain rendering") {
  CHECK(render_chain({{{3, 4}, 1, true}}) == "regions 3+4 (1-CCR & CCCR)");
  CHECK(render_chain({{{2}, 1, false}, {{5}, 2, false}, {{7}, 3, true}}) ==
        "region 2 (1-CCR) ---> region 5 (2-CCR) ---> region 7 (3-CCR & CCCR)");
}

TEST_CASE("analysis needs two processes") {
  const auto t = spmdiag::testing::make_trace(spmdiag::testing::flat_tree(2), {{1, 2}});
  CHECK_THROWS_AS(analyze(t, AnalysisConfig{}), ValidationError);
}

TEST_CASE("configuration files") {
  SUBCASE("defaults") {
    const auto c = parse_config("# nothing set\n\n");
    CHECK(c.process_params == OpticsParams{});
    CHECK(c.attribute_params == OpticsParams{});
    CHECK_FALSE(c.time_semantics.has_value());
  }
  SUBCASE("all keys") {
    const auto c = parse_config(
        "min_pts = 3\n"
        "eps = 2.5\n"
        "extraction_threshold = abs:0.75\n"
        "attribute_min_pts = 4\n"
        "attribute_eps = unbounded\n"
        "attribute_extraction_threshold = rel:0.5  # trailing note\n"
        "time_semantics = exclusive\n");
    CHECK(c.process_params.min_pts == 3);
    CHECK(c.process_params.eps == 2.5);
    CHECK(c.process_params.threshold == ExtractionThreshold::absolute(0.75));
    CHECK(c.attribute_params.min_pts == 4);
    CHECK_FALSE(c.attribute_params.eps.has_value());
    CHECK(c.attribute_params.threshold == ExtractionThreshold::relative(0.5));
    CHECK(c.time_semantics == TimeSemantics::exclusive);
  }
  SUBCASE("errors name the line") {
    for (const std::string bad : {"min_pts = 2\ncolour = red\n", "min_pts = 2\nmin_pts\n", "x = 1\n",
                                  "min_pts = 0\n", "eps = -1\n", "extraction_threshold = abs:\n"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_config(bad), ParseError);
    }
    try {
      parse_config("min_pts = 2\ncolour = red\n");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/spmdiag.cfg"), ParseError);
  }
}
