#include "spmdiag/config.hpp"

#include <fstream>
#include <istream>

#include "spmdiag/errors.hpp"

namespace spmdiag {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& v) {
  std::size_t used = 0;
  const int out = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return out;
}

std::optional<double> parse_eps(const std::string& v) {
  if (v == "unbounded") return std::nullopt;
  std::size_t used = 0;
  const double out = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return out;
}

}  // namespace

AnalysisConfig read_config(std::istream& in, const std::string& source) {
  AnalysisConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(where + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    try {
      if (key == "min_pts") {
        cfg.process_params.min_pts = parse_int(value);
      } else if (key == "eps") {
        cfg.process_params.eps = parse_eps(value);
      } else if (key == "extraction_threshold") {
        cfg.process_params.threshold = ExtractionThreshold::parse(value);
      } else if (key == "attribute_min_pts") {
        cfg.attribute_params.min_pts = parse_int(value);
      } else if (key == "attribute_eps") {
        cfg.attribute_params.eps = parse_eps(value);
      } else if (key == "attribute_extraction_threshold") {
        cfg.attribute_params.threshold = ExtractionThreshold::parse(value);
      } else if (key == "time_semantics") {
        cfg.time_semantics = parse_time_semantics(value);
      } else {
        throw ParseError(where + "unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(where + "invalid value '" + value + "' for " + key);
    }
  }
  try {
    cfg.process_params.validate();
    cfg.attribute_params.validate();
  } catch (const ValidationError& e) {
    throw ParseError(source + ": " + e.what());
  }
  return cfg;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return read_config(in, path);
}

}  // namespace spmdiag
