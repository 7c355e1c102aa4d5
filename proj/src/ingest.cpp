#include "spmdiag/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spmdiag/errors.hpp"

namespace spmdiag {

using nlohmann::json;

TimeSemantics parse_time_semantics(const std::string& text) {
  if (text == "inclusive") return TimeSemantics::inclusive;
  if (text == "exclusive") return TimeSemantics::exclusive;
  throw ValidationError("time semantics must be 'inclusive' or 'exclusive', got '" + text + "'");
}

std::string to_string(TimeSemantics t) { return t == TimeSemantics::inclusive ? "inclusive" : "exclusive"; }

TraceSet to_inclusive(const RegionTree& tree, std::vector<ProcessProfile> profiles, TraceMetadata metadata) {
  const auto cpu = MetricKind::cpu_time();
  for (auto& p : profiles) {
    std::map<RegionId, double> own;
    for (RegionId r : tree.preorder()) {
      auto v = p.sample(r, cpu);
      if (!v) {
        throw ValidationError("rank " + std::to_string(p.rank) + " is missing cpu_time for region " +
                              std::to_string(r));
      }
      own[r] = *v;
    }
    for (RegionId r : tree.preorder()) {
      double total = 0.0;
      for (RegionId d : tree.subtree(r)) total += own[d];
      p.samples[SampleKey{r, cpu}] = total;
    }
  }
  return TraceSet(tree, std::move(profiles), std::move(metadata));
}

namespace {

// ---------------------------------------------------------------------------
// JSON helpers with field-path context

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(path + ": missing field '" + key + "'");
  return obj.at(key);
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array");
  return v;
}

json parse_json(std::istream& in, const std::string& source) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

std::vector<RegionNode> parse_regions(const json& arr, const std::string& path) {
  std::vector<RegionNode> regions;
  for (std::size_t i = 0; i < as_array(arr, path).size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json& r = arr[i];
    RegionNode n;
    n.id = as_int(require(r, "id", at), at + ".id");
    if (r.contains("label")) n.label = as_string(r["label"], at + ".label");
    if (r.contains("parent") && !r["parent"].is_null()) n.parent = as_int(r["parent"], at + ".parent");
    if (r.contains("depth")) n.depth = as_int(r["depth"], at + ".depth");
    regions.push_back(std::move(n));
  }
  return regions;
}

std::vector<double> parse_multipliers(const json& arr, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(arr, path).size(); ++i) {
    out.push_back(as_number(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SampleKey parse_metric_key(const std::string& key, const std::string& path) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
    throw ParseError(path + ": metric key '" + key + "' is not of the form regionId.metricKind");
  }
  SampleKey k;
  try {
    std::size_t used = 0;
    k.region = std::stoi(key.substr(0, dot), &used);
    if (used != dot) throw std::invalid_argument(key);
  } catch (const std::exception&) {
    throw ParseError(path + ": metric key '" + key + "' has a non-integer region id");
  }
  k.metric = MetricKind(key.substr(dot + 1));
  return k;
}

TraceSet finish(const RegionTree& tree, std::vector<ProcessProfile> profiles, TraceMetadata meta,
                TimeSemantics semantics) {
  if (semantics == TimeSemantics::exclusive) return to_inclusive(tree, std::move(profiles), std::move(meta));
  return TraceSet(tree, std::move(profiles), std::move(meta));
}

TraceSet read_json_trace(std::istream& in, const std::string& source, std::optional<TimeSemantics> override) {
  const json doc = parse_json(in, source);
  const std::string root = source;
  if (!doc.is_object()) throw ParseError(root + ": trace document must be a JSON object");
  const int version = as_int(require(doc, "version", root), root + ": version");
  if (version != kTraceFormatVersion) {
    throw ParseError(root + ": unsupported trace format version " + std::to_string(version));
  }

  TraceMetadata meta;
  if (doc.contains("label")) meta.label = as_string(doc["label"], root + ": label");
  if (doc.contains("timestamp")) meta.timestamp = as_string(doc["timestamp"], root + ": timestamp");

  TimeSemantics semantics = TimeSemantics::inclusive;
  if (doc.contains("time_semantics")) {
    try {
      semantics = parse_time_semantics(as_string(doc["time_semantics"], root + ": time_semantics"));
    } catch (const ValidationError& e) {
      throw ParseError(root + ": time_semantics: " + e.what());
    }
  }
  if (override) semantics = *override;

  RegionTree tree(parse_regions(require(doc, "regions", root), root + ": regions"));

  std::vector<ProcessProfile> profiles;
  const json& procs = as_array(require(doc, "processes", root), root + ": processes");
  std::set<Rank> seen;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    const std::string at = root + ": processes[" + std::to_string(i) + "]";
    ProcessProfile p;
    p.rank = as_int(require(procs[i], "rank", at), at + ".rank");
    if (!seen.insert(p.rank).second) throw ValidationError(at + ": duplicate rank " + std::to_string(p.rank));
    const json& metrics = require(procs[i], "metrics", at);
    if (!metrics.is_object()) throw ParseError(at + ".metrics: expected an object");
    for (const auto& [key, value] : metrics.items()) {
      const std::string field = at + ".metrics['" + key + "']";
      p.samples[parse_metric_key(key, field)] = as_number(value, field);
    }
    profiles.push_back(std::move(p));
  }
  return finish(tree, std::move(profiles), std::move(meta), semantics);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

TraceSet read_delimited_trace(std::istream& in, const std::string& source, std::optional<TimeSemantics> override) {
  TraceMetadata meta;
  TimeSemantics semantics = TimeSemantics::inclusive;
  std::vector<RegionNode> regions;
  std::map<Rank, ProcessProfile> by_rank;
  std::set<RegionId> seen_regions;
  bool header_seen = false;
  char delim = ',';

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  auto to_int = [&](const std::string& s, const char* field) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(std::string(field) + " '" + s + "' is not an integer");
    }
    return 0;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("#@", 0) == 0) {
      std::istringstream directive(t.substr(2));
      std::string name;
      directive >> name;
      if (name == "time_semantics") {
        std::string value;
        directive >> value;
        try {
          semantics = parse_time_semantics(value);
        } catch (const ValidationError& e) {
          fail(e.what());
        }
      } else if (name == "label") {
        std::getline(directive, meta.label);
        meta.label = trim(meta.label);
      } else if (name == "timestamp") {
        std::getline(directive, meta.timestamp);
        meta.timestamp = trim(meta.timestamp);
      } else if (name == "region") {
        std::string id, parent, label;
        directive >> id >> parent;
        std::getline(directive, label);
        if (id.empty() || parent.empty()) fail("region directive needs '<id> <parent|->'");
        RegionNode n;
        n.id = to_int(id, "region id");
        if (parent != "-") n.parent = to_int(parent, "parent id");
        n.label = trim(label);
        regions.push_back(std::move(n));
      } else {
        fail("unknown directive '" + name + "'");
      }
      continue;
    }
    if (t[0] == '#') continue;
    if (!header_seen) {
      delim = t.find('\t') != std::string::npos ? '\t' : ',';
      std::vector<std::string> cols;
      std::istringstream hs(t);
      for (std::string c; std::getline(hs, c, delim);) cols.push_back(trim(c));
      if (cols != std::vector<std::string>{"rank", "region", "metric", "value"}) {
        fail("header must be rank,region,metric,value");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream rs(t);
    for (std::string c; std::getline(rs, c, delim);) f.push_back(trim(c));
    if (f.size() != 4) fail("expected 4 fields, found " + std::to_string(f.size()));
    const Rank rank = to_int(f[0], "rank");
    const RegionId region = to_int(f[1], "region");
    if (f[2].empty()) fail("metric is empty");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument(f[3]);
    } catch (const std::exception&) {
      fail("value '" + f[3] + "' is not a number");
    }
    auto& p = by_rank[rank];
    p.rank = rank;
    if (!p.samples.emplace(SampleKey{region, MetricKind(f[2])}, value).second) {
      fail("duplicate sample for rank " + f[0] + ", region " + f[1] + ", metric " + f[2]);
    }
    seen_regions.insert(region);
  }
  if (!header_seen) throw ParseError(source + ": missing rank,region,metric,value header");

  if (regions.empty()) {
    for (RegionId r : seen_regions) regions.push_back(RegionNode{r, "", std::nullopt, 0});
  }
  if (override) semantics = *override;
  std::vector<ProcessProfile> profiles;
  for (auto& [rank, p] : by_rank) profiles.push_back(std::move(p));
  return finish(RegionTree(std::move(regions)), std::move(profiles), std::move(meta), semantics);
}

}  // namespace

TraceSet read_trace(std::istream& in, const std::string& source, std::optional<TimeSemantics> time_semantics) {
  in >> std::ws;
  try {
    if (in.peek() == '{') return read_json_trace(in, source, time_semantics);
    return read_delimited_trace(in, source, time_semantics);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(source, 0) == 0) throw;
    throw ValidationError(source + ": " + what);
  }
}

TraceSet load_trace(const std::string& path, std::optional<TimeSemantics> time_semantics) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file '" + path + "'");
  return read_trace(in, path, time_semantics);
}

void write_trace(std::ostream& out, const TraceSet& trace) {
  json doc;
  doc["format"] = "spmdiag-trace";
  doc["version"] = kTraceFormatVersion;
  doc["label"] = trace.metadata().label;
  doc["timestamp"] = trace.metadata().timestamp;
  doc["time_semantics"] = "inclusive";
  json regions = json::array();
  for (const auto& n : trace.tree().nodes()) {
    json r;
    r["id"] = n.id;
    r["label"] = n.label;
    r["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    r["depth"] = n.depth;
    regions.push_back(std::move(r));
  }
  doc["regions"] = std::move(regions);
  json procs = json::array();
  for (const auto& p : trace.profiles()) {
    json metrics = json::object();
    for (const auto& [key, value] : p.samples) {
      metrics[std::to_string(key.region) + "." + key.metric.name()] = value;
    }
    procs.push_back(json{{"rank", p.rank}, {"metrics", std::move(metrics)}});
  }
  doc["processes"] = std::move(procs);
  out << doc.dump(2) << '\n';
}

void save_trace(const std::string& path, const TraceSet& trace) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write trace file '" + path + "'");
  write_trace(out, trace);
  if (!out) throw ValidationError("failed writing trace file '" + path + "'");
}

// ---------------------------------------------------------------------------
// Synthetic traces

void SynthSpec::validate() const {
  if (process_count < 2) throw ValidationError("process_count must be >= 2");
  const RegionTree tree(regions);
  if (tree.size() == 0) throw ValidationError("synthetic spec declares no regions");
  if (!(noise_amplitude >= 0.0) || !(noise_amplitude <= 1.0)) {
    throw ValidationError("noise_amplitude must lie in [0, 1]");
  }
  for (RegionId r : tree.preorder()) {
    auto it = base_cpu_time.find(r);
    if (it == base_cpu_time.end()) throw ValidationError("no base cpu_time for region " + std::to_string(r));
    if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
      throw ValidationError("base cpu_time of region " + std::to_string(r) + " must be finite and >= 0");
    }
  }
  for (const auto& [r, v] : base_cpu_time) {
    if (!tree.contains(r)) throw ValidationError("base cpu_time given for unknown region " + std::to_string(r));
  }
  auto check_multipliers = [&](const std::vector<double>& m, const std::string& what) {
    if (m.size() != static_cast<std::size_t>(process_count)) {
      throw ValidationError(what + " has " + std::to_string(m.size()) + " multipliers, expected " +
                            std::to_string(process_count));
    }
    for (double x : m) {
      if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(what + " multipliers must be finite and > 0");
    }
  };
  for (const auto& inj : imbalance) {
    if (!tree.contains(inj.region)) {
      throw ValidationError("imbalance injected into unknown region " + std::to_string(inj.region));
    }
    check_multipliers(inj.multipliers, "imbalance on region " + std::to_string(inj.region));
  }
  std::set<MetricKind> seen;
  for (const auto& acc : accessories) {
    if (acc.metric.is_cpu_time()) throw ValidationError("cpu_time cannot be an accessory metric");
    if (!seen.insert(acc.metric).second) {
      throw ValidationError("accessory metric " + acc.metric.name() + " is declared twice");
    }
    if (!(acc.base >= 0.0) || !std::isfinite(acc.base)) {
      throw ValidationError("accessory metric " + acc.metric.name() + " base must be finite and >= 0");
    }
    check_multipliers(acc.multipliers, "accessory metric " + acc.metric.name());
    for (RegionId r : acc.regions) {
      if (!tree.contains(r)) {
        throw ValidationError("accessory metric " + acc.metric.name() + " refers to unknown region " +
                              std::to_string(r));
      }
    }
  }
}

SynthSpec read_synth_spec(std::istream& in, const std::string& source) {
  const json doc = parse_json(in, source);
  const std::string root = source;
  if (!doc.is_object()) throw ParseError(root + ": spec must be a JSON object");

  SynthSpec spec;
  if (doc.contains("label")) spec.label = as_string(doc["label"], root + ": label");
  spec.process_count = as_int(require(doc, "process_count", root), root + ": process_count");
  spec.regions = parse_regions(require(doc, "regions", root), root + ": regions");

  const json& base = require(doc, "base_cpu_time", root);
  if (!base.is_object()) throw ParseError(root + ": base_cpu_time must map region ids to seconds");
  for (const auto& [key, value] : base.items()) {
    const std::string at = root + ": base_cpu_time['" + key + "']";
    try {
      std::size_t used = 0;
      const int id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
      spec.base_cpu_time[id] = as_number(value, at);
    } catch (const std::invalid_argument&) {
      throw ParseError(at + ": key is not a region id");
    } catch (const std::out_of_range&) {
      throw ParseError(at + ": key is not a region id");
    }
  }

  if (doc.contains("imbalance")) {
    const json& arr = as_array(doc["imbalance"], root + ": imbalance");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = root + ": imbalance[" + std::to_string(i) + "]";
      ImbalanceInjection inj;
      inj.region = as_int(require(arr[i], "region", at), at + ".region");
      inj.multipliers = parse_multipliers(require(arr[i], "multipliers", at), at + ".multipliers");
      spec.imbalance.push_back(std::move(inj));
    }
  }
  if (doc.contains("accessory_metrics")) {
    const json& arr = as_array(doc["accessory_metrics"], root + ": accessory_metrics");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = root + ": accessory_metrics[" + std::to_string(i) + "]";
      AccessoryGenerator acc;
      acc.metric = MetricKind(as_string(require(arr[i], "metric", at), at + ".metric"));
      acc.base = as_number(require(arr[i], "base", at), at + ".base");
      acc.multipliers = parse_multipliers(require(arr[i], "multipliers", at), at + ".multipliers");
      if (arr[i].contains("regions")) {
        const json& rs = as_array(arr[i]["regions"], at + ".regions");
        for (std::size_t k = 0; k < rs.size(); ++k) {
          acc.regions.push_back(as_int(rs[k], at + ".regions[" + std::to_string(k) + "]"));
        }
      }
      spec.accessories.push_back(std::move(acc));
    }
  }
  if (doc.contains("noise_amplitude")) spec.noise_amplitude = as_number(doc["noise_amplitude"], root + ": noise_amplitude");

  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(root + ": " + e.what());
  }
  return spec;
}

SynthSpec load_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  return read_synth_spec(in, path);
}

TraceSet generate_trace(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  const RegionTree tree(spec.regions);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto jitter = [&] { return 1.0 + spec.noise_amplitude * unit(rng); };

  std::vector<ProcessProfile> profiles;
  for (int rank = 0; rank < spec.process_count; ++rank) {
    ProcessProfile p;
    p.rank = rank;
    const auto ri = static_cast<std::size_t>(rank);
    for (RegionId r : tree.preorder()) {
      double own = spec.base_cpu_time.at(r);
      for (const auto& inj : spec.imbalance) {
        if (inj.region == r) own *= inj.multipliers[ri];
      }
      p.samples[SampleKey{r, MetricKind::cpu_time()}] = own * jitter();
    }
    for (const auto& acc : spec.accessories) {
      const auto& targets = acc.regions.empty() ? tree.preorder() : acc.regions;
      for (RegionId r : targets) {
        p.samples[SampleKey{r, acc.metric}] = acc.base * acc.multipliers[ri] * jitter();
      }
    }
    profiles.push_back(std::move(p));
  }
  TraceMetadata meta{spec.label, ""};
  return to_inclusive(tree, std::move(profiles), std::move(meta));
}

}  // namespace spmdiag
