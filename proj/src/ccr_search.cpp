#include "spmdiag/ccr_search.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "spmdiag/errors.hpp"

namespace spmdiag {

namespace {

/// Unmasked vectors plus the baseline mask (every nested region).
struct SearchContext {
  const TraceSet& trace;
  const OpticsParams& params;
  std::vector<PerformanceVector> vectors;
  std::set<RegionId> nested;

  SearchContext(const TraceSet& t, const OpticsParams& p) : trace(t), params(p), vectors(build_vectors(t)) {
    for (RegionId r : t.tree().preorder()) {
      if (t.tree().depth(r) > 1) nested.insert(r);
    }
  }

  Partition cluster_masked(const std::set<RegionId>& extra_mask, const std::set<RegionId>& unmask = {}) const {
    std::vector<PerformanceVector> masked;
    masked.reserve(vectors.size());
    for (const auto& v : vectors) masked.push_back(v.with_mask(nested).with_mask(extra_mask).without_mask(unmask));
    return cluster(masked, params);
  }

  Partition baseline() const { return cluster_masked({}); }
};

bool has_time(const TraceSet& trace, RegionId region) {
  return std::any_of(trace.profiles().begin(), trace.profiles().end(),
                     [&](const ProcessProfile& p) { return p.cpu_time(region) > 0.0; });
}

std::vector<CcrNode> level1(const SearchContext& ctx, const Partition& baseline) {
  std::vector<CcrNode> out;
  for (RegionId k : ctx.trace.tree().roots()) {
    if (!has_time(ctx.trace, k)) continue;
    Partition p = ctx.cluster_masked({k});
    if (p != baseline) out.push_back(CcrNode{{k}, 1, false, std::nullopt, std::move(p)});
  }
  return out;
}

CombinedSearchResult combine(const SearchContext& ctx, const Partition& baseline) {
  CombinedSearchResult result;
  const auto& top = ctx.trace.tree().roots();
  for (std::size_t n = 2; n <= top.size() && result.groups.empty(); ++n) {
    for (std::size_t start = 0; start + n <= top.size(); ++start) {
      std::vector<RegionId> window(top.begin() + static_cast<std::ptrdiff_t>(start),
                                   top.begin() + static_cast<std::ptrdiff_t>(start + n));
      Partition p = ctx.cluster_masked({window.begin(), window.end()});
      if (p != baseline) result.groups.push_back(CcrNode{std::move(window), 1, false, std::nullopt, std::move(p)});
    }
  }
  if (result.groups.empty()) return result;

  std::set<RegionId> common(result.groups.front().regions.begin(), result.groups.front().regions.end());
  for (const auto& g : result.groups) {
    std::set<RegionId> next;
    for (RegionId r : g.regions) {
      if (common.count(r)) next.insert(r);
    }
    common = std::move(next);
  }
  // Keep sibling order.
  for (RegionId r : top) {
    if (common.count(r)) result.core.push_back(r);
  }
  return result;
}

std::vector<CcrNode> descend_from(const SearchContext& ctx, const Partition& baseline, const CcrNode& node) {
  std::vector<CcrNode> out;
  if (node.combined()) return out;
  const RegionTree& tree = ctx.trace.tree();
  const RegionId j = node.regions.front();

  // The outer CCR and everything above it are removed so the child stands in
  // for the whole nested path.
  std::set<RegionId> outer{j};
  for (RegionId a : tree.ancestors(j)) outer.insert(a);

  for (RegionId k : tree.children(j)) {
    Partition p = ctx.cluster_masked(outer, {k});
    if (p == baseline) out.push_back(CcrNode{{k}, node.level + 1, false, std::nullopt, std::move(p)});
  }
  return out;
}

}  // namespace

std::vector<std::size_t> CcrTree::children(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].parent == node) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<RegionId>> CcrTree::cccrs() const {
  std::vector<std::vector<RegionId>> out;
  for (const auto& n : nodes) {
    if (n.is_cccr && !n.combined()) out.push_back(n.regions);
  }
  if (combined_search && !combined_core.empty()) out.push_back(combined_core);
  return out;
}

std::vector<std::vector<std::size_t>> CcrTree::chains() const {
  std::vector<std::vector<std::size_t>> out;
  std::function<void(std::size_t, std::vector<std::size_t>&)> walk = [&](std::size_t i, std::vector<std::size_t>& path) {
    path.push_back(i);
    const auto kids = children(i);
    if (kids.empty()) out.push_back(path);
    for (auto k : kids) walk(k, path);
    path.pop_back();
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].parent) {
      std::vector<std::size_t> path;
      walk(i, path);
    }
  }
  return out;
}

Partition baseline_partition(const TraceSet& trace, const OpticsParams& params) {
  return SearchContext(trace, params).baseline();
}

std::vector<CcrNode> find_level1_ccrs(const TraceSet& trace, const OpticsParams& params) {
  const SearchContext ctx(trace, params);
  return level1(ctx, ctx.baseline());
}

CombinedSearchResult combine_and_search(const TraceSet& trace, const OpticsParams& params) {
  const SearchContext ctx(trace, params);
  return combine(ctx, ctx.baseline());
}

std::vector<CcrNode> descend(const TraceSet& trace, const OpticsParams& params, const CcrNode& node) {
  const SearchContext ctx(trace, params);
  return descend_from(ctx, ctx.baseline(), node);
}

CcrTree find_cccr(const TraceSet& trace, const OpticsParams& params) {
  if (trace.process_count() < 2) throw ValidationError("CCR search needs at least two processes");
  const SearchContext ctx(trace, params);

  CcrTree tree;
  tree.baseline = ctx.baseline();
  if (tree.baseline.size() <= 1) {
    tree.no_problem = true;
    return tree;
  }

  auto level_one = level1(ctx, tree.baseline);
  if (level_one.empty()) {
    auto combined = combine(ctx, tree.baseline);
    tree.combined_search = true;
    tree.combined_core = combined.core;
    for (auto& g : combined.groups) {
      g.is_cccr = std::set<RegionId>(g.regions.begin(), g.regions.end()) ==
                  std::set<RegionId>(combined.core.begin(), combined.core.end());
      tree.nodes.push_back(std::move(g));
    }
    if (!tree.nodes.empty() && combined.core.empty()) {
      tree.warnings.push_back("combined critical regions are disjoint; no single core region can be named");
    }
    return tree;
  }

  // Depth-first so each chain is contiguous in `nodes`.
  std::function<void(CcrNode)> grow = [&](CcrNode node) {
    const std::size_t index = tree.nodes.size();
    auto kids = descend_from(ctx, tree.baseline, node);
    node.is_cccr = kids.empty();
    tree.nodes.push_back(std::move(node));
    for (auto& k : kids) {
      k.parent = index;
      grow(std::move(k));
    }
  };
  for (auto& n : level_one) grow(std::move(n));
  return tree;
}

}  // namespace spmdiag
