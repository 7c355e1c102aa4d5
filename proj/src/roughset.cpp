#include "spmdiag/roughset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "spmdiag/errors.hpp"

namespace spmdiag {

AttributeSet AttributeSet::of(std::initializer_list<std::size_t> columns) {
  AttributeSet s;
  for (auto c : columns) s.insert(c);
  return s;
}

AttributeSet AttributeSet::with(std::size_t column) const {
  AttributeSet s = *this;
  s.insert(column);
  return s;
}

std::vector<std::size_t> AttributeSet::columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < kMaxAttributes; ++c) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DecisionTable

DecisionTable::DecisionTable(std::vector<std::string> attribute_names, std::vector<DecisionEntry> entries)
    : attribute_names_(std::move(attribute_names)), entries_(std::move(entries)) {
  if (attribute_names_.size() > AttributeSet::kMaxAttributes) {
    throw ValidationError("decision table has " + std::to_string(attribute_names_.size()) +
                          " attributes; at most 64 are supported");
  }
  std::set<std::string> names;
  for (const auto& n : attribute_names_) {
    if (n.empty()) throw ValidationError("attribute name must not be empty");
    if (!names.insert(n).second) throw ValidationError("duplicate attribute name '" + n + "'");
  }
  std::set<std::string> ids;
  for (const auto& e : entries_) {
    if (e.values.size() != attribute_names_.size()) {
      throw ValidationError("entry '" + e.id + "' has " + std::to_string(e.values.size()) + " attribute values, expected " +
                            std::to_string(attribute_names_.size()));
    }
    if (!ids.insert(e.id).second) throw ValidationError("duplicate entry id '" + e.id + "'");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

DecisionTable read_decision_table(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  char delim = ',';
  std::vector<std::string> header;
  bool has_id = false;
  std::vector<DecisionEntry> entries;

  auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (header.empty()) {
      delim = t.find('\t') != std::string::npos ? '\t' : ',';
      header = split(t, delim);
      if (header.empty() || lower(header.back()) != "decision") fail("last header column must be 'decision'");
      has_id = lower(header.front()) == "id";
      if (has_id && header.size() < 2) fail("header has no decision column");
      continue;
    }
    auto fields = split(t, delim);
    if (fields.size() != header.size()) {
      fail("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (fields[f].empty()) fail("field '" + header[f] + "' is empty");
    }
    DecisionEntry e;
    e.id = has_id ? fields.front() : std::to_string(entries.size());
    e.values.assign(fields.begin() + (has_id ? 1 : 0), fields.end() - 1);
    e.decision = fields.back();
    entries.push_back(std::move(e));
  }
  if (header.empty()) throw ParseError(source + ": missing header line");

  std::vector<std::string> names(header.begin() + (has_id ? 1 : 0), header.end() - 1);
  try {
    return DecisionTable(std::move(names), std::move(entries));
  } catch (const ValidationError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

DecisionTable load_decision_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open decision table '" + path + "'");
  return read_decision_table(in, path);
}

void write_decision_table(std::ostream& out, const DecisionTable& table) {
  out << "id";
  for (const auto& n : table.attribute_names()) out << '\t' << n;
  out << "\tdecision\n";
  for (const auto& e : table.entries()) {
    out << e.id;
    for (const auto& v : e.values) out << '\t' << v;
    out << '\t' << e.decision << '\n';
  }
}

// ---------------------------------------------------------------------------
// DiscernibilityMatrix

DiscernibilityMatrix::DiscernibilityMatrix(std::vector<std::string> attribute_names,
                                           std::vector<std::string> entry_ids)
    : attribute_names_(std::move(attribute_names)), entry_ids_(std::move(entry_ids)) {
  const std::size_t n = entry_ids_.size();
  cells_.resize(n < 2 ? 0 : n * (n - 1) / 2);
}

std::size_t DiscernibilityMatrix::offset(std::size_t i, std::size_t j) const {
  // Row i of the strict upper triangle starts after i rows of decreasing length.
  const std::size_t n = entry_ids_.size();
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

const MatrixCell& DiscernibilityMatrix::cell(std::size_t i, std::size_t j) const {
  static const MatrixCell diagonal{};
  if (i >= size() || j >= size()) throw ValidationError("matrix index out of range");
  if (i == j) return diagonal;
  if (i > j) std::swap(i, j);
  return cells_[offset(i, j)];
}

void DiscernibilityMatrix::set(std::size_t i, std::size_t j, MatrixCell cell) {
  if (i >= size() || j >= size() || i == j) throw ValidationError("matrix index out of range");
  if (i > j) std::swap(i, j);
  if (cell.kind == CellKind::attributes && cell.attributes.empty()) {
    throw ValidationError("attribute cell must not be empty");
  }
  cells_[offset(i, j)] = cell;
}

std::vector<AttributeSet> DiscernibilityMatrix::attribute_cells() const {
  std::vector<AttributeSet> out;
  for (const auto& c : cells_) {
    if (c.kind == CellKind::attributes) out.push_back(c.attributes);
  }
  return out;
}

std::size_t DiscernibilityMatrix::inconsistent_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.kind == CellKind::inconsistent; }));
}

std::string DiscernibilityMatrix::format_set(AttributeSet s) const {
  const bool compact = std::all_of(attribute_names_.begin(), attribute_names_.end(), [](const std::string& n) {
    return n.size() >= 2 && std::isalpha(static_cast<unsigned char>(n[0])) &&
           std::all_of(n.begin() + 1, n.end(), [](unsigned char c) { return std::isdigit(c); });
  });
  std::string out;
  for (auto c : s.columns()) {
    if (!out.empty() && !compact) out += '+';
    out += attribute_names_[c];
  }
  return out;
}

DiscernibilityMatrix build_matrix(const DecisionTable& table) {
  std::vector<std::string> ids;
  for (const auto& e : table.entries()) ids.push_back(e.id);
  DiscernibilityMatrix m(table.attribute_names(), std::move(ids));

  const auto& entries = table.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].decision == entries[j].decision) continue;
      AttributeSet differing;
      for (std::size_t a = 0; a < table.attribute_count(); ++a) {
        if (entries[i].values[a] != entries[j].values[a]) differing.insert(a);
      }
      m.set(i, j, differing.empty() ? MatrixCell{CellKind::inconsistent, {}}
                                    : MatrixCell{CellKind::attributes, differing});
    }
  }
  return m;
}

void print_matrix(std::ostream& out, const DiscernibilityMatrix& m) {
  const std::size_t n = m.size();
  auto text = [&](std::size_t i, std::size_t j) -> std::string {
    const auto& c = m.cell(i, j);
    switch (c.kind) {
      case CellKind::zero: return "0";
      case CellKind::inconsistent: return "-1";
      case CellKind::attributes: return m.format_set(c.attributes);
    }
    return "?";
  };
  std::vector<std::size_t> width(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) width[j] = std::max(width[j], text(i, j).size());
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::string row;
    for (std::size_t j = 0; j < n; ++j) {
      const std::string cell = j < i ? std::string() : text(i, j);
      if (j > 0) row += "  ";
      row += cell + std::string(width[j] - cell.size(), ' ');
    }
    row.erase(row.find_last_not_of(' ') + 1);
    out << row << '\n';
  }
}

// ---------------------------------------------------------------------------
// Core extraction

std::vector<std::string> CoreResult::names(AttributeSet s) const {
  std::vector<std::string> out;
  for (auto c : s.columns()) out.push_back(attribute_names[c]);
  return out;
}

namespace {

/// Drop every set that is a superset of another one; keeps the result sorted.
void absorb(std::vector<AttributeSet>& terms) {
  std::sort(terms.begin(), terms.end(), [](AttributeSet a, AttributeSet b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<AttributeSet> kept;
  for (auto t : terms) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](AttributeSet k) { return k.subset_of(t); });
    if (!dominated) kept.push_back(t);
  }
  terms = std::move(kept);
}

}  // namespace

CoreResult extract_core(const DiscernibilityMatrix& m) {
  CoreResult result;
  result.attribute_names = m.attribute_names();
  result.attribute_frequency.assign(m.attribute_names().size(), 0);
  result.inconsistent_cells = m.inconsistent_cells();

  const auto cells = m.attribute_cells();
  for (auto c : cells) {
    for (auto a : c.columns()) ++result.attribute_frequency[a];
  }

  // Attributes that alone tell some pair apart.
  for (auto c : cells) {
    if (c.size() == 1) result.singleton_core = AttributeSet(result.singleton_core.bits() | c.bits());
  }
  // Conjoin every cell that the singletons do not already cover.
  for (auto a : result.singleton_core.columns()) result.cnf.push_back(AttributeSet::of({a}));
  for (auto c : cells) {
    if (!c.intersects(result.singleton_core)) result.cnf.push_back(c);
  }
  // Distribute into disjunctive form, absorbing after each clause.
  std::vector<AttributeSet> terms{AttributeSet{}};
  for (auto clause : result.cnf) {
    std::vector<AttributeSet> next;
    for (auto t : terms) {
      if (t.intersects(clause)) {
        next.push_back(t);
        continue;
      }
      for (auto a : clause.columns()) next.push_back(t.with(a));
    }
    absorb(next);
    terms = std::move(next);
  }
  result.dnf = terms;

  const std::size_t min_size = terms.front().size();
  auto score = [&](AttributeSet s) {
    std::size_t total = 0;
    for (auto a : s.columns()) total += result.attribute_frequency[a];
    return total;
  };
  std::size_t best = 0;
  for (auto t : terms) {
    if (t.size() == min_size) best = std::max(best, score(t));
  }
  for (auto t : terms) {
    if (t.size() == min_size && score(t) == best) result.cores.push_back(t);
  }
  std::sort(result.cores.begin(), result.cores.end(),
            [&](AttributeSet a, AttributeSet b) { return result.names(a) < result.names(b); });
  for (auto c : result.cores) result.core_frequency.push_back(score(c));

  if (result.inconsistent_cells > 0) {
    std::string msg = std::to_string(result.inconsistent_cells) +
                      " entry pair(s) have different decisions but identical attribute values";
    if (cells.empty()) msg += "; no attribute discerns any decision";
    result.warnings.push_back(std::move(msg));
  }
  return result;
}

std::vector<AttributeSet> brute_force_reducts(const DecisionTable& table) {
  const std::size_t k = table.attribute_count();
  if (k > 16) {
    throw ValidationError("brute-force reduct search supports at most 16 attributes, table has " +
                          std::to_string(k));
  }
  const auto& entries = table.entries();

  // Pairs with different decisions that the full attribute set can tell apart,
  // each recorded as the bitmask of attributes that differ.
  std::vector<std::uint64_t> required;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].decision == entries[j].decision) continue;
      std::uint64_t diff = 0;
      for (std::size_t a = 0; a < k; ++a) {
        if (entries[i].values[a] != entries[j].values[a]) diff |= std::uint64_t{1} << a;
      }
      if (diff != 0) required.push_back(diff);
    }
  }

  std::vector<std::uint64_t> valid;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
    const bool keeps_all =
        std::all_of(required.begin(), required.end(), [&](std::uint64_t d) { return (d & subset) != 0; });
    if (keeps_all) valid.push_back(subset);
  }
  std::stable_sort(valid.begin(), valid.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<AttributeSet> minimal;
  for (auto v : valid) {
    const bool has_smaller =
        std::any_of(minimal.begin(), minimal.end(), [&](AttributeSet m) { return (m.bits() & ~v) == 0; });
    if (!has_smaller) minimal.emplace_back(v);
  }
  return minimal;
}

}  // namespace spmdiag
