#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spmdiag {

/// Set of attribute column indices (at most 64 columns).
class AttributeSet {
 public:
  static constexpr std::size_t kMaxAttributes = 64;

  AttributeSet() = default;
  explicit AttributeSet(std::uint64_t bits) : bits_(bits) {}
  static AttributeSet of(std::initializer_list<std::size_t> columns);

  bool contains(std::size_t column) const { return (bits_ >> column) & 1U; }
  void insert(std::size_t column) { bits_ |= std::uint64_t{1} << column; }
  AttributeSet with(std::size_t column) const;
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  bool intersects(AttributeSet other) const { return (bits_ & other.bits_) != 0; }
  bool subset_of(AttributeSet other) const { return (bits_ & ~other.bits_) == 0; }
  std::vector<std::size_t> columns() const;
  std::uint64_t bits() const { return bits_; }

  friend bool operator==(AttributeSet, AttributeSet) = default;
  friend auto operator<=>(AttributeSet, AttributeSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Decision tables

struct DecisionEntry {
  std::string id;
  std::vector<std::string> values;
  std::string decision;

  friend bool operator==(const DecisionEntry&, const DecisionEntry&) = default;
};

class DecisionTable {
 public:
  DecisionTable() = default;
  /// Throws ValidationError on arity mismatch, duplicate ids or names, or
  /// more than 64 attributes.
  DecisionTable(std::vector<std::string> attribute_names, std::vector<DecisionEntry> entries);

  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  const std::vector<DecisionEntry>& entries() const { return entries_; }
  std::size_t attribute_count() const { return attribute_names_.size(); }
  std::size_t entry_count() const { return entries_.size(); }

  friend bool operator==(const DecisionTable&, const DecisionTable&) = default;

 private:
  std::vector<std::string> attribute_names_;
  std::vector<DecisionEntry> entries_;
};

/// Delimited text: a header of attribute names followed by "decision",
/// optionally led by an "id" column. Tabs are used when the header has any,
/// commas otherwise. Blank lines and lines starting with '#' are skipped.
DecisionTable read_decision_table(std::istream& in, const std::string& source = "<input>");
DecisionTable load_decision_table(const std::string& path);
void write_decision_table(std::ostream& out, const DecisionTable& table);

// ---------------------------------------------------------------------------
// Discernibility matrix

enum class CellKind { zero, inconsistent, attributes };

struct MatrixCell {
  CellKind kind = CellKind::zero;
  AttributeSet attributes;

  friend bool operator==(const MatrixCell&, const MatrixCell&) = default;
};

/// Upper-triangular discernibility matrix. Cell (i, j) with i < j holds the
/// attributes on which entries i and j differ when their decisions differ.
class DiscernibilityMatrix {
 public:
  DiscernibilityMatrix() = default;
  DiscernibilityMatrix(std::vector<std::string> attribute_names, std::vector<std::string> entry_ids);

  std::size_t size() const { return entry_ids_.size(); }
  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  const std::vector<std::string>& entry_ids() const { return entry_ids_; }

  /// Either index order; the diagonal is always zero.
  const MatrixCell& cell(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, MatrixCell cell);

  /// Number of cells above the diagonal, n(n-1)/2.
  std::size_t populated_cells() const { return cells_.size(); }
  /// All AttrSet cells, row-major over the upper triangle.
  std::vector<AttributeSet> attribute_cells() const;
  std::size_t inconsistent_cells() const;

  /// "a1a4" for short names such as a1..a9, "x+y" otherwise.
  std::string format_set(AttributeSet s) const;

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  std::vector<std::string> attribute_names_;
  std::vector<std::string> entry_ids_;
  std::vector<MatrixCell> cells_;
};

DiscernibilityMatrix build_matrix(const DecisionTable& table);

/// Matrix rows as text, blank-padded lower triangle, cells "0", "-1" or the
/// concatenated attribute names.
void print_matrix(std::ostream& out, const DiscernibilityMatrix& m);

// ---------------------------------------------------------------------------
// Core extraction

struct CoreResult {
  std::vector<std::string> attribute_names;
  /// Co-optimal minimal attribute sets, ordered by attribute name list.
  std::vector<AttributeSet> cores;
  /// Attributes that alone separate some pair of entries.
  AttributeSet singleton_core;
  /// Clauses of the conjunctive form: the singletons, then every cell that
  /// contains no singleton attribute.
  std::vector<AttributeSet> cnf;
  /// Prime conjuncts after expanding the conjunctive form, with absorption.
  std::vector<AttributeSet> dnf;
  /// Occurrence score for each entry of `cores`.
  std::vector<std::size_t> core_frequency;
  /// Number of matrix cells in which each attribute appears.
  std::vector<std::size_t> attribute_frequency;
  std::size_t inconsistent_cells = 0;
  std::vector<std::string> warnings;

  std::vector<std::string> names(AttributeSet s) const;
};

/// Singleton collection, conjunctive form, expansion to the disjunctive form,
/// then selection of the smallest conjuncts with the highest occurrence score.
CoreResult extract_core(const DiscernibilityMatrix& m);

/// Exhaustive reduct search for cross-checking. At most 16 attributes.
std::vector<AttributeSet> brute_force_reducts(const DecisionTable& table);

}  // namespace spmdiag
