#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lsm/lattice.hpp"

namespace lsm::csv {

/// 17 significant digits, locale independent; parse_double(format_double(x)) == x.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Comma-separated table with a leading '#' manifest block. Rows are
/// emitted in insertion order; lines end with LF.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_comment(std::string_view key, std::string_view value);
  Table& row();
  Table& cell(std::string_view text);
  Table& cell(double value);
  Table& cell(long long value);
  Table& cell(int value) { return cell(static_cast<long long>(value)); }
  Table& cell(bool value) { return cell(std::string_view(value ? "1" : "0")); }

  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// One particle row of a displacement field dump.
struct FieldRecord {
  std::vector<Index> particles;
  std::vector<Eigen::Vector2d> positions;
  SolutionField field;
  std::vector<Eigen::Vector2d> analytical;
};

inline constexpr const char* kFieldHeader = "particle,x,y,u,v,u_analytical,v_analytical";

/// Reads a field CSV written by the benchmark command. Throws UsageError on
/// malformed input.
FieldRecord parse_field_csv(std::string_view text);

}  // namespace lsm::csv
