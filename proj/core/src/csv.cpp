#include "lsm/csv.hpp"

#include <charconv>
#include <sstream>
#include <system_error>

#include "lsm/errors.hpp"

namespace lsm::csv {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '+')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_comment(std::string_view key, std::string_view value) {
  comments_.push_back("# " + std::string(key) + ": " + std::string(value));
}

Table& Table::row() {
  rows_.emplace_back();
  return *this;
}

Table& Table::cell(std::string_view text) {
  if (rows_.empty()) rows_.emplace_back();
  rows_.back().emplace_back(text);
  return *this;
}

Table& Table::cell(double value) { return cell(std::string_view(format_double(value))); }

Table& Table::cell(long long value) { return cell(std::string_view(std::to_string(value))); }

std::string Table::str() const {
  std::string out;
  for (const auto& c : comments_) {
    out += c;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

FieldRecord parse_field_csv(std::string_view text) {
  FieldRecord rec;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kFieldHeader) {
        throw UsageError("unexpected field CSV header '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != 7) throw UsageError("field CSV row needs 7 columns");
    rec.particles.push_back(static_cast<Index>(parse_double(parts[0])));
    rec.positions.emplace_back(parse_double(parts[1]), parse_double(parts[2]));
    rec.field.displacements.emplace_back(parse_double(parts[3]), parse_double(parts[4]));
    rec.analytical.emplace_back(parse_double(parts[5]), parse_double(parts[6]));
  }
  if (!header_seen) throw UsageError("field CSV has no header");
  return rec;
}

}  // namespace lsm::csv
