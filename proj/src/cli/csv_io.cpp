#include "nam/cli/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>
#include <unordered_map>

namespace nam::cli {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  }
  return fields;
}

// Line-oriented reader that tracks line numbers and skips blank lines.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw ParseError(path + ": cannot open file");
  }

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.find_first_not_of(" \t") == std::string::npos) continue;
      fields = split(line_);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  double number(std::string_view field) const {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
      fail("not a number: '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) fail("non-finite value: '" + std::string(field) + "'");
    return value;
  }

  long integer(std::string_view field) const {
    long value = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
      fail("not an integer: '" + std::string(field) + "'");
    }
    return value;
  }

  // Checks `group_id,<prefix>1,...,<prefix>d` and returns d.
  Index numbered_header(const char* prefix) {
    std::vector<std::string_view> fields;
    if (!next(fields)) fail("missing header");
    if (fields.front() != "group_id") fail("header must start with group_id");
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string expected = prefix + std::to_string(c);
      if (fields[c] != expected) {
        fail("expected column '" + expected + "', found '" +
             std::string(fields[c]) + "'");
      }
    }
    return static_cast<Index>(fields.size()) - 1;
  }

  void exact_header(const std::vector<std::string_view>& expected) {
    std::vector<std::string_view> fields;
    if (!next(fields)) fail("missing header");
    if (fields != expected) {
      std::string joined;
      for (auto f : expected) joined += (joined.empty() ? "" : ",") + std::string(f);
      fail("header must be '" + joined + "'");
    }
  }

  void expect_columns(const std::vector<std::string_view>& fields, std::size_t n) const {
    if (fields.size() != n) {
      fail("expected " + std::to_string(n) + " columns, found " + std::to_string(fields.size()));
    }
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_;
  long line_no_ = 0;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

NestedDataset read_dataset(const std::string& x_path, const std::string& y_path) {
  CsvReader xr(x_path);
  const Index q = xr.numbered_header("x");
  std::vector<std::string> ids;
  std::unordered_map<std::string, Index> index_of;
  std::vector<std::vector<double>> x_rows;
  std::vector<std::string_view> fields;
  while (xr.next(fields)) {
    xr.expect_columns(fields, static_cast<std::size_t>(q) + 1);
    std::string id(fields[0]);
    if (id.empty()) xr.fail("empty group_id");
    if (!index_of.emplace(id, static_cast<Index>(ids.size())).second) {
      xr.fail("duplicate group_id '" + id + "'");
    }
    ids.push_back(std::move(id));
    std::vector<double> row;
    for (Index c = 0; c < q; ++c) row.push_back(xr.number(fields[c + 1]));
    x_rows.push_back(std::move(row));
  }
  if (ids.empty()) throw ParseError(x_path + ": no groups");
  const Index J = static_cast<Index>(ids.size());

  CsvReader yr(y_path);
  const Index p = yr.numbered_header("y");
  if (p < 1) yr.fail("at least one observation column required");
  std::vector<std::vector<std::vector<double>>> rows_of(J);
  std::vector<char> closed(J, 0);
  Index current = -1;
  while (yr.next(fields)) {
    yr.expect_columns(fields, static_cast<std::size_t>(p) + 1);
    const auto it = index_of.find(std::string(fields[0]));
    if (it == index_of.end()) yr.fail("group_id '" + std::string(fields[0]) + "' not in " + x_path);
    const Index j = it->second;
    if (j != current) {
      if (closed[j]) yr.fail("rows of group '" + ids[j] + "' are not contiguous");
      if (current >= 0) closed[current] = 1;
      current = j;
    }
    std::vector<double> row;
    for (Index c = 0; c < p; ++c) row.push_back(yr.number(fields[c + 1]));
    rows_of[j].push_back(std::move(row));
  }

  Eigen::MatrixXd x(J, q);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(J);
  for (Index j = 0; j < J; ++j) {
    for (Index c = 0; c < q; ++c) x(j, c) = x_rows[j][c];
    if (rows_of[j].empty()) {
      throw ParseError(y_path + ": group '" + ids[j] + "' has no observations");
    }
    Eigen::MatrixXd block(static_cast<Index>(rows_of[j].size()), p);
    for (Index i = 0; i < block.rows(); ++i) {
      for (Index c = 0; c < p; ++c) block(i, c) = rows_of[j][i][c];
    }
    blocks.push_back(std::move(block));
  }
  return NestedDataset::from_blocks(std::move(x), blocks, std::move(ids));
}

void write_dataset(const NestedDataset& data, const std::string& x_path,
                   const std::string& y_path) {
  auto xo = open_output(x_path);
  xo << "group_id";
  for (Index c = 0; c < data.q(); ++c) xo << ",x" << c + 1;
  xo << '\n';
  for (Index j = 0; j < data.groups(); ++j) {
    xo << data.group_ids[j];
    for (Index c = 0; c < data.q(); ++c) xo << ',' << format_double(data.x(j, c));
    xo << '\n';
  }
  finish_output(xo, x_path);

  auto yo = open_output(y_path);
  yo << "group_id";
  for (Index c = 0; c < data.p(); ++c) yo << ",y" << c + 1;
  yo << '\n';
  for (Index j = 0; j < data.groups(); ++j) {
    for (Index i = data.offsets[j]; i < data.offsets[j + 1]; ++i) {
      yo << data.group_ids[j];
      for (Index c = 0; c < data.p(); ++c) yo << ',' << format_double(data.y(i, c));
      yo << '\n';
    }
  }
  finish_output(yo, y_path);
}

GroupLabels read_group_labels(const std::string& path) {
  CsvReader r(path);
  r.exact_header({"group_id", "label"});
  GroupLabels out;
  std::unordered_map<std::string, int> seen;
  std::vector<std::string_view> fields;
  while (r.next(fields)) {
    r.expect_columns(fields, 2);
    std::string id(fields[0]);
    if (!seen.emplace(id, 0).second) r.fail("duplicate group_id '" + id + "'");
    out.group_ids.push_back(std::move(id));
    out.labels.push_back(static_cast<int>(r.integer(fields[1])));
  }
  if (out.labels.empty()) throw ParseError(path + ": no rows");
  return out;
}

void write_group_labels(const std::string& path, const std::vector<std::string>& group_ids,
                        const std::vector<int>& labels) {
  auto out = open_output(path);
  out << "group_id,label\n";
  for (std::size_t j = 0; j < labels.size(); ++j) out << group_ids[j] << ',' << labels[j] << '\n';
  finish_output(out, path);
}

ObsLabels read_obs_labels(const std::string& path) {
  CsvReader r(path);
  r.exact_header({"group_id", "obs_idx", "label"});
  ObsLabels out;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::map<long, int>> by_group;
  std::vector<std::string_view> fields;
  while (r.next(fields)) {
    r.expect_columns(fields, 3);
    std::string id(fields[0]);
    auto [it, fresh] = index_of.emplace(id, out.group_ids.size());
    if (fresh) {
      out.group_ids.push_back(id);
      by_group.emplace_back();
    }
    const long obs = r.integer(fields[1]);
    if (obs < 1) r.fail("obs_idx must be positive");
    if (!by_group[it->second].emplace(obs, static_cast<int>(r.integer(fields[2]))).second) {
      r.fail("duplicate obs_idx " + std::to_string(obs) + " in group '" + id + "'");
    }
  }
  if (by_group.empty()) throw ParseError(path + ": no rows");
  for (std::size_t j = 0; j < by_group.size(); ++j) {
    const auto& m = by_group[j];
    if (m.rbegin()->first != static_cast<long>(m.size())) {
      throw ParseError(path + ": obs_idx of group '" + out.group_ids[j] +
                       "' must run 1.." + std::to_string(m.size()));
    }
    std::vector<int> labels;
    labels.reserve(m.size());
    for (const auto& [idx, label] : m) labels.push_back(label);
    out.labels.push_back(std::move(labels));
  }
  return out;
}

void write_obs_labels(const std::string& path, const std::vector<std::string>& group_ids,
                      const std::vector<std::vector<int>>& labels) {
  auto out = open_output(path);
  out << "group_id,obs_idx,label\n";
  for (std::size_t j = 0; j < labels.size(); ++j) {
    for (std::size_t i = 0; i < labels[j].size(); ++i) {
      out << group_ids[j] << ',' << i + 1 << ',' << labels[j][i] << '\n';
    }
  }
  finish_output(out, path);
}

}  // namespace nam::cli
