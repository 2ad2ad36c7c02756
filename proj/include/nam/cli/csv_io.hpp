#ifndef NAM_CLI_CSV_IO_HPP
#define NAM_CLI_CSV_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "nam/model.hpp"

namespace nam::cli {

// Malformed or inconsistent input file. The message carries the file name
// and, where it applies, the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output file could not be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// x.csv: `group_id,x1..xq`, one row per group, defining the group order.
// y.csv: `group_id,y1..yp`, one row per observation; each group's rows are
// contiguous and every group of x.csv owns at least one row.
NestedDataset read_dataset(const std::string& x_path, const std::string& y_path);
void write_dataset(const NestedDataset& data, const std::string& x_path,
                   const std::string& y_path);

struct GroupLabels {
  std::vector<std::string> group_ids;
  std::vector<int> labels;
};

struct ObsLabels {
  std::vector<std::string> group_ids;          // first-appearance order
  std::vector<std::vector<int>> labels;        // labels[j][i] for obs_idx i + 1
};

// `group_id,label`.
GroupLabels read_group_labels(const std::string& path);
void write_group_labels(const std::string& path, const std::vector<std::string>& group_ids,
                        const std::vector<int>& labels);

// `group_id,obs_idx,label` with obs_idx running 1..n_j inside each group.
ObsLabels read_obs_labels(const std::string& path);
void write_obs_labels(const std::string& path, const std::vector<std::string>& group_ids,
                      const std::vector<std::vector<int>>& labels);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace nam::cli

#endif  // NAM_CLI_CSV_IO_HPP
