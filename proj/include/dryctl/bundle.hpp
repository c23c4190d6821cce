#pragma once

#include <string>
#include <vector>

namespace dryctl {

/// One CSV file worth of equal-length columns.
struct ResultTable {
  std::string name; ///< file stem, e.g. "control"
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Plot-ready output of one scenario run.
class ResultBundle {
public:
  /// Throws ConfigError on ragged columns or a header/column count mismatch.
  void add(ResultTable table);

  bool empty() const noexcept { return tables_.empty(); }
  const std::vector<ResultTable>& tables() const noexcept { return tables_; }
  const ResultTable* find(const std::string& name) const;

private:
  std::vector<ResultTable> tables_;
};

/// Writes <dir>/<name>.csv for every table and returns the paths. An empty
/// bundle writes nothing and does not touch the directory. Throws IoError.
std::vector<std::string> emit_plot_data(const ResultBundle& bundle, const std::string& dir);

} // namespace dryctl
