#include "dryctl/bundle.hpp"

#include "dryctl/csv.hpp"
#include "dryctl/errors.hpp"

#include <filesystem>
#include <fstream>

namespace dryctl {

void ResultBundle::add(ResultTable table) {
  if (table.name.empty())
    throw ConfigError("result table needs a name");
  if (table.header.size() != table.columns.size())
    throw ConfigError("result table '" + table.name + "': header and column counts differ");
  for (const auto& c : table.columns)
    if (c.size() != table.columns.front().size())
      throw ConfigError("result table '" + table.name + "': columns have different lengths");
  tables_.push_back(std::move(table));
}

const ResultTable* ResultBundle::find(const std::string& name) const {
  for (const auto& t : tables_)
    if (t.name == name)
      return &t;
  return nullptr;
}

std::vector<std::string> emit_plot_data(const ResultBundle& bundle, const std::string& dir) {
  std::vector<std::string> written;
  if (bundle.empty())
    return written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir + "': " + ec.message());

  for (const auto& t : bundle.tables()) {
    const std::string path = (std::filesystem::path(dir) / (t.name + ".csv")).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot open '" + path + "' for writing");
    for (std::size_t j = 0; j < t.header.size(); ++j)
      out << (j ? "," : "") << t.header[j];
    out << '\n';
    const std::size_t rows = t.columns.empty() ? 0 : t.columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < t.columns.size(); ++j)
        out << (j ? "," : "") << format_double(t.columns[j][r]);
      out << '\n';
    }
    out.close();
    if (!out)
      throw IoError("write to '" + path + "' failed");
    written.push_back(path);
  }
  return written;
}

} // namespace dryctl
