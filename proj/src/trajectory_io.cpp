#include "dryctl/trajectory_io.hpp"

#include "dryctl/csv.hpp"
#include "dryctl/errors.hpp"

#include <bit>
#include <cstring>

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

namespace dryctl {

// ---- CSV ------------------------------------------------------------------

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<const char*> header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), columns_(header.size()) {
  if (!out_)
    throw IoError("cannot open '" + path + "' for writing");
  bool first = true;
  for (const char* h : header) {
    if (!first)
      out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i)
      out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::close() {
  out_.flush();
  if (!out_)
    throw IoError("write to '" + path_ + "' failed");
  out_.close();
}

void write_columns(const std::string& path, std::initializer_list<const char*> header,
                   std::initializer_list<std::span<const double>> columns) {
  CsvWriter w(path, header);
  const std::size_t rows = columns.size() ? columns.begin()->size() : 0;
  std::vector<double> r(columns.size());
  for (std::size_t k = 0; k < rows; ++k) {
    std::size_t j = 0;
    for (auto col : columns)
      r[j++] = col[k];
    w.row(r);
  }
  w.close();
}

// ---- binary dump ----------------------------------------------------------

InMemoryTrajectory::InMemoryTrajectory(const DrierTrajectory& traj) : traj_(traj) {
  if (!traj.has_full())
    throw ConfigError("trajectory was recorded without the full space-time history");
}

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

} // namespace

BinaryDumpWriter::BinaryDumpWriter(const std::string& path, const SpaceTimeGrid& grid)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), n_nodes_(grid.n_nodes()),
      expected_(grid.n_samples()) {
  if (!out_)
    throw IoError("cannot open '" + path + "' for writing");
  out_.write(kDumpMagic, sizeof kDumpMagic);
  put<std::uint32_t>(out_, kDumpVersion);
  put<std::uint32_t>(out_, static_cast<std::uint32_t>(grid.n_cells()));
  put<std::uint32_t>(out_, static_cast<std::uint32_t>(grid.n_steps()));
  put<std::uint32_t>(out_, 0);
  put<double>(out_, grid.dt());
  put<double>(out_, grid.dx());
}

BinaryDumpWriter::~BinaryDumpWriter() = default;

void BinaryDumpWriter::write_slice(std::span<const double> eps_s, std::span<const double> eps_l,
                                   std::span<const double> T) {
  const auto bytes = static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(n_nodes_));
  out_.write(reinterpret_cast<const char*>(eps_s.data()), bytes);
  out_.write(reinterpret_cast<const char*>(eps_l.data()), bytes);
  out_.write(reinterpret_cast<const char*>(T.data()), bytes);
  if (!out_)
    throw IoError("write to '" + path_ + "' failed");
  ++written_;
}

void BinaryDumpWriter::finish() {
  out_.flush();
  if (!out_)
    throw IoError("write to '" + path_ + "' failed");
  if (written_ != expected_)
    throw IoError("trajectory dump '" + path_ + "' is incomplete");
}

BinaryDumpReader::BinaryDumpReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_)
    throw IoError("cannot open trajectory dump '" + path + "'");
  char magic[8];
  in_.read(magic, sizeof magic);
  if (!in_ || std::memcmp(magic, kDumpMagic, sizeof magic) != 0)
    throw IoError("'" + path + "' is not a trajectory dump");
  version_ = get<std::uint32_t>(in_);
  if (version_ != kDumpVersion)
    throw IoError("unsupported trajectory dump version " + std::to_string(version_));
  const auto n_cells = get<std::uint32_t>(in_);
  const auto n_steps = get<std::uint32_t>(in_);
  (void)get<std::uint32_t>(in_);
  const double dt = get<double>(in_);
  const double dx = get<double>(in_);
  if (!in_)
    throw IoError("truncated header in '" + path + "'");
  grid_ = SpaceTimeGrid::uniform(dx * n_cells, static_cast<int>(n_cells), dt, static_cast<int>(n_steps));

  in_.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in_.tellg());
  const std::size_t expected = kDumpHeaderBytes + 3 * sizeof(double) * static_cast<std::size_t>(grid_.n_nodes()) *
                                                      static_cast<std::size_t>(grid_.n_samples());
  if (size != expected)
    throw IoError("trajectory dump '" + path + "' has unexpected size");
}

void BinaryDumpReader::read_slice(int n, std::span<double> eps_s, std::span<double> eps_l, std::span<double> T) {
  if (n < 0 || n >= grid_.n_samples())
    throw IoError("slice index out of range in '" + path_ + "'");
  const std::size_t nn = static_cast<std::size_t>(grid_.n_nodes());
  const std::size_t slice_bytes = 3 * sizeof(double) * nn;
  in_.seekg(static_cast<std::streamoff>(kDumpHeaderBytes + slice_bytes * static_cast<std::size_t>(n)));
  const auto bytes = static_cast<std::streamsize>(sizeof(double) * nn);
  in_.read(reinterpret_cast<char*>(eps_s.data()), bytes);
  in_.read(reinterpret_cast<char*>(eps_l.data()), bytes);
  in_.read(reinterpret_cast<char*>(T.data()), bytes);
  if (!in_)
    throw IoError("read from '" + path_ + "' failed");
}

void write_binary_dump(const DrierTrajectory& traj, const std::string& path) {
  if (!traj.has_full())
    throw ConfigError("trajectory was recorded without the full space-time history");
  BinaryDumpWriter w(path, traj.grid);
  const auto nn = static_cast<std::size_t>(traj.grid.n_nodes());
  for (int n = 0; n < traj.grid.n_samples(); ++n) {
    const std::size_t off = nn * static_cast<std::size_t>(n);
    w.write_slice(std::span(traj.eps_s).subspan(off, nn), std::span(traj.eps_l).subspan(off, nn),
                  std::span(traj.T).subspan(off, nn));
  }
  w.finish();
}

DrierTrajectory read_binary_dump(const std::string& path) {
  BinaryDumpReader r(path);
  DrierTrajectory traj;
  traj.grid = r.grid();
  const auto nn = static_cast<std::size_t>(traj.grid.n_nodes());
  const std::size_t total = nn * static_cast<std::size_t>(traj.grid.n_samples());
  traj.eps_s.resize(total);
  traj.eps_l.resize(total);
  traj.T.resize(total);
  traj.outlet_T = TimeSeries(traj.grid);
  traj.outlet_X = TimeSeries(traj.grid);
  for (int n = 0; n < traj.grid.n_samples(); ++n) {
    const std::size_t off = nn * static_cast<std::size_t>(n);
    r.read_slice(n, std::span(traj.eps_s).subspan(off, nn), std::span(traj.eps_l).subspan(off, nn),
                 std::span(traj.T).subspan(off, nn));
    traj.outlet_T[n] = traj.T[off + nn - 1];
    traj.outlet_X[n] = traj.eps_l[off + nn - 1] / traj.eps_s[off + nn - 1];
  }
  traj.final_state = traj.slice(traj.grid.n_steps());
  return traj;
}

void write_trajectory_csv(const DrierTrajectory& traj, const std::string& path, int stride) {
  if (!traj.has_full())
    throw ConfigError("trajectory was recorded without the full space-time history");
  if (stride < 1)
    throw ConfigError("trajectory stride must be positive");
  CsvWriter w(path, {"t", "x", "eps_s", "eps_l", "T"});
  const auto& g = traj.grid;
  for (int n = 0; n < g.n_samples(); n += stride) {
    for (int i = 0; i < g.n_nodes(); ++i) {
      const NodeState s = traj.node(n, i);
      w.row({g.t(n), g.x(i), s.eps_s, s.eps_l, s.T});
    }
  }
  w.close();
}

} // namespace dryctl
