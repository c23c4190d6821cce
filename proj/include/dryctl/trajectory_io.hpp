#pragma once

// Persistence of nonlinear drier trajectories.
//
// Binary dump layout (little-endian, version 1):
//
//   offset  size  field
//   0       8     magic "DRYTRAJ\0"
//   8       4     version (uint32)
//   12      4     N, number of cells (uint32); slices hold N+1 nodes
//   16      4     n_steps (uint32); the file holds n_steps+1 slices
//   20      4     reserved, zero
//   24      8     dt (float64)
//   32      8     dx (float64)
//   40      ...   slices n = 0..n_steps, each eps_s[N+1], eps_l[N+1], T[N+1] as float64

#include "dryctl/drier_model.hpp"

#include <cstdint>
#include <fstream>
#include <string>

namespace dryctl {

inline constexpr char kDumpMagic[8] = {'D', 'R', 'Y', 'T', 'R', 'A', 'J', '\0'};
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr std::size_t kDumpHeaderBytes = 40;

/// Backward-readable access to a stored forward trajectory, one slice at a time.
class TrajectorySource {
public:
  virtual ~TrajectorySource() = default;
  virtual const SpaceTimeGrid& grid() const = 0;
  virtual void read_slice(int n, std::span<double> eps_s, std::span<double> eps_l, std::span<double> T) = 0;
};

class InMemoryTrajectory final : public TrajectorySource {
public:
  explicit InMemoryTrajectory(const DrierTrajectory& traj);
  const SpaceTimeGrid& grid() const override { return traj_.grid; }
  void read_slice(int n, std::span<double> eps_s, std::span<double> eps_l, std::span<double> T) override {
    traj_.read_slice(n, eps_s, eps_l, T);
  }

private:
  const DrierTrajectory& traj_;
};

class BinaryDumpWriter {
public:
  BinaryDumpWriter(const std::string& path, const SpaceTimeGrid& grid);
  ~BinaryDumpWriter();
  BinaryDumpWriter(const BinaryDumpWriter&) = delete;
  BinaryDumpWriter& operator=(const BinaryDumpWriter&) = delete;

  void write_slice(std::span<const double> eps_s, std::span<const double> eps_l, std::span<const double> T);
  /// Flushes and checks that exactly n_steps+1 slices were written.
  void finish();

private:
  std::ofstream out_;
  std::string path_;
  int n_nodes_ = 0;
  int expected_ = 0;
  int written_ = 0;
};

class BinaryDumpReader final : public TrajectorySource {
public:
  explicit BinaryDumpReader(const std::string& path);

  const SpaceTimeGrid& grid() const override { return grid_; }
  std::uint32_t version() const noexcept { return version_; }
  void read_slice(int n, std::span<double> eps_s, std::span<double> eps_l, std::span<double> T) override;

private:
  std::ifstream in_;
  std::string path_;
  SpaceTimeGrid grid_;
  std::uint32_t version_ = 0;
};

void write_binary_dump(const DrierTrajectory& traj, const std::string& path);
DrierTrajectory read_binary_dump(const std::string& path);

/// CSV (t, x, eps_s, eps_l, T) for every `stride`-th time slice.
void write_trajectory_csv(const DrierTrajectory& traj, const std::string& path, int stride = 1);

} // namespace dryctl
