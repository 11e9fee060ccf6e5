#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/failure_matrix.hpp"
#include "core/params.hpp"
#include "core/scheduler.hpp"

namespace core {

// One encoded input file of a group.
struct ObjectEntry {
  int id = 0;
  std::string filename;
  std::uint64_t length = 0;  // original byte length, pre-padding
  std::string file_md5;      // digest of the original bytes
};

// MANIFEST.core: line-oriented UTF-8 key-value file, fixed field order.
struct GroupManifest {
  int format_version = 1;
  CodeParams params;
  std::uint64_t block_size = 0;
  std::string created;
  std::vector<ObjectEntry> objects;        // exactly t entries
  std::vector<std::string> block_digests;  // (t+1)*n hex digests, row-major

  const std::string& digest(int row, int col) const {
    return block_digests[row * params.n + col];
  }
};

std::filesystem::path block_path(const std::filesystem::path& dir, int row, int col);

GroupManifest load_manifest(const std::filesystem::path& dir);
void save_manifest(const GroupManifest& manifest, const std::filesystem::path& dir);

// Encodes t input files into the (t+1) x n block grid on disk plus manifest.
// Inputs are zero-padded to k blocks; original lengths are recorded.
GroupManifest encode_group(const std::vector<std::filesystem::path>& inputs,
                           const CodeParams& params, std::uint64_t block_size,
                           const std::filesystem::path& dir);

struct CorruptPattern {
  enum class Kind { Single, RowPair, Step, Plus, Random, File };
  Kind kind = Kind::Single;
  int row = 0;
  int col = 0;
  std::vector<int> cols;       // RowPair
  int count = 0;               // Random
  std::uint64_t seed = 0;      // Random
  std::filesystem::path file;  // File (pattern string per FailureMatrix)
};

// Deletes the named block files; already-missing cells are warnings, not
// errors. Returns the injected (row,col) cells.
std::vector<std::pair<int, int>> corrupt(const std::filesystem::path& dir,
                                         const CorruptPattern& pattern);

// Cell failed iff the block file is missing or its digest mismatches.
FailureMatrix scan(const std::filesystem::path& dir);

struct RepairReport {
  long long blocks_read = 0;
  int actions = 0;
  std::uint64_t bytes_transferred = 0;
  bool complete = true;
  std::vector<std::pair<int, int>> residual;  // unrepaired cells, if any
};

// Clusters the scanned mask, schedules per recoverable cluster, executes
// with the codec, rewrites the repaired files. Irrecoverable clusters are
// left in `residual` (partial recovery still happens).
RepairReport repair(const std::filesystem::path& dir, SchedulerKind scheduler);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// Recomputes every block digest plus each reassembled object digest.
VerifyResult verify(const std::filesystem::path& dir);

}  // namespace core
