#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "core/md5.hpp"
#include "core/store.hpp"

using namespace core;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("core_store_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<fs::path> write_inputs(const fs::path& dir, int count, std::size_t bytes,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<fs::path> paths;
  for (int i = 0; i < count; ++i) {
    fs::path p = dir / ("input" + std::to_string(i) + ".bin");
    std::ofstream out(p, std::ios::binary);
    for (std::size_t b = 0; b < bytes; ++b) out.put(static_cast<char>(rng() & 0xff));
    paths.push_back(p);
  }
  return paths;
}

}  // namespace

TEST_CASE("encode writes the full grid plus a loadable manifest") {
  TempDir tmp;
  const CodeParams params(9, 6, 3);
  const auto inputs = write_inputs(tmp.path, params.t, 6 * 256 - 17, 1);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);

  const GroupManifest written = encode_group(inputs, params, 256, group);
  CHECK(written.objects.size() == 3);
  CHECK(written.objects[0].length == 6 * 256 - 17);
  CHECK(written.block_digests.size() == static_cast<std::size_t>(params.cells()));

  for (int r = 0; r < params.rows(); ++r)
    for (int c = 0; c < params.n; ++c) {
      CHECK(fs::exists(block_path(group, r, c)));
      CHECK(fs::file_size(block_path(group, r, c)) == 256);
    }

  const GroupManifest loaded = load_manifest(group);
  CHECK(loaded.params.n == 9);
  CHECK(loaded.params.k == 6);
  CHECK(loaded.params.t == 3);
  CHECK(loaded.block_size == 256);
  CHECK(loaded.block_digests == written.block_digests);
  CHECK(loaded.objects[2].file_md5 == written.objects[2].file_md5);

  CHECK(scan(group).total_failures() == 0);
  CHECK(verify(group).ok);
}

TEST_CASE("scan flags missing, truncated and corrupted blocks") {
  TempDir tmp;
  const CodeParams params(9, 6, 3);
  const auto inputs = write_inputs(tmp.path, params.t, 6 * 128, 2);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  encode_group(inputs, params, 128, group);

  fs::remove(block_path(group, 0, 0));                       // missing
  fs::resize_file(block_path(group, 1, 3), 60);              // truncated
  {
    std::fstream f(block_path(group, 2, 7),
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(5);
    f.put('\x5a');
    f.put('\xa5');
  }                                                          // silent corruption

  const FailureMatrix mask = scan(group);
  CHECK(mask.total_failures() == 3);
  CHECK(mask.failed(0, 0));
  CHECK(mask.failed(1, 3));
  CHECK(mask.failed(2, 7));
  CHECK(!verify(group).ok);
}

TEST_CASE("corrupt patterns delete the expected cells") {
  TempDir tmp;
  const CodeParams params(14, 12, 5);
  const auto inputs = write_inputs(tmp.path, params.t, 12 * 64, 3);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  encode_group(inputs, params, 64, group);

  SUBCASE("step") {
    CorruptPattern p;
    p.kind = CorruptPattern::Kind::Step;
    p.row = 2;
    p.col = 0;
    corrupt(group, p);
    CHECK(scan(group).to_pattern_string() == "6x14;2,0;3,0;3,1");
  }

  SUBCASE("plus") {
    CorruptPattern p;
    p.kind = CorruptPattern::Kind::Plus;
    p.row = 1;
    p.col = 0;
    corrupt(group, p);
    CHECK(scan(group).to_pattern_string() == "6x14;1,1;2,0;2,1;2,2;3,1");
  }

  SUBCASE("random is seeded and distinct") {
    CorruptPattern p;
    p.kind = CorruptPattern::Kind::Random;
    p.count = 6;
    p.seed = 99;
    const auto cells = corrupt(group, p);
    CHECK(cells.size() == 6);
    CHECK(scan(group).total_failures() == 6);
  }

  SUBCASE("pattern file") {
    const fs::path pattern_file = tmp.path / "mask.txt";
    std::ofstream(pattern_file) << "6x14;0,5;4,9\n";
    CorruptPattern p;
    p.kind = CorruptPattern::Kind::File;
    p.file = pattern_file;
    corrupt(group, p);
    CHECK(scan(group).to_pattern_string() == "6x14;0,5;4,9");
  }
}

TEST_CASE("repair restores every corruption pattern with every scheduler") {
  for (auto scheduler :
       {SchedulerKind::RowFirst, SchedulerKind::ColumnFirst, SchedulerKind::Rgs}) {
    for (const std::string pattern : {"6x14;2,0;3,0;3,1", "6x14;1,1;2,0;2,1;2,2;3,1",
                                      "6x14;0,13", "6x14;5,2;5,3"}) {
      TempDir tmp;
      const CodeParams params(14, 12, 5);
      const auto inputs = write_inputs(tmp.path, params.t, 12 * 64 - 5, 4);
      const fs::path group = tmp.path / "group";
      fs::create_directories(group);
      encode_group(inputs, params, 64, group);

      const fs::path pattern_file = tmp.path / "mask.txt";
      std::ofstream(pattern_file) << pattern << "\n";
      CorruptPattern p;
      p.kind = CorruptPattern::Kind::File;
      p.file = pattern_file;
      corrupt(group, p);

      const RepairReport report = repair(group, scheduler);
      CHECK(report.complete);
      CHECK(report.residual.empty());
      CHECK(report.blocks_read > 0);
      CHECK(scan(group).total_failures() == 0);
      CHECK(verify(group).ok);
    }
  }
}

TEST_CASE("repair traffic matches the planner") {
  TempDir tmp;
  const CodeParams params(14, 12, 5);
  const auto inputs = write_inputs(tmp.path, params.t, 12 * 32, 5);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  encode_group(inputs, params, 32, group);

  CorruptPattern p;
  p.kind = CorruptPattern::Kind::Step;
  p.row = 2;
  p.col = 0;
  corrupt(group, p);

  const auto planned =
      schedule_rgs(FailureMatrix::from_pattern_string("6x14;2,0;3,0;3,1", params));
  const RepairReport report = repair(group, SchedulerKind::Rgs);
  CHECK(report.blocks_read == planned.total_blocks_read);
  CHECK(report.blocks_read == 17);
  CHECK(report.bytes_transferred == 17ull * 32);
}

TEST_CASE("repair on a clean group is a no-op") {
  TempDir tmp;
  const CodeParams params(9, 6, 3);
  const auto inputs = write_inputs(tmp.path, params.t, 6 * 32, 6);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  encode_group(inputs, params, 32, group);

  const RepairReport report = repair(group, SchedulerKind::Rgs);
  CHECK(report.complete);
  CHECK(report.blocks_read == 0);
  CHECK(report.actions == 0);
}

TEST_CASE("irrecoverable damage reports a residual but repairs the rest") {
  TempDir tmp;
  const CodeParams params(9, 6, 3);
  const auto inputs = write_inputs(tmp.path, params.t, 6 * 32, 7);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  encode_group(inputs, params, 32, group);

  // two rows with the same m+1=4 failed columns: irrecoverable cluster;
  // plus one independent repairable failure elsewhere
  const fs::path pattern_file = tmp.path / "mask.txt";
  std::ofstream(pattern_file) << "4x9;0,0;0,1;0,2;0,3;2,0;2,1;2,2;2,3;1,8\n";
  CorruptPattern p;
  p.kind = CorruptPattern::Kind::File;
  p.file = pattern_file;
  corrupt(group, p);

  const RepairReport report = repair(group, SchedulerKind::Rgs);
  CHECK(!report.complete);
  CHECK(report.residual.size() == 8);
  const FailureMatrix after = scan(group);
  CHECK(after.total_failures() == 8);
  CHECK(!after.failed(1, 8));  // the independent cluster was repaired
}

TEST_CASE("verify reassembles objects against their recorded digests") {
  TempDir tmp;
  const CodeParams params(9, 6, 3);
  const auto inputs = write_inputs(tmp.path, params.t, 6 * 64 - 9, 8);
  const fs::path group = tmp.path / "group";
  fs::create_directories(group);
  const GroupManifest manifest = encode_group(inputs, params, 64, group);

  // the recorded object digest matches the original file bytes
  std::ifstream in(inputs[1], std::ios::binary);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  CHECK(manifest.objects[1].file_md5 == md5_hex(bytes));
  CHECK(verify(group).ok);
}

TEST_CASE("manifest rejects malformed input") {
  TempDir tmp;
  std::ofstream(tmp.path / "MANIFEST.core") << "not a manifest\n";
  CHECK_THROWS(load_manifest(tmp.path));
  CHECK_THROWS(load_manifest(tmp.path / "missing_dir"));
}
