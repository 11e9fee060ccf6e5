#include "core/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "core/grid.hpp"
#include "core/md5.hpp"
#include "core/rs.hpp"

namespace fs = std::filesystem;

namespace core {
namespace {

constexpr const char* kManifestName = "MANIFEST.core";
constexpr const char* kLockName = ".core.lock";

// Single-writer advisory lock on the group directory.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / kLockName) {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw std::runtime_error("store: group is locked by another writer: " +
                               path_.string());
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("store: cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("store: cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("store: short write to " + path.string());
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Block read_block(const fs::path& dir, const GroupManifest& m, int row, int col) {
  Block b = read_file(block_path(dir, row, col));
  if (b.size() != m.block_size)
    throw std::runtime_error("store: unexpected block size at r" +
                             std::to_string(row) + " c" + std::to_string(col));
  return b;
}

}  // namespace

fs::path block_path(const fs::path& dir, int row, int col) {
  std::ostringstream name;
  name << "g0_r" << row << "_c" << col << ".blk";
  return dir / name.str();
}

void save_manifest(const GroupManifest& m, const fs::path& dir) {
  std::ostringstream out;
  out << "format_version " << m.format_version << '\n';
  out << "n " << m.params.n << '\n';
  out << "k " << m.params.k << '\n';
  out << "t " << m.params.t << '\n';
  out << "q " << m.params.q << '\n';
  out << "block_size " << m.block_size << '\n';
  out << "created " << m.created << '\n';
  for (const ObjectEntry& o : m.objects)
    out << "object " << o.id << ' ' << o.length << ' ' << o.file_md5 << ' '
        << o.filename << '\n';
  for (int r = 0; r < m.params.rows(); ++r)
    for (int c = 0; c < m.params.n; ++c)
      out << "block " << r << ' ' << c << ' ' << m.digest(r, c) << '\n';
  const std::string text = out.str();
  write_file(dir / kManifestName,
             {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

GroupManifest load_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in)
    throw std::runtime_error("store: missing manifest in " + dir.string());
  GroupManifest m;
  int n = 0, k = 0, t = 0, q = 8;
  std::string line;
  std::vector<std::tuple<int, int, std::string>> blocks;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "format_version")
      ls >> m.format_version;
    else if (key == "n")
      ls >> n;
    else if (key == "k")
      ls >> k;
    else if (key == "t")
      ls >> t;
    else if (key == "q")
      ls >> q;
    else if (key == "block_size")
      ls >> m.block_size;
    else if (key == "created")
      ls >> m.created;
    else if (key == "object") {
      ObjectEntry o;
      ls >> o.id >> o.length >> o.file_md5;
      std::getline(ls, o.filename);
      if (!o.filename.empty() && o.filename.front() == ' ')
        o.filename.erase(0, 1);
      m.objects.push_back(std::move(o));
    } else if (key == "block") {
      int r = 0, c = 0;
      std::string digest;
      ls >> r >> c >> digest;
      blocks.emplace_back(r, c, std::move(digest));
    } else {
      throw std::runtime_error("store: unknown manifest key '" + key + "'");
    }
    if (!ls && key != "created" && key != "object")
      throw std::runtime_error("store: malformed manifest line: " + line);
  }
  m.params = CodeParams(n, k, t, q);
  if (static_cast<int>(m.objects.size()) != t)
    throw std::runtime_error("store: manifest must list exactly t objects");
  m.block_digests.assign(static_cast<std::size_t>(m.params.cells()), {});
  for (auto& [r, c, digest] : blocks) {
    if (r < 0 || r >= m.params.rows() || c < 0 || c >= m.params.n)
      throw std::runtime_error("store: block entry out of range");
    m.block_digests[r * m.params.n + c] = std::move(digest);
  }
  for (const std::string& d : m.block_digests)
    if (d.empty()) throw std::runtime_error("store: manifest missing block digests");
  return m;
}

GroupManifest encode_group(const std::vector<fs::path>& inputs,
                           const CodeParams& params, std::uint64_t block_size,
                           const fs::path& dir) {
  params.validate();
  if (static_cast<int>(inputs.size()) != params.t)
    throw std::invalid_argument("encode_group: expected exactly t input files");
  if (block_size == 0) throw std::invalid_argument("encode_group: zero block size");
  fs::create_directories(dir);
  DirLock lock(dir);

  GroupManifest manifest;
  manifest.params = params;
  manifest.block_size = block_size;
  manifest.created = now_iso8601();

  std::vector<std::vector<Block>> objects;
  for (int i = 0; i < params.t; ++i) {
    std::vector<std::uint8_t> bytes = read_file(inputs[i]);
    const std::uint64_t capacity = static_cast<std::uint64_t>(params.k) * block_size;
    if (bytes.size() > capacity)
      throw std::runtime_error("encode_group: " + inputs[i].string() +
                               " exceeds k*block_size");
    ObjectEntry entry;
    entry.id = i;
    entry.filename = inputs[i].filename().string();
    entry.length = bytes.size();
    entry.file_md5 = md5_hex(bytes);
    manifest.objects.push_back(std::move(entry));

    bytes.resize(capacity, 0);  // zero-pad to k blocks
    std::vector<Block> blocks(params.k);
    for (int b = 0; b < params.k; ++b)
      blocks[b].assign(bytes.begin() + static_cast<std::ptrdiff_t>(b) * block_size,
                       bytes.begin() + static_cast<std::ptrdiff_t>(b + 1) * block_size);
    objects.push_back(std::move(blocks));
  }

  const BlockGrid grid = core_encode(objects, params);
  manifest.block_digests.resize(static_cast<std::size_t>(params.cells()));
  for (int r = 0; r < params.rows(); ++r)
    for (int c = 0; c < params.n; ++c) {
      write_file(block_path(dir, r, c), grid.at(r, c));
      manifest.block_digests[r * params.n + c] = md5_hex(grid.at(r, c));
    }
  save_manifest(manifest, dir);
  return manifest;
}

std::vector<std::pair<int, int>> corrupt(const fs::path& dir,
                                         const CorruptPattern& pattern) {
  const GroupManifest m = load_manifest(dir);
  const CodeParams& p = m.params;

  std::vector<std::pair<int, int>> cells;
  switch (pattern.kind) {
    case CorruptPattern::Kind::Single:
      cells.emplace_back(pattern.row, pattern.col);
      break;
    case CorruptPattern::Kind::RowPair:
      for (int c : pattern.cols) cells.emplace_back(pattern.row, c);
      break;
    case CorruptPattern::Kind::Step:
      // (row, col) is the top-left anchor of the canonical 3-failure step
      if (pattern.row + 1 >= p.rows() || pattern.col + 1 >= p.n)
        throw std::invalid_argument("corrupt: step pattern out of range");
      for (auto [dr, dc] : {std::pair{0, 0}, {1, 0}, {1, 1}})
        cells.emplace_back(pattern.row + dr, pattern.col + dc);
      break;
    case CorruptPattern::Kind::Plus:
      if (pattern.row + 2 >= p.rows() || pattern.col + 2 >= p.n)
        throw std::invalid_argument("corrupt: plus pattern out of range");
      for (auto [dr, dc] : {std::pair{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}})
        cells.emplace_back(pattern.row + dr, pattern.col + dc);
      break;
    case CorruptPattern::Kind::Random: {
      if (pattern.count < 1 || pattern.count > p.cells())
        throw std::invalid_argument("corrupt: random count out of range");
      std::vector<int> pool(p.cells());
      for (int i = 0; i < p.cells(); ++i) pool[i] = i;
      std::uint64_t state = pattern.seed;
      auto next = [&state] {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
      };
      for (int i = 0; i < pattern.count; ++i) {
        const int j = i + static_cast<int>(next() % static_cast<unsigned>(p.cells() - i));
        std::swap(pool[i], pool[j]);
        cells.emplace_back(pool[i] / p.n, pool[i] % p.n);
      }
      break;
    }
    case CorruptPattern::Kind::File: {
      std::ifstream in(pattern.file);
      if (!in)
        throw std::runtime_error("corrupt: cannot read pattern file " +
                                 pattern.file.string());
      std::string text;
      std::getline(in, text);
      cells = FailureMatrix::from_pattern_string(text, p).failed_cells();
      break;
    }
  }

  for (const auto& [r, c] : cells) {
    if (r < 0 || r >= p.rows() || c < 0 || c >= p.n)
      throw std::invalid_argument("corrupt: cell out of grid bounds");
    std::error_code ec;
    if (!fs::remove(block_path(dir, r, c), ec))
      std::cerr << "corrupt: cell (" << r << ',' << c << ") already missing\n";
  }
  return cells;
}

FailureMatrix scan(const fs::path& dir) {
  const GroupManifest m = load_manifest(dir);
  FailureMatrix fm(m.params);
  for (int r = 0; r < m.params.rows(); ++r)
    for (int c = 0; c < m.params.n; ++c) {
      const fs::path path = block_path(dir, r, c);
      std::error_code ec;
      if (!fs::exists(path, ec) || fs::file_size(path, ec) != m.block_size) {
        fm.mark_failed(r, c);
        continue;
      }
      if (md5_hex(read_file(path)) != m.digest(r, c)) fm.mark_failed(r, c);
    }
  return fm;
}

RepairReport repair(const fs::path& dir, SchedulerKind scheduler) {
  const GroupManifest m = load_manifest(dir);
  DirLock lock(dir);
  const FailureMatrix mask = scan(dir);
  RepairReport report;
  if (mask.empty()) return report;  // pristine group, nothing read

  FailureMatrix exec(m.params);  // failures still on disk during execution
  for (const auto& [r, c] : mask.failed_cells()) exec.mark_failed(r, c);

  for (const Cluster& cluster : find_clusters(mask)) {
    FailureMatrix sub(m.params);
    for (const auto& [r, c] : cluster.cells) sub.mark_failed(r, c);
    if (!is_recoverable(sub)) {
      for (const auto& cell : cluster.cells) report.residual.push_back(cell);
      report.complete = false;
      continue;
    }
    const RepairSchedule schedule = make_schedule(scheduler, sub);
    for (const RepairAction& a : schedule.actions) {
      if (a.kind == RepairAction::Kind::Vertical) {
        std::vector<Block> column;
        for (int r = 0; r < m.params.rows(); ++r) {
          if (r == a.row) continue;
          if (exec.failed(r, a.col))
            throw std::runtime_error("repair: vertical source unavailable");
          column.push_back(read_block(dir, m, r, a.col));
        }
        const Block repaired = vertical_repair(column, m.params);
        write_file(block_path(dir, a.row, a.col), repaired);
        exec.mark_repaired(a.row, a.col);
      } else {
        std::vector<std::pair<int, Block>> available;
        for (int c = 0; c < m.params.n &&
                        static_cast<int>(available.size()) < m.params.k;
             ++c)
          if (!exec.failed(a.row, c))
            available.emplace_back(c, read_block(dir, m, a.row, c));
        const std::vector<Block> data = rs_decode(available, m.params);
        const std::vector<Block> codeword = rs_encode(data, m.params);
        for (int c = 0; c < m.params.n; ++c)
          if (exec.failed(a.row, c)) {
            write_file(block_path(dir, a.row, c), codeword[c]);
            exec.mark_repaired(a.row, c);
          }
      }
      report.blocks_read += a.blocks_read;
      report.bytes_transferred +=
          static_cast<std::uint64_t>(a.blocks_read) * m.block_size;
      ++report.actions;
    }
  }
  return report;
}

VerifyResult verify(const fs::path& dir) {
  const GroupManifest m = load_manifest(dir);
  VerifyResult result;
  for (int r = 0; r < m.params.rows(); ++r)
    for (int c = 0; c < m.params.n; ++c) {
      const fs::path path = block_path(dir, r, c);
      std::error_code ec;
      if (!fs::exists(path, ec)) {
        result.mismatches.push_back("missing block r" + std::to_string(r) + " c" +
                                    std::to_string(c));
        continue;
      }
      if (md5_hex(read_file(path)) != m.digest(r, c))
        result.mismatches.push_back("digest mismatch at block r" + std::to_string(r) +
                                    " c" + std::to_string(c));
    }
  for (const ObjectEntry& o : m.objects) {
    Md5 md5;
    std::uint64_t remaining = o.length;
    bool readable = true;
    for (int b = 0; b < m.params.k && remaining > 0; ++b) {
      const fs::path path = block_path(dir, o.id, b);
      std::error_code ec;
      if (!fs::exists(path, ec)) {
        readable = false;
        break;
      }
      const Block block = read_file(path);
      const std::uint64_t take = std::min<std::uint64_t>(remaining, block.size());
      md5.update({block.data(), static_cast<std::size_t>(take)});
      remaining -= take;
    }
    if (!readable) {
      result.mismatches.push_back("object " + std::to_string(o.id) +
                                  " not reassemblable");
    } else if (md5.hex_digest() != o.file_md5) {
      result.mismatches.push_back("object " + std::to_string(o.id) +
                                  " content digest mismatch");
    }
  }
  result.ok = result.mismatches.empty();
  return result;
}

}  // namespace core
