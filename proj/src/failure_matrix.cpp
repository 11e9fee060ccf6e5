#include "core/failure_matrix.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace core {

int FailureMatrix::row_failures(int row) const {
  int count = 0;
  for (int c = 0; c < params_.n; ++c) count += failed_[row * params_.n + c];
  return count;
}

int FailureMatrix::col_failures(int col) const {
  int count = 0;
  for (int r = 0; r < params_.rows(); ++r) count += failed_[r * params_.n + col];
  return count;
}

int FailureMatrix::total_failures() const {
  return std::accumulate(failed_.begin(), failed_.end(), 0);
}

std::vector<std::pair<int, int>> FailureMatrix::failed_cells() const {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < params_.rows(); ++r)
    for (int c = 0; c < params_.n; ++c)
      if (failed(r, c)) cells.emplace_back(r, c);
  return cells;
}

std::string FailureMatrix::to_pattern_string() const {
  std::ostringstream out;
  out << params_.rows() << 'x' << params_.n;
  for (const auto& [r, c] : failed_cells()) out << ';' << r << ',' << c;
  return out.str();
}

FailureMatrix FailureMatrix::from_pattern_string(const std::string& text,
                                                 const CodeParams& params) {
  std::istringstream in(text);
  int rows = 0, cols = 0;
  char sep = 0;
  if (!(in >> rows >> sep >> cols) || sep != 'x')
    throw std::invalid_argument("pattern: expected '<rows>x<cols>' header");
  if (rows != params.rows() || cols != params.n)
    throw std::invalid_argument("pattern: dimensions do not match code params");
  FailureMatrix fm(params);
  while (in >> sep) {
    if (sep != ';') throw std::invalid_argument("pattern: expected ';'");
    int r = 0, c = 0;
    char comma = 0;
    if (!(in >> r >> comma >> c) || comma != ',')
      throw std::invalid_argument("pattern: expected '<row>,<col>'");
    fm.mark_failed(r, c);
  }
  return fm;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

std::vector<Cluster> find_clusters(const FailureMatrix& fm) {
  const auto cells = fm.failed_cells();
  UnionFind uf(static_cast<int>(cells.size()));
  std::vector<int> row_rep(fm.params().rows(), -1);
  std::vector<int> col_rep(fm.params().n, -1);
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    const auto [r, c] = cells[i];
    if (row_rep[r] < 0)
      row_rep[r] = i;
    else
      uf.unite(i, row_rep[r]);
    if (col_rep[c] < 0)
      col_rep[c] = i;
    else
      uf.unite(i, col_rep[c]);
  }

  std::vector<Cluster> clusters;
  std::vector<int> root_to_cluster(cells.size(), -1);
  for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
    const int root = uf.find(i);
    if (root_to_cluster[root] < 0) {
      root_to_cluster[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    Cluster& cl = clusters[root_to_cluster[root]];
    cl.cells.push_back(cells[i]);
    cl.rows.insert(cells[i].first);
    cl.cols.insert(cells[i].second);
  }
  return clusters;
}

RepairBounds bounds(const CodeParams& params) {
  params.validate();  // includes the 2k >= n guard
  return RepairBounds{2 * (params.m() + 1),
                      params.t * params.m() + (2 * params.k - params.n)};
}

RecoverabilityResult check_recoverable(const FailureMatrix& fm) {
  FailureMatrix mask = fm;
  const int rows = mask.params().rows();
  const int n = mask.params().n;
  const int m = mask.params().m();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < n; ++c) {
      if (mask.col_failures(c) == 1) {
        for (int r = 0; r < rows; ++r)
          if (mask.failed(r, c)) mask.mark_repaired(r, c);
        changed = true;
      }
    }
    for (int r = 0; r < rows; ++r) {
      const int f = mask.row_failures(r);
      if (f >= 1 && f <= m) {
        for (int c = 0; c < n; ++c)
          if (mask.failed(r, c)) mask.mark_repaired(r, c);
        changed = true;
      }
    }
  }
  return RecoverabilityResult{mask.empty(), std::move(mask)};
}

}  // namespace core
