// core: command-line front end for the CORE (n,k,t) product-code toolkit.
//
// Exit codes: 0 ok, 1 user error, 2 irrecoverable data, 3 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "core/analytics.hpp"
#include "core/failure_matrix.hpp"
#include "core/params.hpp"
#include "core/report.hpp"
#include "core/scheduler.hpp"
#include "core/simulate.hpp"
#include "core/store.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20140401;  // fixed for reproducibility

struct CommonOpts {
  int n = 14;
  int k = 12;
  int t = 5;
  int q = 8;
  double p = 0.01;
  long long iters = 100000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  std::string out;
  std::string code = "core";
};

std::ostream& open_out(const std::string& out, std::unique_ptr<std::ofstream>& file) {
  if (out.empty()) return std::cout;
  file = std::make_unique<std::ofstream>(out);
  if (!*file) throw std::runtime_error("cannot open output file " + out);
  return *file;
}

core::SchedulerKind parse_scheduler(const std::string& name) {
  if (name == "row-first") return core::SchedulerKind::RowFirst;
  if (name == "column-first") return core::SchedulerKind::ColumnFirst;
  if (name == "rgs") return core::SchedulerKind::Rgs;
  throw std::invalid_argument("--scheduler must be row-first, column-first or rgs");
}

core::CodeModel parse_model(const std::string& code, int n, int k, int t) {
  core::CodeModel model;
  if (code == "rs")
    model.kind = core::CodeModel::Kind::RS;
  else if (code == "lrc")
    model.kind = core::CodeModel::Kind::LRC;
  else if (code == "core")
    model.kind = core::CodeModel::Kind::CORE;
  else
    throw std::invalid_argument("--code must be rs, lrc or core");
  model.n = n;
  model.k = k;
  model.t = model.kind == core::CodeModel::Kind::CORE ? t : 0;
  model.validate();
  return model;
}

core::FailureMatrix load_pattern(const std::string& pattern_file,
                                 const core::CodeParams& params) {
  std::ifstream in(pattern_file);
  if (!in) throw std::runtime_error("cannot read pattern file " + pattern_file);
  std::string text;
  std::getline(in, text);
  return core::FailureMatrix::from_pattern_string(text, params);
}

// "1:20" or "6" -> [lo, hi]
std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CORE (n,k,t) product erasure code toolkit"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::string dir, scheduler = "rgs", pattern, pattern_file, block_size = "1048576";
  std::vector<std::string> files;
  std::string mode = "centralized", metric = "traffic", grid;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--n", opt.n, "codeword length in blocks");
    cmd->add_option("--k", opt.k, "data blocks per object");
    cmd->add_option("--t", opt.t, "objects per group");
    cmd->add_option("--q", opt.q, "symbol width in bits (must be 8)");
  };
  auto add_mc = [&](CLI::App* cmd) {
    cmd->add_option("--p", opt.p, "block unavailability probability");
    cmd->add_option("--iters", opt.iters, "Monte Carlo iterations");
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--workers", opt.workers, "worker threads");
    cmd->add_option("--out", opt.out, "CSV output file (default stdout)");
  };

  // --- store commands ---
  auto* cmd_encode = app.add_subcommand("encode", "encode t files into a CORE group");
  add_params(cmd_encode);
  cmd_encode->add_option("--dir", dir, "group directory")->required();
  cmd_encode->add_option("--block-size", block_size, "block size in bytes");
  cmd_encode->add_option("files", files, "exactly t input files")->required();

  auto* cmd_corrupt = app.add_subcommand("corrupt", "delete block files of a group");
  cmd_corrupt->add_option("--dir", dir, "group directory")->required();
  cmd_corrupt->add_option("--pattern", pattern,
                          "single:R,C | row-pair:R:C1,C2 | step | plus | random:COUNT");
  cmd_corrupt->add_option("--pattern-file", pattern_file, "pattern file");
  cmd_corrupt->add_option("--seed", opt.seed, "seed for random pattern");

  auto* cmd_scan = app.add_subcommand("scan", "report the failure matrix of a group");
  cmd_scan->add_option("--dir", dir, "group directory")->required();

  auto* cmd_repair = app.add_subcommand("repair", "repair a group in place");
  cmd_repair->add_option("--dir", dir, "group directory")->required();
  cmd_repair->add_option("--scheduler", scheduler, "row-first | column-first | rgs");

  auto* cmd_verify = app.add_subcommand("verify", "verify all digests of a group");
  cmd_verify->add_option("--dir", dir, "group directory")->required();

  // --- pattern analysis ---
  auto* cmd_check =
      app.add_subcommand("check", "bounds, clusters and recoverability of a pattern");
  add_params(cmd_check);
  cmd_check->add_option("--pattern-file", pattern_file, "pattern file")->required();

  // --- closed forms ---
  auto* cmd_analyze = app.add_subcommand("analyze", "closed-form analytics");
  auto* an_res = cmd_analyze->add_subcommand("resilience", "static resilience");
  add_params(an_res);
  an_res->add_option("--code", opt.code, "rs | lrc | core");
  an_res->add_option("--p", opt.p, "block unavailability probability");
  an_res->add_option("--out", opt.out, "CSV output file");
  auto* an_lrc = cmd_analyze->add_subcommand("lrc-cost", "LRC average single-repair cost");
  add_params(an_lrc);
  an_lrc->add_option("--out", opt.out, "CSV output file");
  double pi_value = 0.0;
  auto* an_nines = cmd_analyze->add_subcommand("nines", "nines of a probability");
  an_nines->add_option("--pi", pi_value, "probability")->required();

  // --- Monte Carlo ---
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  std::string failures = "1";
  auto* sim_repair = cmd_sim->add_subcommand("repair", "repair traffic and time");
  add_params(sim_repair);
  sim_repair->add_option("--code", opt.code, "rs | lrc | core");
  add_mc(sim_repair);
  auto* sim_read = cmd_sim->add_subcommand("degraded-read", "degraded read traffic");
  add_params(sim_read);
  sim_read->add_option("--code", opt.code, "rs | lrc | core");
  sim_read->add_option("--mode", mode, "centralized | distributed");
  add_mc(sim_read);
  auto* sim_clusters = cmd_sim->add_subcommand("clusters", "mean cluster counts");
  add_params(sim_clusters);
  sim_clusters->add_option("--failures", failures, "failure count or range lo:hi");
  add_mc(sim_clusters);
  auto* sim_rec = cmd_sim->add_subcommand("recoverability", "recoverability likelihood");
  add_params(sim_rec);
  sim_rec->add_option("--failures", failures, "failure count or range lo:hi");
  add_mc(sim_rec);
  auto* sim_sched = cmd_sim->add_subcommand("schedulers", "mean scheduler costs");
  add_params(sim_sched);
  sim_sched->add_option("--failures", failures, "failure count or range lo:hi");
  add_mc(sim_sched);

  // --- stretch sweep ---
  auto* cmd_sweep = app.add_subcommand("sweep", "min metric per stretch factor");
  cmd_sweep->add_option("--metric", metric, "traffic | time | read");
  cmd_sweep->add_option("--grid", grid, "configs 'code:n,k[,t];code:n,k[,t];...'")
      ->required();
  add_mc(cmd_sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    std::unique_ptr<std::ofstream> out_file;

    if (cmd_encode->parsed()) {
      const core::CodeParams params(opt.n, opt.k, opt.t, opt.q);
      if (static_cast<int>(files.size()) != opt.t) {
        std::cerr << "encode: expected exactly t=" << opt.t << " files\n";
        return 1;
      }
      std::vector<std::filesystem::path> inputs(files.begin(), files.end());
      const auto manifest =
          core::encode_group(inputs, params, std::stoull(block_size), dir);
      std::cerr << "encoded " << manifest.objects.size() << " objects into "
                << params.rows() * params.n << " blocks under " << dir << "\n";
      return 0;
    }

    if (cmd_corrupt->parsed()) {
      core::CorruptPattern cp;
      if (!pattern_file.empty()) {
        cp.kind = core::CorruptPattern::Kind::File;
        cp.file = pattern_file;
      } else if (pattern == "step") {
        cp.kind = core::CorruptPattern::Kind::Step;
      } else if (pattern == "plus") {
        cp.kind = core::CorruptPattern::Kind::Plus;
      } else if (pattern.rfind("single:", 0) == 0) {
        cp.kind = core::CorruptPattern::Kind::Single;
        if (std::sscanf(pattern.c_str(), "single:%d,%d", &cp.row, &cp.col) != 2) {
          std::cerr << "corrupt: bad single pattern\n";
          return 1;
        }
      } else if (pattern.rfind("row-pair:", 0) == 0) {
        cp.kind = core::CorruptPattern::Kind::RowPair;
        int c1 = 0, c2 = 0;
        if (std::sscanf(pattern.c_str(), "row-pair:%d:%d,%d", &cp.row, &c1, &c2) != 3) {
          std::cerr << "corrupt: bad row-pair pattern\n";
          return 1;
        }
        cp.cols = {c1, c2};
      } else if (pattern.rfind("random:", 0) == 0) {
        cp.kind = core::CorruptPattern::Kind::Random;
        if (std::sscanf(pattern.c_str(), "random:%d", &cp.count) != 1) {
          std::cerr << "corrupt: bad random pattern\n";
          return 1;
        }
        cp.seed = opt.seed;
      } else {
        std::cerr << "corrupt: need --pattern or --pattern-file\n";
        return 1;
      }
      const auto cells = core::corrupt(dir, cp);
      std::cerr << "corrupted " << cells.size() << " cells:";
      for (const auto& [r, c] : cells) std::cerr << " (" << r << ',' << c << ')';
      std::cerr << '\n';
      return 0;
    }

    if (cmd_scan->parsed()) {
      const core::FailureMatrix fm = core::scan(dir);
      std::cout << fm.to_pattern_string() << '\n';
      std::cerr << fm.total_failures() << " failed blocks\n";
      return 0;
    }

    if (cmd_repair->parsed()) {
      const core::RepairReport report = core::repair(dir, parse_scheduler(scheduler));
      std::cerr << "repair: blocks_read=" << report.blocks_read
                << " actions=" << report.actions
                << " bytes_transferred=" << report.bytes_transferred << '\n';
      if (!report.complete) {
        std::cerr << "repair: irrecoverable residual cells:";
        for (const auto& [r, c] : report.residual)
          std::cerr << " (" << r << ',' << c << ')';
        std::cerr << '\n';
        return 2;
      }
      return 0;
    }

    if (cmd_verify->parsed()) {
      const core::VerifyResult result = core::verify(dir);
      if (result.ok) {
        std::cerr << "verify: ok\n";
        return 0;
      }
      for (const std::string& m : result.mismatches) std::cerr << "verify: " << m << '\n';
      return 2;
    }

    if (cmd_check->parsed()) {
      const core::CodeParams params(opt.n, opt.k, opt.t, opt.q);
      const core::FailureMatrix fm = load_pattern(pattern_file, params);
      const core::RepairBounds b = core::bounds(params);
      const auto clusters = core::find_clusters(fm);
      const auto result = core::check_recoverable(fm);
      std::cout << "failures " << fm.total_failures() << '\n'
                << "bounds L=" << b.irrecoverable_lower
                << " U=" << b.recoverable_upper << '\n'
                << "clusters " << clusters.size() << '\n'
                << "recoverable " << (result.recoverable ? "yes" : "no") << '\n';
      if (!result.recoverable)
        std::cout << "residual " << result.residual.to_pattern_string() << '\n';
      else
        for (auto kind : {core::SchedulerKind::RowFirst, core::SchedulerKind::ColumnFirst,
                          core::SchedulerKind::Rgs}) {
          const auto s = core::make_schedule(kind, fm);
          const char* name = kind == core::SchedulerKind::RowFirst ? "row-first"
                             : kind == core::SchedulerKind::ColumnFirst
                                 ? "column-first"
                                 : "rgs";
          std::cout << "schedule " << name << " blocks_read=" << s.total_blocks_read
                    << " time=" << s.normalized_time.str() << '\n';
        }
      return result.recoverable ? 0 : 2;
    }

    if (an_res->parsed()) {
      const core::CodeModel model = parse_model(opt.code, opt.n, opt.k, opt.t);
      double pi = 0.0;
      switch (model.kind) {
        case core::CodeModel::Kind::RS: pi = core::resilience_mds(opt.n, opt.k, opt.p); break;
        case core::CodeModel::Kind::LRC: pi = core::resilience_lrc(opt.n, opt.k, opt.p); break;
        case core::CodeModel::Kind::CORE:
          pi = core::resilience_core_lb(opt.n, opt.k, opt.t, opt.p);
          break;
      }
      core::ExperimentReport report;
      report.rows.push_back({model.name(), opt.n, opt.k,
                             model.kind == core::CodeModel::Kind::CORE ? opt.t : 0,
                             opt.p, "resilience", pi, 0.0, 0});
      report.rows.push_back({model.name(), opt.n, opt.k,
                             model.kind == core::CodeModel::Kind::CORE ? opt.t : 0,
                             opt.p, "nines", core::nines(pi), 0.0, 0});
      report.write_csv(open_out(opt.out, out_file));
      return 0;
    }

    if (an_lrc->parsed()) {
      core::ExperimentReport report;
      report.rows.push_back({"lrc", opt.n, opt.k, 0, 0.0, "avg_single_repair",
                             core::lrc_avg_single_repair(opt.n, opt.k), 0.0, 0});
      report.write_csv(open_out(opt.out, out_file));
      return 0;
    }

    if (an_nines->parsed()) {
      std::cout << core::nines(pi_value) << '\n';
      return 0;
    }

    if (sim_repair->parsed()) {
      const core::CodeModel model = parse_model(opt.code, opt.n, opt.k, opt.t);
      const auto report =
          core::simulate_repair(model, opt.p, opt.iters, opt.seed, opt.workers);
      report.write_csv(open_out(opt.out, out_file));
      std::cerr << "rejected " << report.rejected << " of " << opt.iters
                << " samples\n";
      return 0;
    }

    if (sim_read->parsed()) {
      const core::CodeModel model = parse_model(opt.code, opt.n, opt.k, opt.t);
      const core::ReadMode rm = mode == "distributed" ? core::ReadMode::Distributed
                                                      : core::ReadMode::Centralized;
      const auto report = core::simulate_degraded_read(model, rm, opt.p, opt.iters,
                                                       opt.seed, opt.workers);
      report.write_csv(open_out(opt.out, out_file));
      std::cerr << "rejected " << report.rejected << " of " << opt.iters
                << " samples\n";
      return 0;
    }

    if (sim_clusters->parsed() || sim_rec->parsed() || sim_sched->parsed()) {
      const core::CodeParams params(opt.n, opt.k, opt.t, opt.q);
      const auto [lo, hi] = parse_range(failures);
      std::ostream& out = open_out(opt.out, out_file);
      bool header = true;
      for (int f = lo; f <= hi; ++f) {
        if (sim_clusters->parsed()) {
          core::cluster_count_experiment(params, f, opt.iters, opt.seed, opt.workers)
              .write_csv(out, header);
        } else if (sim_rec->parsed()) {
          core::recoverability_experiment(params, f, opt.iters, opt.seed, opt.workers)
              .write_csv(out, header);
        } else {
          // mean blocks read per scheduler over random recoverable patterns
          core::ExperimentReport report;
          report.seed = opt.seed;
          std::uint64_t state = opt.seed + static_cast<std::uint64_t>(f);
          auto next = [&state] {
            std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
          };
          core::Accumulator rf, cf, rgs;
          std::vector<int> pool(params.cells());
          for (long long it = 0; it < opt.iters; ++it) {
            core::FailureMatrix fm(params);
            do {
              for (int i = 0; i < params.cells(); ++i) pool[i] = i;
              fm = core::FailureMatrix(params);
              for (int i = 0; i < f; ++i) {
                const int j =
                    i + static_cast<int>(next() % static_cast<unsigned>(params.cells() - i));
                std::swap(pool[i], pool[j]);
                fm.mark_failed(pool[i] / params.n, pool[i] % params.n);
              }
            } while (!core::is_recoverable(fm));
            rf.add(static_cast<double>(core::schedule_row_first(fm).total_blocks_read));
            cf.add(static_cast<double>(core::schedule_column_first(fm).total_blocks_read));
            rgs.add(static_cast<double>(core::schedule_rgs(fm).total_blocks_read));
          }
          const std::string suffix = "_f" + std::to_string(f);
          report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                                 "cost_row_first" + suffix, rf.mean(), rf.variance(),
                                 rf.count});
          report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                                 "cost_column_first" + suffix, cf.mean(), cf.variance(),
                                 cf.count});
          report.rows.push_back({"core", params.n, params.k, params.t, 0.0,
                                 "cost_rgs" + suffix, rgs.mean(), rgs.variance(),
                                 rgs.count});
          report.write_csv(out, header);
        }
        header = false;
      }
      return 0;
    }

    if (cmd_sweep->parsed()) {
      // grid: "code:n,k[,t];code:n,k[,t];..."
      std::vector<core::CodeModel> models;
      std::stringstream gs(grid);
      std::string item;
      while (std::getline(gs, item, ';')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
          throw std::runtime_error("sweep: grid entries look like code:n,k[,t]");
        const std::string code = item.substr(0, colon);
        int n = 0, k = 0, t = 0;
        const int got =
            std::sscanf(item.c_str() + colon + 1, "%d,%d,%d", &n, &k, &t);
        if (got < 2) throw std::runtime_error("sweep: bad grid entry " + item);
        models.push_back(parse_model(code, n, k, t));
      }
      const core::SweepMetric sm = metric == "time" ? core::SweepMetric::Time
                                   : metric == "read" ? core::SweepMetric::Read
                                                      : core::SweepMetric::Traffic;
      const auto report =
          core::sweep_stretch(models, opt.p, sm, opt.iters, opt.seed, opt.workers);
      report.write_csv(open_out(opt.out, out_file));
      return 0;
    }

    std::cerr << "no subcommand handled\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const core::UnrecoverableRow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
