// rolpsim: replay allocation traces through the simulated collector, emit
// reports, compare runs and generate synthetic traces.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rolp/simulator.hpp"
#include "rolp/synthetic.hpp"

namespace {

struct RunOptions {
  std::string mode = "rolp";
  std::string trace;
  std::string json_path;
  std::string csv_path;
  std::string packages;
  double young_mb = 32;
  double gen_mb = 64;
  double survivor_mb = 4;
  bool timing = false;
  bool quiet = false;
  rolp::SimConfig config;
};

uint64_t megabytes(double mb) { return static_cast<uint64_t>(mb * static_cast<double>(rolp::MiB)); }

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int do_run(RunOptions& opt) {
  rolp::SimConfig& c = opt.config;
  c.mode = rolp::parse_mode(opt.mode);
  c.heap.young_capacity = megabytes(opt.young_mb);
  c.heap.gen_capacity = megabytes(opt.gen_mb);
  c.heap.survivor_capacity = megabytes(opt.survivor_mb);
  c.policy.max_generation = c.heap.num_generations;
  c.analyzer.packages = split_csv(opt.packages);
  c.validate();

  rolp::Trace trace = rolp::read_trace_file(opt.trace);
  rolp::SimResult result = rolp::replay(trace, c);

  std::string json = rolp::to_json_text(result.metrics, opt.timing);
  if (!opt.json_path.empty()) {
    write_file(opt.json_path, json);
  }
  if (!opt.csv_path.empty()) {
    std::ostringstream csv;
    rolp::write_pause_csv(csv, result.pauses);
    write_file(opt.csv_path, csv.str());
  }
  if (!opt.quiet) rolp::write_text_report(std::cout, result.metrics);
  return 0;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allocation-trace replay for a lifetime-profiling generational collector"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Replay a trace and report pause and profiling metrics");
  run_cmd->add_option("--mode", run.mode, "baseline | rolp | oracle")
      ->check(CLI::IsMember({"baseline", "rolp", "oracle"}))
      ->capture_default_str();
  run_cmd->add_option("--trace", run.trace, "Trace file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--gens", run.config.heap.num_generations, "Older generations (G)")->capture_default_str();
  run_cmd->add_option("--young-mb", run.young_mb, "Young generation size")->capture_default_str();
  run_cmd->add_option("--gen-mb", run.gen_mb, "Size of each older generation")->capture_default_str();
  run_cmd->add_option("--survivor-mb", run.survivor_mb, "Survivor space size")->capture_default_str();
  run_cmd->add_option("--n", run.config.policy.slots, "Lifetime table age slots (N)")->capture_default_str();
  run_cmd->add_option("--inc-gen-freq,--ng2c-inc-gen-freq", run.config.policy.inc_gen_freq,
                      "Run the policy every this many collections")
      ->capture_default_str();
  run_cmd->add_option("--inc-gen-thres", run.config.policy.inc_gen_thres)->capture_default_str();
  run_cmd->add_option("--expand-ctx", run.config.policy.expand_ctx)->capture_default_str();
  run_cmd->add_flag("--allow-degenerate", run.config.policy.allow_degenerate,
                    "Accept thresholds outside 0 < expand-ctx < inc-gen-thres < 1");
  run_cmd->add_option("--max-alloc-frame", run.config.analyzer.max_alloc_frame)->capture_default_str();
  run_cmd->add_option("--hot-threshold", run.config.analyzer.hot_threshold)->capture_default_str();
  run_cmd->add_option("--packages", run.packages, "Comma-separated package prefixes to profile (default: all)");
  run_cmd->add_option("--workers", run.config.collector.workers, "GC worker tables")->capture_default_str();
  run_cmd->add_option("--seed", run.config.seed)->capture_default_str();
  run_cmd->add_option("--json", run.json_path, "Write the metrics document here");
  run_cmd->add_option("--csv", run.csv_path, "Write one row per pause here");
  run_cmd->add_flag("--timing", run.timing, "Include wall-clock fields in the JSON");
  run_cmd->add_flag("--check-invariants", run.config.check_invariants);
  run_cmd->add_flag("-q,--quiet", run.quiet, "No text report on stdout");

  std::string cmp_a, cmp_b, cmp_csv;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Per-metric deltas between two metrics documents");
  cmp_cmd->add_option("a", cmp_a)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("b", cmp_b)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--csv", cmp_csv, "Write the delta table here instead of stdout");

  rolp::SyntheticSpec spec;
  std::string kind = "cache", gen_out;
  uint64_t young_mb_gen = 32;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Emit a synthetic trace");
  gen_cmd->add_option("--kind", kind)->check(CLI::IsMember({"generational", "cache", "mixed"}))->capture_default_str();
  gen_cmd->add_option("--seed", spec.seed)->capture_default_str();
  gen_cmd->add_option("--events", spec.event_count)->capture_default_str();
  auto* llf = gen_cmd->add_option("--long-lived-fraction", spec.long_lived_fraction);
  auto* lsf = gen_cmd->add_option("--long-lived-site-fraction", spec.long_lived_site_fraction);
  auto* share = gen_cmd->add_option("--shared-site-share", spec.shared_site_share);
  auto* sites = gen_cmd->add_option("--sites", spec.sites);
  auto* threads = gen_cmd->add_option("--threads", spec.threads);
  gen_cmd->add_option("--young-mb", young_mb_gen, "Young size the lifetimes are scaled to")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(run);

    if (cmp_cmd->parsed()) {
      nlohmann::json a = read_json(cmp_a), b = read_json(cmp_b);
      rolp::CompareReport report = rolp::compare(a, b);
      if (!report.same_trace) std::cerr << "warning: the two runs replayed different traces\n";
      if (cmp_csv.empty()) {
        rolp::write_compare_csv(std::cout, report);
      } else {
        std::ostringstream csv;
        rolp::write_compare_csv(csv, report);
        write_file(cmp_csv, csv.str());
      }
      return 0;
    }

    if (gen_cmd->parsed()) {
      // Start from the kind's defaults; explicit flags override them.
      rolp::SyntheticSpec s = rolp::SyntheticSpec::defaults(rolp::parse_workload_kind(kind));
      s.seed = spec.seed;
      s.event_count = spec.event_count;
      if (*llf) s.long_lived_fraction = spec.long_lived_fraction;
      if (*lsf) s.long_lived_site_fraction = spec.long_lived_site_fraction;
      if (*share) s.shared_site_share = spec.shared_site_share;
      if (*sites) s.sites = spec.sites;
      if (*threads) s.threads = spec.threads;
      s.young_turnover = young_mb_gen * rolp::MiB;
      rolp::GeneratedWorkload w = rolp::generate_synthetic(s);
      if (gen_out.empty()) {
        rolp::write_trace(std::cout, w.trace);
      } else {
        rolp::write_trace_file(gen_out, w.trace);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rolpsim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
