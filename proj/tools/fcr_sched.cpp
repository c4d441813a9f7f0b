// fcr-sched: day-ahead + FCR scheduling for a battery.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>

#include "fcr/orchestrator.hpp"
#include "fcr/report.hpp"
#include "fcr/solver.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;
constexpr int kDataError = 4;

struct Overrides {
  std::string config;
  std::string market_case;
  bool no_deg = false;
  std::int64_t seed = -1;
  std::string out;
};

fcr::RunConfig resolve(const Overrides& o) {
  auto c = fcr::load_config(o.config);
  if (!o.market_case.empty()) {
    try {
      c.cases = {fcr::parse_market_case(o.market_case)};
    } catch (const std::invalid_argument& e) {
      throw fcr::ConfigError(e.what());
    }
  }
  if (o.no_deg) c.degradation_modes = {false};
  if (o.seed >= 0) c.synthetic_seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

void print_summary(const std::vector<fcr::HorizonResult>& runs) {
  fmt::print("{:<8} {:<9} {:>12} {:>12} {:>12} {:>12}\n", "case", "mode", "profit k€", "cal k€", "cyc k€", "age tot k€");
  for (const auto& r : fcr::monetary_table(runs))
    fmt::print("{:<8} {:<9} {:>12.3f} {:>12.3f} {:>12.3f} {:>12.3f}\n", fcr::to_string(r.market_case),
               r.degradation_in_objective ? "with-deg" : "no-deg", r.profit / 1e3, r.calendar_aging / 1e3,
               r.cycle_aging / 1e3, r.total_aging / 1e3);
}

int cmd_run(const Overrides& o) {
  const auto config = resolve(o);
  const auto data = fcr::load_scenario(config);
  const auto backend = fcr::make_backend(config.solver, config.solver_command);
  const auto entries = fcr::run_matrix(config, data, *backend, config.output_dir);

  std::vector<fcr::HorizonResult> runs;
  int status = kOk;
  for (const auto& e : entries) {
    if (e.result) runs.push_back(*e.result);
    status = std::max(status, e.exit_class);
  }
  if (!runs.empty()) {
    fcr::RunMetadata meta;
    fcr::read_checkpoint(fcr::checkpoint_path(config.output_dir, runs.front().market_case,
                                              runs.front().degradation_in_objective),
                         &meta);
    fcr::write_report(config.output_dir, runs, config.battery, meta);
    print_summary(runs);
    fmt::print("report written to {}\n", config.output_dir.string());
  }
  return status;
}

int cmd_report(const std::string& from, const std::string& out) {
  fcr::RunMetadata meta;
  const auto runs = fcr::load_checkpoints(from, &meta);
  const auto config = fcr::parse_config(meta.config_text);
  const std::filesystem::path dir = out.empty() ? std::filesystem::path(from) : std::filesystem::path(out);
  fcr::write_report(dir, runs, config.battery, meta);
  print_summary(runs);
  return kOk;
}

int cmd_export(const Overrides& o, fcr::Index day, const std::string& format, const std::string& path,
               double s0) {
  const auto config = resolve(o);
  if (day < 0 || day >= config.days) throw fcr::ConfigError(fmt::format("--day {} outside the {}-day horizon", day, config.days));
  const auto fmt_kind = fcr::parse_model_format(format);
  const auto data = fcr::load_scenario(config);
  const auto mc = config.cases.size() == 1 ? config.cases.front() : fcr::MarketCase::MULTI;
  const bool deg = config.degradation_modes.front();
  const auto inputs = fcr::make_day_inputs(config, data, day, s0 >= 0 ? s0 : config.s0(), mc, deg);
  const auto model = fcr::build_day_model(inputs);
  std::filesystem::path file = path;
  if (file.empty()) {
    const char* ext = fmt_kind == fcr::ModelFormat::Lp ? "lp" : "mps";
    file = config.output_dir / fmt::format("day{:03}_{}.{}", day, fcr::to_string(mc), ext);
  }
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto res = fcr::export_model(model, fmt_kind, file, fmt::format("day{}", day));
  fmt::print("{} ({} columns, {} rows, {} binaries)\n", res.model_file.string(), model.num_variables(),
             model.num_constraints(), model.num_binaries());
  if (!res.name_map_file.empty()) fmt::print("renamed entries listed in {}\n", res.name_map_file.string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery scheduling across the day-ahead and FCR markets"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration (key = value)")->required();
    sub->add_option("--case", o.market_case, "WO_FCR, FCR_N, FCR_DU, FCR_DD or MULTI");
    sub->add_flag("--no-deg-objective", o.no_deg, "Leave aging out of the objective (post-calculated only)");
    sub->add_option("--synthetic-seed", o.seed, "Use synthetic frequency and prices with this seed");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* run = app.add_subcommand("run", "Run the configured cases and write checkpoints and the report");
  add_common(run);

  std::string from, report_out;
  auto* report = app.add_subcommand("report", "Rebuild the report from checkpoints");
  report->add_option("--from", from, "Checkpoint directory")->required();
  report->add_option("--out", report_out, "Report directory (default: the checkpoint directory)");

  fcr::Index day = 0;
  std::string format = "lp", model_path;
  double s0 = -1;
  auto* exp = app.add_subcommand("export-model", "Write one day's model for audit");
  add_common(exp);
  exp->add_option("--day", day, "Day index (0-based)")->required();
  exp->add_option("--format", format, "lp, mps (fixed) or free-mps");
  exp->add_option("--model-file", model_path, "Output file");
  exp->add_option("--s0", s0, "Initial SoE in MWh (default: the configured initial SoE)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(o);
    if (*report) return cmd_report(from, report_out);
    if (*exp) return cmd_export(o, day, format, model_path, s0);
  } catch (const fcr::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const fcr::UnsupportedFormat& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const fcr::IngestError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kDataError;
  } catch (const fcr::InfeasibleBounds& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kDataError;
  } catch (const fcr::FitToleranceExceeded& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const fcr::SolverFailure& e) {
    fmt::print(stderr, "solver failure: {}\n", e.what());
    return kSolverFailure;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return kOk;
}
