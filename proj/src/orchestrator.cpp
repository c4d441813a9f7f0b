#include "fcr/orchestrator.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <cmath>
#include <sstream>

#include "csv.hpp"
#include "json.hpp"

namespace fcr {

using json = nlohmann::json;

// ---------------------------------------------------------------- config

namespace {

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define FCR_DOUBLE(name, member)                                                        \
  {                                                                                     \
    name, {                                                                             \
      [](RunConfig& c, const std::string& v) { c.member = parse_double(name, v); },     \
          [](const RunConfig& c) { return fmt::format("{}", c.member); }                \
    }                                                                                   \
  }
#define FCR_BOOL(name, member)                                                          \
  {                                                                                     \
    name, {                                                                             \
      [](RunConfig& c, const std::string& v) { c.member = parse_bool(name, v); },       \
          [](const RunConfig& c) { return fmt_bool(c.member); }                         \
    }                                                                                   \
  }

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = {
      {"cases",
       {[](RunConfig& c, const std::string& v) {
          c.cases.clear();
          if (v == "all") {
            c.cases.assign(kAllCases.begin(), kAllCases.end());
            return;
          }
          for (const auto& item : detail::split_csv(v)) {
            try {
              c.cases.push_back(parse_market_case(detail::trim(item)));
            } catch (const std::invalid_argument& e) {
              throw ConfigError(std::string("cases: ") + e.what());
            }
          }
        },
        [](const RunConfig& c) {
          std::string s;
          for (auto mc : c.cases) s += (s.empty() ? "" : ",") + std::string(to_string(mc));
          return s;
        }}},
      {"degradation_in_objective",
       {[](RunConfig& c, const std::string& v) {
          if (v == "both") c.degradation_modes = {true, false};
          else c.degradation_modes = {parse_bool("degradation_in_objective", v)};
        },
        [](const RunConfig& c) {
          return c.degradation_modes.size() == 2 ? std::string("both") : fmt_bool(c.degradation_modes.at(0));
        }}},
      {"start_date",
       {[](RunConfig& c, const std::string& v) { c.start_date = v; }, [](const RunConfig& c) { return c.start_date; }}},
      {"days",
       {[](RunConfig& c, const std::string& v) { c.days = parse_int("days", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.days); }}},
      {"steps_per_hour",
       {[](RunConfig& c, const std::string& v) { c.steps_per_hour = parse_int("steps_per_hour", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.steps_per_hour); }}},
      {"frequency_file",
       {[](RunConfig& c, const std::string& v) { c.frequency_file = v; },
        [](const RunConfig& c) { return c.frequency_file.string(); }}},
      {"price_file",
       {[](RunConfig& c, const std::string& v) { c.price_file = v; },
        [](const RunConfig& c) { return c.price_file.string(); }}},
      {"synthetic_seed",
       {[](RunConfig& c, const std::string& v) {
          const auto s = parse_int("synthetic_seed", v);
          if (s < 0) throw ConfigError("synthetic_seed must be non-negative");
          c.synthetic_seed = static_cast<std::uint64_t>(s);
        },
        [](const RunConfig& c) { return c.synthetic_seed ? fmt::format("{}", *c.synthetic_seed) : std::string(); }}},
      {"max_gap_seconds",
       {[](RunConfig& c, const std::string& v) { c.max_gap_seconds = parse_int("max_gap_seconds", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.max_gap_seconds); }}},
      {"lifetime_years",
       {[](RunConfig& c, const std::string& v) {
          c.battery.lifetime_years = static_cast<int>(parse_int("lifetime_years", v));
        },
        [](const RunConfig& c) { return fmt::format("{}", c.battery.lifetime_years); }}},
      {"initial_soe",
       {[](RunConfig& c, const std::string& v) { c.initial_soe = parse_double("initial_soe", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.s0()); }}},
      {"npv_alpha",
       {[](RunConfig& c, const std::string& v) { c.aging.npv_alpha = parse_double("npv_alpha", v); },
        [](const RunConfig& c) { return c.aging.npv_alpha ? fmt::format("{}", *c.aging.npv_alpha) : std::string(); }}},
      {"solver",
       {[](RunConfig& c, const std::string& v) { c.solver = v; }, [](const RunConfig& c) { return c.solver; }}},
      {"solver_command",
       {[](RunConfig& c, const std::string& v) { c.solver_command = v; },
        [](const RunConfig& c) { return c.solver_command; }}},
      {"output_dir",
       {[](RunConfig& c, const std::string& v) { c.output_dir = v; },
        [](const RunConfig& c) { return c.output_dir.string(); }}},
      FCR_DOUBLE("capacity", battery.capacity),
      FCR_DOUBLE("p_min", battery.p_min),
      FCR_DOUBLE("p_max", battery.p_max),
      FCR_DOUBLE("soc_min", battery.soc_min),
      FCR_DOUBLE("soc_max", battery.soc_max),
      FCR_DOUBLE("eta_ch", battery.eta_ch),
      FCR_DOUBLE("eta_ds", battery.eta_ds),
      FCR_DOUBLE("min_bid_n", battery.min_bid_n),
      FCR_DOUBLE("min_bid_du", battery.min_bid_du),
      FCR_DOUBLE("min_bid_dd", battery.min_bid_dd),
      FCR_DOUBLE("replacement_cost", battery.replacement_cost),
      FCR_DOUBLE("om_cost", battery.om_cost),
      FCR_DOUBLE("eol_retained", battery.eol_retained),
      FCR_DOUBLE("interest_rate", battery.interest_rate),
      FCR_DOUBLE("salvage_ratio", battery.salvage_ratio),
      FCR_DOUBLE("temperature", battery.temperature),
      FCR_DOUBLE("cycle_ah_per_unit", battery.cycle_ah_per_unit),
      FCR_DOUBLE("a1", battery.aging.a1),
      FCR_DOUBLE("a2", battery.aging.a2),
      FCR_DOUBLE("a3", battery.aging.a3),
      FCR_DOUBLE("b1", battery.aging.b1),
      FCR_DOUBLE("b2", battery.aging.b2),
      FCR_DOUBLE("b3", battery.aging.b3),
      FCR_DOUBLE("c1", battery.aging.c1),
      FCR_DOUBLE("c2", battery.aging.c2),
      FCR_DOUBLE("c3", battery.aging.c3),
      FCR_DOUBLE("activation_energy", battery.aging.activation_energy),
      FCR_DOUBLE("gas_constant", battery.aging.gas_constant),
      FCR_DOUBLE("q_poly_at_temp", battery.aging.q_poly_at_temp),
      FCR_DOUBLE("q4", battery.aging.q4),
      FCR_DOUBLE("f_n", droop.f_n),
      FCR_DOUBLE("f_min_n", droop.f_min_n),
      FCR_DOUBLE("f_max_n", droop.f_max_n),
      FCR_DOUBLE("f_min_d", droop.f_min_d),
      FCR_DOUBLE("f_max_d", droop.f_max_d),
      FCR_DOUBLE("start_age_days", start_age_days),
      FCR_DOUBLE("grid_tariff", grid_tariff),
      FCR_DOUBLE("tax", tax),
      FCR_DOUBLE("cycle_fit_tolerance", cycle_fit_tolerance),
      FCR_DOUBLE("time_limit", limits.time_limit),
      FCR_DOUBLE("mip_gap", limits.gap),
      FCR_BOOL("arrhenius_positive_exponent", aging.arrhenius_positive_exponent),
      FCR_BOOL("relinearize_daily", relinearize_daily),
      FCR_BOOL("relax_step_binaries", build.relax_step_binaries),
      FCR_BOOL("da_revenue_includes_tax", build.da_revenue_includes_tax),
      FCR_BOOL("efficiency_on_activation", build.efficiency_on_activation),
      FCR_BOOL("force_zero_baseline", build.force_zero_baseline),
      FCR_BOOL("enforce_requirements", build.enforce_requirements),
  };
  return table;
}

#undef FCR_DOUBLE
#undef FCR_BOOL

}  // namespace

Horizon RunConfig::horizon() const {
  Horizon h;
  try {
    h.start_epoch = parse_utc(start_date);
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("start_date: {}", e.what()));
  }
  h.days = days;
  h.steps_per_hour = steps_per_hour;
  h.hours_per_day = 24;
  return h;
}

void RunConfig::validate() const {
  try {
    battery.validate();
    droop.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cases.empty()) throw ConfigError("cases: nothing to run");
  if (degradation_modes.empty()) throw ConfigError("degradation_in_objective: nothing to run");
  if (days < 1) throw ConfigError("days must be at least 1");
  if (steps_per_hour < 1 || 3600 % steps_per_hour != 0) throw ConfigError("steps_per_hour must divide 3600");
  horizon();
  const double s = s0();
  if (!(s >= battery.soe_min() && s <= battery.soe_max()))
    throw ConfigError(fmt::format("initial_soe {} MWh outside [{}, {}]", s, battery.soe_min(), battery.soe_max()));
  if (!synthetic_seed && (frequency_file.empty() || price_file.empty()))
    throw ConfigError("either synthetic_seed or both frequency_file and price_file are required");
  if (solver != "external" && solver != "micro") throw ConfigError("solver must be 'external' or 'micro'");
  if (!(limits.time_limit > 0)) throw ConfigError("time_limit must be positive");
  if (!(limits.gap >= 0)) throw ConfigError("mip_gap must be non-negative");
  if (build.relax_step_binaries && battery.p_min > 0) throw ConfigError("relax_step_binaries requires p_min = 0");
  if (start_age_days < 0) throw ConfigError("start_age_days must be non-negative");
  if (max_gap_seconds < 0) throw ConfigError("max_gap_seconds must be non-negative");
  if (!(cycle_fit_tolerance > 0)) throw ConfigError("cycle_fit_tolerance must be positive");
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [name, key] : keys()) {
    if (name == "output_dir") continue;  // where results go does not change them
    const auto value = key.get(*this);
    if (!value.empty()) out += fmt::format("{} = {}\n", name, value);
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    if (seen.count(key)) throw ConfigError(fmt::format("line {}: '{}' already set on line {}", line_no, key, seen[key]));
    seen[key] = line_no;
    it->second.set(c, value);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  // Data files are relative to the config file.
  const auto base = path.parent_path();
  if (!c.frequency_file.empty() && c.frequency_file.is_relative()) c.frequency_file = base / c.frequency_file;
  if (!c.price_file.empty() && c.price_file.is_relative()) c.price_file = base / c.price_file;
  return c;
}

// ------------------------------------------------------------------ data

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t ScenarioData::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  const std::int64_t shape[4] = {horizon.start_epoch, horizon.days, horizon.steps_per_hour, horizon.hours_per_day};
  h = fnv1a(shape, sizeof shape, h);
  auto mix = [&](const Eigen::ArrayXd& a) { h = fnv1a(a.data(), sizeof(double) * static_cast<std::size_t>(a.size()), h); };
  mix(frequency.hz);
  for (const auto* a : {&prices.spot, &prices.fcr_n, &prices.fcr_du, &prices.fcr_dd, &prices.up_reg, &prices.down_reg})
    mix(*a);
  const double scalars[2] = {prices.grid_tariff, prices.tax};
  return fnv1a(scalars, sizeof scalars, h);
}

ScenarioData load_scenario(const RunConfig& config) {
  ScenarioData d;
  d.horizon = config.horizon();
  if (config.synthetic_seed) {
    d.frequency = synth_frequency(*config.synthetic_seed, d.horizon);
    d.prices = synth_prices(*config.synthetic_seed, d.horizon.total_hours());
  } else {
    d.frequency = load_frequency(config.frequency_file, d.horizon, {config.max_gap_seconds});
    d.prices = load_prices(config.price_file, d.horizon.total_hours(), d.horizon.start_epoch);
  }
  d.prices.grid_tariff = config.grid_tariff;
  d.prices.tax = config.tax;
  return d;
}

// ----------------------------------------------------------- market mix

const char* to_string(MixLabel label) {
  static constexpr const char* names[] = {"None", "N", "DU", "DD", "N+DU", "N+DD", "DU+DD", "All"};
  return names[static_cast<int>(label)];
}

MixLabel classify_hour(double bid_n, double bid_du, double bid_dd) {
  constexpr double tol = 1e-9;
  const bool n = bid_n > tol, du = bid_du > tol, dd = bid_dd > tol;
  if (n && du && dd) return MixLabel::All;
  if (du && dd) return MixLabel::DU_DD;
  if (n && dd) return MixLabel::N_DD;
  if (n && du) return MixLabel::N_DU;
  if (dd) return MixLabel::DD;
  if (du) return MixLabel::DU;
  if (n) return MixLabel::N;
  return MixLabel::None;
}

std::vector<MixLabel> classify_market_mix(const DaySolution& day) {
  std::vector<MixLabel> out;
  out.reserve(static_cast<std::size_t>(day.bid_n.size()));
  for (Index h = 0; h < day.bid_n.size(); ++h) out.push_back(classify_hour(day.bid_n[h], day.bid_du[h], day.bid_dd[h]));
  return out;
}

std::string HorizonResult::label() const {
  return fmt::format("{}_{}", to_string(market_case), degradation_in_objective ? "with-deg" : "no-deg");
}

void HorizonResult::aggregate() {
  profit = r_da = r_fcr = c_da = 0;
  aging = {};
  mix.fill(0);
  for (const auto& d : days) {
    profit += d.profit();
    r_da += d.r_da;
    r_fcr += d.r_fcr();
    c_da += d.c_da;
    aging.calendar_cost += d.aging.calendar_cost;
    aging.cycle_cost += d.aging.cycle_cost;
    aging.calendar_pct += d.aging.calendar_pct;
    aging.cycle_pct += d.aging.cycle_pct;
    for (auto l : classify_market_mix(d)) ++mix[static_cast<std::size_t>(l)];
  }
}

// --------------------------------------------------------------- solving

DayInputs make_day_inputs(const RunConfig& config, const ScenarioData& data, Index day, double s0,
                          MarketCase market_case, bool degradation_in_objective) {
  const auto& hz = data.horizon;
  DayInputs in{hz.day(day), data.prices.slice(day * hz.hours_per_day, hz.hours_per_day), {}, config.battery, {}, {},
               s0, market_case, config.build};
  in.options.degradation_in_objective = degradation_in_objective;
  in.contents = energy_content(data.frequency.day(hz, day), in.grid, config.droop);
  const auto npv = battery_npv(config.battery, config.aging);
  const double age = config.start_age_days +
                     (config.relinearize_daily ? static_cast<double>(day) + 0.5 : 0.5 * static_cast<double>(hz.days));
  in.cal_lin = linearize_calendar(config.battery, age, static_cast<double>(hz.step_seconds()), npv, config.aging);
  in.cyc_lin = linearize_cycle(config.battery, npv, config.cycle_fit_tolerance);
  return in;
}

DaySolution solve_day(const DayInputs& inputs, const SolverBackend& backend, const SolveLimits& limits,
                      const RunConfig& config) {
  const Index day = inputs.grid.day_index;
  const auto model = build_day_model(inputs);
  const auto res = backend.solve(model, limits);
  const bool have_point = res.solution.size() == model.num_variables();
  if (!(res.status == SolveStatus::Optimal || (res.status == SolveStatus::TimeLimit && have_point)) || !have_point)
    throw SolverFailure(day, fmt::format("day {}: {} {}", day, to_string(res.status), res.message));
  const auto report = validate_solution(model, res.solution);
  if (!report.ok())
    throw SolverFailure(day, fmt::format("day {}: solution violates the model (worst bound {:.3g} at {})", day,
                                         report.worst_bound, report.worst_bound_where));
  auto sol = extract_day_solution(model, res.solution, inputs);
  sol.stats = {to_string(res.status), res.gap, res.wall_time};
  const auto npv = battery_npv(config.battery, config.aging);
  sol.aging = post_calculate_aging(sol.soe, sol.p_ch, sol.p_ds, inputs.grid.step_seconds(), config.battery,
                                   config.start_age_days + static_cast<double>(day), npv, config.aging);
  return sol;
}

// ----------------------------------------------------------- checkpoints

namespace {

json to_json(const Eigen::ArrayXd& a) { return json(std::vector<double>(a.data(), a.data() + a.size())); }

Eigen::ArrayXd array_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Index>(v.size()));
}

json day_to_json(const DaySolution& d) {
  return json{
      {"day", d.day_index},
      {"steps_per_hour", d.grid.steps_per_hour},
      {"hours", d.grid.hours},
      {"s0", d.s0},
      {"p_ch_bl", to_json(d.p_ch_bl)},
      {"p_ds_bl", to_json(d.p_ds_bl)},
      {"bid_n", to_json(d.bid_n)},
      {"bid_du", to_json(d.bid_du)},
      {"bid_dd", to_json(d.bid_dd)},
      {"p_ch", to_json(d.p_ch)},
      {"p_ds", to_json(d.p_ds)},
      {"soe", to_json(d.soe)},
      {"r_da", d.r_da},
      {"r_n", d.r_n},
      {"r_du", d.r_du},
      {"r_dd", d.r_dd},
      {"c_da", d.c_da},
      {"c_deg_cal_lin", d.c_deg_cal_lin},
      {"c_deg_cyc_lin", d.c_deg_cyc_lin},
      {"objective", d.objective},
      {"aging", {d.aging.calendar_cost, d.aging.cycle_cost, d.aging.calendar_pct, d.aging.cycle_pct}},
      {"status", d.stats.status},
      {"gap", std::isfinite(d.stats.gap) ? json(d.stats.gap) : json(nullptr)},
      {"wall_time", d.stats.wall_time},
  };
}

DaySolution day_from_json(const json& j) {
  DaySolution d;
  d.day_index = j.at("day").get<Index>();
  d.grid = TimeGrid(d.day_index, j.at("steps_per_hour").get<Index>(), j.at("hours").get<Index>());
  d.s0 = j.at("s0").get<double>();
  d.p_ch_bl = array_from(j.at("p_ch_bl"));
  d.p_ds_bl = array_from(j.at("p_ds_bl"));
  d.bid_n = array_from(j.at("bid_n"));
  d.bid_du = array_from(j.at("bid_du"));
  d.bid_dd = array_from(j.at("bid_dd"));
  d.p_ch = array_from(j.at("p_ch"));
  d.p_ds = array_from(j.at("p_ds"));
  d.soe = array_from(j.at("soe"));
  d.r_da = j.at("r_da").get<double>();
  d.r_n = j.at("r_n").get<double>();
  d.r_du = j.at("r_du").get<double>();
  d.r_dd = j.at("r_dd").get<double>();
  d.c_da = j.at("c_da").get<double>();
  d.c_deg_cal_lin = j.at("c_deg_cal_lin").get<double>();
  d.c_deg_cyc_lin = j.at("c_deg_cyc_lin").get<double>();
  d.objective = j.at("objective").get<double>();
  const auto& a = j.at("aging");
  d.aging = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>(), a.at(3).get<double>()};
  d.stats.status = j.at("status").get<std::string>();
  d.stats.gap = j.at("gap").is_null() ? kInf : j.at("gap").get<double>();
  d.stats.wall_time = j.at("wall_time").get<double>();
  if (d.p_ch_bl.size() != d.grid.hours || d.soe.size() != d.grid.steps())
    throw std::runtime_error(fmt::format("checkpoint day {} has inconsistent array lengths", d.day_index));
  return d;
}

json header_json(const HorizonResult& r, const RunMetadata& meta) {
  return json{{"case", std::string(to_string(r.market_case))},
              {"degradation_in_objective", r.degradation_in_objective},
              {"config_hash", fmt::format("{:016x}", meta.config_hash)},
              {"data_hash", fmt::format("{:016x}", meta.data_hash)},
              {"config", meta.config_text}};
}

void append_day(const std::filesystem::path& path, const DaySolution& d) {
  std::ofstream out(path, std::ios::app);
  out << day_to_json(d).dump() << '\n';
  if (!out) throw std::runtime_error("cannot append to checkpoint " + path.string());
}

}  // namespace

std::filesystem::path checkpoint_path(const std::filesystem::path& root, MarketCase market_case,
                                      bool degradation_in_objective) {
  HorizonResult r;
  r.market_case = market_case;
  r.degradation_in_objective = degradation_in_objective;
  return root / (r.label() + ".jsonl");
}

void write_checkpoint(const std::filesystem::path& path, const HorizonResult& result, const RunMetadata& meta) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    out << header_json(result, meta).dump() << '\n';
    for (const auto& d : result.days) out << day_to_json(d).dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

HorizonResult read_checkpoint(const std::filesystem::path& path, RunMetadata* meta) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty checkpoint " + path.string());
  HorizonResult r;
  try {
    const auto head = json::parse(line);
    r.market_case = parse_market_case(head.at("case").get<std::string>());
    r.degradation_in_objective = head.at("degradation_in_objective").get<bool>();
    if (meta) {
      meta->config_hash = std::stoull(head.at("config_hash").get<std::string>(), nullptr, 16);
      meta->data_hash = std::stoull(head.at("data_hash").get<std::string>(), nullptr, 16);
      meta->config_text = head.value("config", std::string());
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("checkpoint {}: bad header: {}", path.string(), e.what()));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      if (in.peek() == EOF) break;  // torn final line from an interrupted run
      throw std::runtime_error("checkpoint " + path.string() + ": corrupt line");
    }
    auto d = day_from_json(j);
    if (d.day_index != static_cast<Index>(r.days.size()))
      throw std::runtime_error(fmt::format("checkpoint {}: day {} out of order", path.string(), d.day_index));
    r.days.push_back(std::move(d));
  }
  r.aggregate();
  return r;
}

// ---------------------------------------------------------------- runs

HorizonResult run_case(const RunConfig& config, const ScenarioData& data, MarketCase market_case,
                       bool degradation_in_objective, const SolverBackend& backend,
                       const std::filesystem::path& checkpoint_dir) {
  HorizonResult result;
  result.market_case = market_case;
  result.degradation_in_objective = degradation_in_objective;
  // The case/mode selection does not affect a single run's result.
  RunConfig keyed = config;
  keyed.cases.assign(kAllCases.begin(), kAllCases.end());
  keyed.degradation_modes = {true, false};
  const auto text = keyed.canonical();
  const RunMetadata meta{fnv1a(text.data(), text.size()), data.hash(), text};

  std::filesystem::path ckpt;
  if (!checkpoint_dir.empty()) {
    std::filesystem::create_directories(checkpoint_dir);
    ckpt = checkpoint_path(checkpoint_dir, market_case, degradation_in_objective);
    bool resumed = false;
    if (std::filesystem::exists(ckpt)) {
      try {
        RunMetadata stored;
        auto prev = read_checkpoint(ckpt, &stored);
        if (stored.config_hash == meta.config_hash && stored.data_hash == meta.data_hash &&
            static_cast<Index>(prev.days.size()) <= config.days) {
          result.days = std::move(prev.days);
          resumed = true;
        }
      } catch (const std::exception& e) {
        fmt::print(stderr, "[{}] ignoring checkpoint: {}\n", result.label(), e.what());
      }
    }
    // Rewrite so a torn tail or a stale run is dropped.
    write_checkpoint(ckpt, result, meta);
    if (resumed && !result.days.empty())
      fmt::print(stderr, "[{}] resuming after day {}\n", result.label(), result.days.back().day_index);
  }

  double s0 = result.days.empty() ? config.s0() : result.days.back().final_soe();
  for (Index d = static_cast<Index>(result.days.size()); d < config.days; ++d) {
    const auto inputs = make_day_inputs(config, data, d, s0, market_case, degradation_in_objective);
    auto sol = solve_day(inputs, backend, config.limits, config);
    fmt::print(stderr, "[{}] day {} {} obj={:.4f} gap={:.3g} t={:.2f}s\n", result.label(), d, sol.stats.status,
               sol.objective, sol.stats.gap, sol.stats.wall_time);
    if (!ckpt.empty()) append_day(ckpt, sol);
    s0 = sol.final_soe();
    result.days.push_back(std::move(sol));
  }
  result.aggregate();
  return result;
}

std::vector<MatrixEntry> run_matrix(const RunConfig& config, const ScenarioData& data, const SolverBackend& backend,
                                    const std::filesystem::path& checkpoint_root) {
  std::vector<MatrixEntry> out;
  for (auto mc : config.cases) {
    for (bool deg : config.degradation_modes) {
      MatrixEntry e{mc, deg, std::nullopt, {}, 0};
      try {
        e.result = run_case(config, data, mc, deg, backend, checkpoint_root);
      } catch (const SolverFailure& ex) {
        e.error = ex.what();
        e.exit_class = 3;
      } catch (const IngestError& ex) {
        e.error = ex.what();
        e.exit_class = 4;
      } catch (const std::invalid_argument& ex) {
        e.error = ex.what();
        e.exit_class = 4;
      } catch (const std::exception& ex) {
        e.error = ex.what();
        e.exit_class = 3;
      }
      if (!e.error.empty()) fmt::print(stderr, "[{}_{}] failed: {}\n", to_string(mc), deg ? "with-deg" : "no-deg", e.error);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace fcr
