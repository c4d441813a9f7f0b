#include "fcr/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "csv.hpp"

namespace fcr {

namespace {

using Kind = IngestError::Kind;

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(Kind::MissingFile, fmt::format("cannot open '{}'", path.string()));
  return in;
}

double parse_number(const std::string& field, const std::filesystem::path& path, std::size_t line) {
  const auto text = detail::trim(field);
  double value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw IngestError(Kind::SchemaMismatch,
                      fmt::format("{}:{}: '{}' is not a number", path.string(), line, field));
  return value;
}

void expect_header(const std::string& line, const std::vector<std::string>& want,
                   const std::filesystem::path& path) {
  auto got = detail::split_csv(line);
  for (auto& g : got) g = detail::trim(g);
  if (got != want)
    throw IngestError(Kind::SchemaMismatch,
                      fmt::format("{}: header must be '{}'", path.string(), fmt::join(want, ",")));
}

}  // namespace

std::int64_t parse_utc(const std::string& raw) {
  const auto text = detail::trim(raw);
  std::tm tm{};
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail[8] = {0};
  int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%*[T ]%2d:%2d:%2d%7s", &y, &mo, &d, &h, &mi, &s, tail);
  if (n == 3 && text.size() == 10) {
    h = mi = s = 0;
  } else if (n < 6 || !(n == 6 || std::string(tail) == "Z" || std::string(tail) == "+00:00")) {
    throw IngestError(Kind::SchemaMismatch, fmt::format("bad UTC timestamp '{}'", text));
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
    throw IngestError(Kind::SchemaMismatch, fmt::format("bad UTC timestamp '{}'", text));
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  return static_cast<std::int64_t>(timegm(&tm));
}

std::string format_utc(std::int64_t epoch) {
  std::time_t t = static_cast<std::time_t>(epoch);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

PriceSeries PriceSeries::slice(Index first, Index count) const {
  PriceSeries out;
  out.spot = spot.segment(first, count);
  out.fcr_n = fcr_n.segment(first, count);
  out.fcr_du = fcr_du.segment(first, count);
  out.fcr_dd = fcr_dd.segment(first, count);
  out.up_reg = up_reg.segment(first, count);
  out.down_reg = down_reg.segment(first, count);
  out.grid_tariff = grid_tariff;
  out.tax = tax;
  return out;
}

FrequencyTrace load_frequency(const std::filesystem::path& path, const Horizon& horizon,
                              const FrequencyLoadOptions& options) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line))
    throw IngestError(Kind::SchemaMismatch, fmt::format("{}: empty file", path.string()));
  expect_header(line, {"timestamp", "hz"}, path);

  const auto step = static_cast<std::int64_t>(horizon.step_seconds());
  const Index n = horizon.total_steps();
  std::vector<double> values(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 2)
      throw IngestError(Kind::SchemaMismatch, fmt::format("{}:{}: expected 2 fields", path.string(), lineno));
    const auto ts = parse_utc(fields[0]);
    const double hz = parse_number(fields[1], path, lineno);
    const auto offset = ts - horizon.start_epoch;
    if (offset < 0 || offset >= n * step) continue;  // outside the horizon
    if (offset % step != 0)
      throw IngestError(Kind::SchemaMismatch,
                        fmt::format("{}:{}: timestamp not on the {} s grid", path.string(), lineno, step), ts);
    if (!std::isfinite(hz) || hz < kMinPlausibleHz || hz > kMaxPlausibleHz)
      throw IngestError(Kind::OutOfRangeSample,
                        fmt::format("{}:{}: {} Hz outside [{}, {}]", path.string(), lineno, hz,
                                    kMinPlausibleHz, kMaxPlausibleHz),
                        ts);
    const auto t = static_cast<std::size_t>(offset / step);
    if (seen[t])
      throw IngestError(Kind::SchemaMismatch, fmt::format("{}:{}: duplicate timestamp", path.string(), lineno), ts);
    seen[t] = true;
    values[t] = hz;
  }

  // Previous-value hold across short gaps.
  std::int64_t run = 0;
  for (Index t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (seen[i]) {
      run = 0;
      continue;
    }
    ++run;
    const auto ts = horizon.start_epoch + t * step;
    if (t == 0 || run * step > options.max_gap_seconds)
      throw IngestError(Kind::GapTooLong, fmt::format("{}: no sample near {}", path.string(), format_utc(ts)), ts);
    values[i] = values[i - 1];
  }

  FrequencyTrace trace;
  trace.hz = Eigen::Map<const Eigen::ArrayXd>(values.data(), n);
  return trace;
}

PriceSeries load_prices(const std::filesystem::path& path, Index horizon_hours, std::int64_t start_epoch) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line))
    throw IngestError(Kind::SchemaMismatch, fmt::format("{}: empty file", path.string()));
  expect_header(line, {"hour_start", "spot", "fcr_n", "fcr_du", "fcr_dd", "up_reg", "down_reg"}, path);

  PriceSeries p;
  for (auto* a : {&p.spot, &p.fcr_n, &p.fcr_du, &p.fcr_dd, &p.up_reg, &p.down_reg})
    a->setZero(horizon_hours);

  Index h = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 7)
      throw IngestError(Kind::SchemaMismatch, fmt::format("{}:{}: expected 7 fields", path.string(), lineno));
    const auto ts = parse_utc(fields[0]);
    if (start_epoch < 0) start_epoch = ts;
    if (ts < start_epoch) continue;
    const Index hour = (ts - start_epoch) / 3600;
    if ((ts - start_epoch) % 3600 != 0)
      throw IngestError(Kind::SchemaMismatch, fmt::format("{}:{}: hour_start not on the hour", path.string(), lineno));
    if (hour >= horizon_hours) break;
    if (hour != h) {
      if (hour < h)
        throw IngestError(Kind::SchemaMismatch, fmt::format("{}:{}: rows out of order", path.string(), lineno));
      throw IngestError(Kind::MissingHour, fmt::format("{}: missing hour {}", path.string(), h), h);
    }
    double v[6];
    for (int k = 0; k < 6; ++k) v[k] = parse_number(fields[static_cast<std::size_t>(k + 1)], path, lineno);
    for (int k = 1; k <= 3; ++k)
      if (v[k] < 0)
        throw IngestError(Kind::SchemaMismatch,
                          fmt::format("{}:{}: capacity price must be non-negative", path.string(), lineno));
    p.spot[h] = v[0];
    p.fcr_n[h] = v[1];
    p.fcr_du[h] = v[2];
    p.fcr_dd[h] = v[3];
    p.up_reg[h] = v[4];
    p.down_reg[h] = v[5];
    ++h;
  }
  if (h < horizon_hours) throw IngestError(Kind::MissingHour, fmt::format("{}: missing hour {}", path.string(), h), h);
  return p;
}

void write_frequency_csv(const std::filesystem::path& path, const FrequencyTrace& trace, const Horizon& horizon) {
  std::ofstream out(path);
  if (!out) throw IngestError(Kind::MissingFile, fmt::format("cannot write '{}'", path.string()));
  out << "timestamp,hz\n";
  for (Index t = 0; t < trace.size(); ++t)
    out << format_utc(horizon.start_epoch + t * horizon.step_seconds()) << ',' << fmt::format("{}", trace.hz[t])
        << '\n';
}

void write_prices_csv(const std::filesystem::path& path, const PriceSeries& p, std::int64_t start_epoch) {
  std::ofstream out(path);
  if (!out) throw IngestError(Kind::MissingFile, fmt::format("cannot write '{}'", path.string()));
  out << "hour_start,spot,fcr_n,fcr_du,fcr_dd,up_reg,down_reg\n";
  for (Index h = 0; h < p.hours(); ++h)
    out << fmt::format("{},{},{},{},{},{},{}\n", format_utc(start_epoch + h * 3600), p.spot[h], p.fcr_n[h],
                       p.fcr_du[h], p.fcr_dd[h], p.up_reg[h], p.down_reg[h]);
}

FrequencyTrace synth_frequency(std::uint64_t seed, const Horizon& horizon, const SynthFrequencyParams& params) {
  if (!(params.reversion_per_second >= 0) || !(params.volatility >= 0) || !(params.clamp_lo < params.clamp_hi))
    throw std::invalid_argument("synth_frequency: invalid parameters");
  const Index n = horizon.total_steps();
  const double dt = static_cast<double>(horizon.step_seconds());
  // Exact discretization of the OU process over one step.
  const double decay = std::exp(-params.reversion_per_second * dt);
  const double sd = params.reversion_per_second > 0
                        ? params.volatility * std::sqrt((1 - decay * decay) / (2 * params.reversion_per_second))
                        : params.volatility * std::sqrt(dt);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FrequencyTrace trace;
  trace.hz.resize(n);
  double f = params.initial_hz;
  for (Index t = 0; t < n; ++t) {
    trace.hz[t] = std::clamp(f, params.clamp_lo, params.clamp_hi);
    const double noise = params.volatility > 0 ? sd * normal(rng) : 0.0;
    f = params.mean_hz + (f - params.mean_hz) * decay + noise;
  }
  return trace;
}

PriceSeries synth_prices(std::uint64_t seed, Index hours) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PriceSeries p;
  for (auto* a : {&p.spot, &p.fcr_n, &p.fcr_du, &p.fcr_dd, &p.up_reg, &p.down_reg}) a->resize(hours);
  double day_level = 120.0;
  for (Index h = 0; h < hours; ++h) {
    const Index hod = h % 24;
    if (hod == 0) day_level = std::max(20.0, 120.0 + 40.0 * normal(rng));
    // Morning and evening peaks.
    const double shape = 1.0 + 0.35 * std::exp(-0.5 * std::pow((hod - 8.0) / 2.0, 2)) +
                         0.5 * std::exp(-0.5 * std::pow((hod - 18.0) / 2.5, 2)) -
                         0.3 * std::exp(-0.5 * std::pow((hod - 3.0) / 2.0, 2));
    const double spot = day_level * shape + 8.0 * normal(rng);
    p.spot[h] = std::round(spot * 100) / 100;
    p.fcr_n[h] = std::round(std::max(0.0, 35.0 + 15.0 * normal(rng)) * 100) / 100;
    p.fcr_du[h] = std::round(std::max(0.0, 30.0 + 20.0 * normal(rng)) * 100) / 100;
    p.fcr_dd[h] = std::round(std::max(0.0, 12.0 + 8.0 * normal(rng)) * 100) / 100;
    p.up_reg[h] = std::round((spot + 15.0 * unit(rng)) * 100) / 100;
    p.down_reg[h] = std::round((spot - 15.0 * unit(rng)) * 100) / 100;
  }
  return p;
}

}  // namespace fcr
