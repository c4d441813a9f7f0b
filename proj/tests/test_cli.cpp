#include <doctest.h>
#include <fmt/format.h>
#include <sys/wait.h>

#include <cstdlib>

#include "support.hpp"

namespace {

int run(const std::string& args) {
  const auto cmd = fmt::format("{} {} >/dev/null 2>&1", FCR_SCHED_BIN, args);
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* kSmall = "days = 1\nsteps_per_hour = 1\nsynthetic_seed = 2\ncases = WO_FCR, FCR_N\nmip_gap = 1e-6\n";

}  // namespace

TEST_CASE("run, report and export") {
  testing::ScratchDir dir;
  testing::write_file(dir / "run.conf", kSmall);
  const auto out = dir / "out";
  REQUIRE(run(fmt::format("run --config {} --out {}", (dir / "run.conf").string(), out.string())) == 0);
  for (const char* f : {"monetary.csv", "market_mix.csv", "histograms.csv", "quartiles.csv", "manifest.json",
                        "FCR_N_with-deg.jsonl", "WO_FCR_no-deg.jsonl"})
    CHECK(std::filesystem::exists(out / f));

  const auto money = testing::read_file(out / "monetary.csv");
  const auto hist = testing::read_file(out / "histograms.csv");
  const auto again = dir / "again";
  REQUIRE(run(fmt::format("report --from {} --out {}", out.string(), again.string())) == 0);
  CHECK(testing::read_file(again / "monetary.csv") == money);
  CHECK(testing::read_file(again / "histograms.csv") == hist);
  CHECK(testing::read_file(again / "manifest.json") == testing::read_file(out / "manifest.json"));

  const auto lp = dir / "d0.lp";
  CHECK(run(fmt::format("export-model --config {} --day 0 --case FCR_N --model-file {}", (dir / "run.conf").string(),
                        lp.string())) == 0);
  CHECK(testing::read_file(lp).find("Maximize") != std::string::npos);
}

TEST_CASE("exit codes") {
  testing::ScratchDir dir;
  testing::write_file(dir / "run.conf", kSmall);
  const auto conf = (dir / "run.conf").string();

  CHECK(run("run --config /nonexistent.conf") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run(fmt::format("run --config {} --case FCR_X", conf)) == 2);
  CHECK(run(fmt::format("export-model --config {} --day 5", conf)) == 2);
  CHECK(run(fmt::format("export-model --config {} --day 0 --format gms", conf)) == 2);

  testing::write_file(dir / "bad.conf", "days = 1\nfrequency_file = missing.csv\nprice_file = missing.csv\n");
  CHECK(run(fmt::format("run --config {} --out {}", (dir / "bad.conf").string(), (dir / "o1").string())) == 4);

  testing::write_file(dir / "nosolver.conf", std::string(kSmall) + "solver_command = exit 1\n");
  CHECK(run(fmt::format("run --config {} --out {}", (dir / "nosolver.conf").string(), (dir / "o2").string())) == 3);
}
