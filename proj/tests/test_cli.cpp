#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "drh/cli.hpp"
#include "drh/errors.hpp"
#include "drh/primes.hpp"
#include "drh/satake.hpp"
#include "oracles.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result drhlab(std::vector<std::string> args) {
  args.insert(args.begin(), "drhlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = drh::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("drhlab_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("grid parsing") {
  const auto g = drh::cli::parse_grid("100:10:3");
  CHECK(g.points() == std::vector<double>{100, 1000, 10000});
  CHECK(drh::cli::parse_grid("2:1.1:5").points() == std::vector<double>{2, 3});  // rounding dedup
  CHECK_THROWS_AS(drh::cli::parse_grid("100:10"), drh::ConfigError);
  CHECK_THROWS_AS(drh::cli::parse_grid("100:0.5:3"), drh::ConfigError);
  CHECK_THROWS_AS(drh::cli::parse_grid("1:10:3"), drh::ConfigError);
  CHECK_THROWS_AS(drh::cli::parse_grid("100:10:x"), drh::ConfigError);
}

TEST_CASE("tau command and cache") {
  const auto dir = scratch("tau");
  const auto r = drhlab({"tau", "--tau-n", "10", "--cache-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto naive = oracle::naive_tau(10);
  REQUIRE(j["first_values"].size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(j["first_values"][i].get<std::string>() == drh::to_string(naive[i]));
  }
  CHECK(j["validation"]["ok"].get<bool>());

  const auto cache = dir / "tau_10.tauc";
  REQUIRE(fs::exists(cache));
  const auto stamp = fs::last_write_time(cache);
  const auto again = drhlab({"tau", "--tau-n", "10", "--cache-dir", dir.string()});
  CHECK(again.out == r.out);
  CHECK(fs::last_write_time(cache) == stamp);

  // A damaged cache is replaced, and the answer does not change.
  {
    std::fstream f(cache, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(20);
    f.put('\x7f');
  }
  const auto repaired = drhlab({"tau", "--tau-n", "10", "--cache-dir", dir.string()});
  CHECK(repaired.code == 0);
  CHECK(repaired.out == r.out);
  CHECK(repaired.err.find("warning") != std::string::npos);

  CHECK(drhlab({"tau", "--tau-n", "5000000", "--cache-dir", ""}).code == 3);
}

TEST_CASE("exit codes") {
  CHECK(drhlab({"euler", "--family", "bogus"}).code == 2);
  CHECK(drhlab({"sieve", "--grid", "100:10"}).code == 2);
  CHECK(drhlab({"sieve", "--x-max", "2000000000000"}).code == 3);
  CHECK(drhlab({"sieve", "--x-max", "1000", "--grid", "100:10:3"}).code == 2);
  CHECK(drhlab({"euler", "--family", "delta", "--x-max", "1000", "--tau-n", "500",
                "--cache-dir", ""}).code == 2);
  CHECK(drhlab({}).code == 2);
  CHECK(drhlab({"--help"}).code == 0);
}

TEST_CASE("bias command") {
  const auto dir = scratch("bias");
  const auto out = (dir / "d0.csv").string();
  REQUIRE(drhlab({"bias", "--family", "chi4", "--s", "0", "--x-max", "30000", "--out", out}).code == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"x", "value", "running_loglog_ratio"});
  const auto report = json::parse(slurp(out + ".summary.json"));
  bool found = false;
  for (const auto& c : report["crossings"]) {
    found = found || (c["x"].get<double>() == 26861.0 && !c["zero_touch"].get<bool>());
  }
  CHECK(found);

  const auto half = drhlab({"bias", "--family", "chi4", "--s", "0.5", "--x-max", "1000000"});
  REQUIRE(half.code == 0);
  const auto half_rows = parse_csv(half.out);
  for (std::size_t i = 1; i < half_rows.size(); ++i) REQUIRE(std::stod(half_rows[i][1]) > 0.0);

  const auto dout = (dir / "t.csv").string();
  REQUIRE(drhlab({"bias", "--family", "delta", "--x-max", "1000000", "--out", dout,
                  "--cache-dir", (dir / "cache").string()}).code == 0);
  CHECK(json::parse(slurp(dout + ".summary.json"))["natural_density"].get<double>() >= 0.95);
}

TEST_CASE("euler command") {
  const auto r = drhlab({"euler", "--family", "chi4", "--x-max", "100000", "--validate"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows[0][5] == "identity_gap");
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(std::stod(rows[i][5]) <= 1e-9);
  CHECK(rows[1][0] == "100");
  double direct = 1.0;
  for (const auto p : oracle::naive_primes(100)) {
    const double chi = p % 4 == 1 ? 1.0 : (p % 4 == 3 ? -1.0 : 0.0);
    direct /= 1.0 - chi / std::sqrt(static_cast<double>(p));
  }
  CHECK(std::stod(rows[1][1]) == doctest::Approx(std::log(direct)).epsilon(1e-13));

  const auto d = drhlab({"euler", "--family", "delta", "--x-max", "100000", "--cache-dir", ""});
  REQUIRE(d.code == 0);
  const auto drows = parse_csv(d.out);
  const double ratio = std::stod(drows.back()[8]);
  CHECK(std::isfinite(ratio));
  CHECK(ratio > 0.0);
}

TEST_CASE("akatsuka command") {
  const auto dir = scratch("akatsuka");
  const auto out = (dir / "a.csv").string();
  const auto r = drhlab({"akatsuka", "--grid", "1000:10:4", "--validate", "--out", out});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"x", "re_ratio", "im_ratio", "abs_ratio"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (i > 1) CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
    CHECK(std::isfinite(std::stod(rows[i][3])));
  }
  CHECK(json::parse(slurp(out + ".summary.json"))["normalizer_max_deviation"].get<double>() <= 1e-6);

  const auto psi = parse_csv(drhlab({"akatsuka", "--psi", "--grid", "100:100:3"}).out);
  REQUIRE(psi.size() == 4);
  CHECK(std::stod(psi[3][1]) == drh::chebyshev_psi(1000000));
  CHECK(psi[1][1] == "94.045311229357395");
}

TEST_CASE("config file and precedence") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.ini";
  std::ofstream(cfg) << "x-max=1000\nfamily=chi4\n";
  const auto from_file = drhlab({"sieve", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  CHECK(parse_csv(from_file.out).back()[0] == "1000");
  const auto overridden = drhlab({"sieve", "--config", cfg.string(), "--x-max", "500"});
  CHECK(parse_csv(overridden.out).back()[0] == "500");
}

TEST_CASE("thread count does not change output") {
  for (const auto* cmd : {"sieve", "euler"}) {
    const auto a = drhlab({cmd, "--x-max", "200000", "--threads", "1"});
    const auto b = drhlab({cmd, "--x-max", "200000", "--threads", "5"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("validate command") {
  const auto r = drhlab({"validate", "--tau-n", "20000", "--x-max", "20000", "--cache-dir", ""});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["ok"].get<bool>());
}
