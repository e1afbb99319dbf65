#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "drh/errors.hpp"
#include "drh/primes.hpp"
#include "drh/tau.hpp"
#include "oracles.hpp"

using namespace drh;

TEST_CASE("naive oracle reproduces the first coefficients") {
  const auto tau = oracle::naive_tau(8);
  const std::vector<__int128> expected{1, -24, 252, -1472, 4830, -6048, -16744, 84480};
  CHECK(tau == expected);
  CHECK(tau[5] == tau[1] * tau[2]);                  // tau(6) = tau(2) tau(3)
  CHECK(tau[3] == tau[1] * tau[1] - 2048 * tau[0]);  // tau(4) = tau(2)^2 - 2^11
}

TEST_CASE("build_tau_table small") {
  const auto t = build_tau_table(7);
  const std::vector<__int128> expected{1, -24, 252, -1472, 4830, -6048, -16744};
  CHECK(std::vector<__int128>(t.values().begin(), t.values().end()) == expected);
  CHECK(build_tau_table(1).at(1) == 1);
  CHECK_THROWS_AS((void)t.at(0), ConfigError);
  CHECK_THROWS_AS((void)t.at(8), ConfigError);
}

TEST_CASE("build_tau_table equals the naive oracle for N = 3000") {
  const auto naive = oracle::naive_tau(3000);
  const auto t = build_tau_table(3000);
  REQUIRE(t.size() == 3000);
  CHECK(std::equal(naive.begin(), naive.end(), t.values().begin()));
}

TEST_CASE("transform backend independence") {
  const auto a = build_tau_table(20000);
  TauOptions alt;
  alt.moduli.assign(alternate_tau_moduli().begin(), alternate_tau_moduli().end());
  CHECK(build_tau_table(20000, alt) == a);
  TauOptions four;
  four.moduli.push_back(tau_check_modulus());
  CHECK(build_tau_table(20000, four) == a);
  TauOptions checked;
  checked.self_check = true;
  checked.threads = 4;
  CHECK(build_tau_table(20000, checked) == a);
}

TEST_CASE("build_tau_table errors") {
  CHECK_THROWS_AS(build_tau_table(0), ConfigError);
  CHECK_THROWS_AS(build_tau_table(kTauCeiling + 1), CeilingError);
  TauOptions tiny;
  tiny.moduli = {998244353, 754974721};
  CHECK_THROWS_AS(build_tau_table(1000, tiny), ConfigError);
}

TEST_CASE("validate_tau_table on an exact table") {
  const auto t = build_tau_table(50000);
  const auto report = validate_tau_table(t);
  CHECK(report.ok());
  CHECK(report.primes_checked == 5133);
  CHECK(report.square_relations_checked == 48);  // primes up to 223
  CHECK(report.coprime_pairs_checked > 100000);
  CHECK(report.first_failure.empty());
}

TEST_CASE("validate_tau_table catches corruption") {
  const auto good = build_tau_table(2000);
  std::vector<Int128> v(good.values().begin(), good.values().end());
  v[6 - 1] += 1;  // tau(6)
  const auto report = validate_tau_table(TauTable(v));
  CHECK_FALSE(report.multiplicative);
  CHECK(report.deligne);

  std::vector<Int128> w(good.values().begin(), good.values().end());
  w[9 - 1] += 1;  // tau(9)
  CHECK_FALSE(validate_tau_table(TauTable(w)).hecke_square);

  std::vector<Int128> z(good.values().begin(), good.values().end());
  z[2 - 1] = -200;  // |tau(2)| must stay below 2 * 2^5.5 ~ 90.5
  const auto bad = validate_tau_table(TauTable(z));
  CHECK_FALSE(bad.deligne);
  CHECK_FALSE(bad.first_failure.empty());
}

TEST_CASE("lambda_of and theta_of") {
  const auto t = build_tau_table(5000);
  CHECK(lambda_of(1, t) == 1.0);
  CHECK(lambda_of(2, t) == doctest::Approx(-0.5303300859).epsilon(1e-10));
  for (const auto p : sieve_range(2, 5000)) CHECK(std::abs(lambda_of(p, t)) < 2.0);
  CHECK_THROWS_AS(lambda_of(5001, t), ConfigError);

  CHECK(theta_from_lambda(0.0) == doctest::Approx(std::numbers::pi / 2));
  // arccos(-24 / 2^6.5) and arccos(252 / (2 * 3^5.5)), evaluated at 30 digits.
  CHECK(theta_of(2, t).theta == doctest::Approx(1.83917141540925226).epsilon(1e-14));
  CHECK(theta_of(3, t).theta == doctest::Approx(1.26676737097407691).epsilon(1e-14));
  CHECK(lambda_of(3, t) == doctest::Approx(252.0 / std::pow(3.0, 5.5)).epsilon(1e-15));

  CHECK(theta_from_lambda(2.0 + 1e-13) == 0.0);
  CHECK(theta_from_lambda(-2.0 - 1e-13) == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(theta_from_lambda(2.0 + 1e-9), ValidationError);
}

TEST_CASE("Satake angle reproduces tau(p)") {
  const auto t = build_tau_table(100000);
  std::size_t within_4ulp = 0;
  std::size_t total = 0;
  for (const auto p : sieve_range(2, 100000)) {
    const auto angle = theta_of(p, t);
    CHECK(angle.theta >= 0.0);
    CHECK(angle.theta <= std::numbers::pi);
    const double envelope = 2.0 * std::pow(static_cast<double>(p), 5.5);
    const double back = envelope * std::cos(angle.theta);
    const auto exact = static_cast<double>(t[p]);
    ++total;
    if (std::abs(back - exact) <= 4 * std::abs(std::nextafter(exact, INFINITY) - exact)) ++within_4ulp;
    // Measured on the envelope's scale, the round trip is always within 4 ulps.
    CHECK(std::abs(back - exact) <= 4 * (std::nextafter(envelope, INFINITY) - envelope));
  }
  MESSAGE("primes within 4 ulps of tau(p) itself: " << within_4ulp << " / " << total);
}

TEST_CASE("tau cache round trip, layout and checksum") {
  const auto dir = std::filesystem::temp_directory_path() / "drh_tau_cache_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "tau.tauc";
  const auto t = build_tau_table(1000);
  write_tau_cache(path, t);
  CHECK(read_tau_cache(path) == t);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 16 * 1000 + 8);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  CHECK(bytes.substr(0, 4) == "TAUC");
  // tau(2) = -24: two's complement low word 0xffffffffffffffe8, high word all ones.
  CHECK(static_cast<unsigned char>(bytes[16 + 16]) == 0xe8);
  CHECK(static_cast<unsigned char>(bytes[16 + 31]) == 0xff);

  bytes[16 + 16 * 5] ^= 0x01;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_tau_cache(path), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("to_string") {
  CHECK(to_string(0) == "0");
  CHECK(to_string(-16744) == "-16744");
  CHECK(to_string(static_cast<Int128>(1) << 100) == "1267650600228229401496703205376");
  CHECK(to_string(-(static_cast<Int128>(1) << 126)) == "-85070591730234615865843651857942052864");
}
