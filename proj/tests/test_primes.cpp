#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "drh/errors.hpp"
#include "drh/primes.hpp"
#include "oracles.hpp"

using namespace drh;

TEST_CASE("sieve_range small ranges") {
  const auto t = sieve_range(2, 30);
  CHECK(t.primes == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(sieve_range(26860, 26864).primes == std::vector<std::uint64_t>{26861, 26863});
  CHECK(sieve_range(2, 2).primes == std::vector<std::uint64_t>{2});
  CHECK(sieve_range(24, 28).primes.empty());
}

TEST_CASE("sieve_range matches the naive sieve and trial division") {
  const auto naive = oracle::naive_primes(1'000'000);
  const auto t = sieve_range(2, 1'000'000);
  CHECK(t.size() == 78498);
  CHECK(t.primes == naive);
  for (std::size_t i = 0; i < t.size(); i += 997) CHECK(oracle::is_prime_trial(t.primes[i]));
}

TEST_CASE("segmented and monolithic sieving agree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::uint64_t lo = 2 + rng() % 3'000'000;
    const std::uint64_t hi = lo + rng() % 400'000;
    const auto mono = sieve_range(lo, hi, {.segment_length = hi - lo + 1, .threads = 1});
    const std::uint64_t seg = 1 + rng() % 5000;
    const auto segmented = sieve_range(lo, hi, {.segment_length = seg, .threads = 3});
    CHECK(mono.primes == segmented.primes);
  }
  // Far from the origin, against trial division.
  const std::uint64_t lo = (std::uint64_t{1} << 40) - 2000;
  const auto t = sieve_range(lo, std::uint64_t{1} << 40, {.segment_length = 333, .threads = 2});
  std::vector<std::uint64_t> expected;
  for (auto n = lo; n <= (std::uint64_t{1} << 40); ++n) {
    if (oracle::is_prime_trial(n)) expected.push_back(n);
  }
  CHECK(t.primes == expected);
}

TEST_CASE("sieve_range errors") {
  CHECK_THROWS_AS(sieve_range(10, 5), ConfigError);
  CHECK_THROWS_AS(sieve_range(1, 5), ConfigError);
  CHECK_THROWS_AS(sieve_range(2, (std::uint64_t{1} << 40) + 1), CeilingError);
}

TEST_CASE("count_by_class") {
  const auto c = count_by_class(20, 4);
  CHECK(c.size() == 2);
  CHECK(c.at(1) == 3);
  CHECK(c.at(3) == 4);

  const auto before = count_by_class(26860, 4);
  CHECK(before.at(3) >= before.at(1));
  const auto at = count_by_class(26861, 4);
  CHECK(at.at(3) < at.at(1));

  for (const std::uint64_t x : {2ULL, 3ULL, 100ULL, 9999ULL, 123457ULL}) {
    const auto k = count_by_class(x, 4);
    CHECK(k.at(1) + k.at(3) + 1 == sieve_range(2, x).size());
  }
  CHECK_THROWS_AS(count_by_class(20, 0), ConfigError);
}

TEST_CASE("mertens_sum") {
  CHECK(mertens_sum(10) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
  CHECK(mertens_sum(10) == doctest::Approx(1.176190).epsilon(1e-6));
  double prev = 0.0;
  for (std::uint64_t x = 2; x < 5000; x += 37) {
    const double v = mertens_sum(x);
    CHECK(v >= prev);
    prev = v;
  }
  // Meissel-Mertens constant from a Python fsum oracle at x = 1e8.
  constexpr double kMertensOracle = 0.2615012429927339;
  const double c6 = mertens_sum(1'000'000) - std::log(std::log(1e6));
  CHECK(std::abs(c6 - kMertensOracle) <= 2e-3);
}

TEST_CASE("summation is reproducible across thread counts and segment lengths") {
  const double a = mertens_sum(3'000'000, {.segment_length = 1 << 16, .threads = 1});
  const double b = mertens_sum(3'000'000, {.segment_length = 1 << 16, .threads = 4});
  const double c = mertens_sum(3'000'000, {.segment_length = 1 << 16, .threads = 16});
  CHECK(a == b);
  CHECK(a == c);
  const double d = chebyshev_psi(3'000'000, RealCharacter::chi4(), {.segment_length = 1 << 18, .threads = 1});
  const double e = chebyshev_psi(3'000'000, RealCharacter::chi4(), {.segment_length = 1 << 18, .threads = 5});
  CHECK(d == e);
}

TEST_CASE("chebyshev_psi") {
  const double expected = 3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0);
  CHECK(chebyshev_psi(10) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(chebyshev_psi(10) == doctest::Approx(7.83201).epsilon(1e-6));
  CHECK(chebyshev_psi(10, RealCharacter::chi4()) == doctest::Approx(std::log(5.0) - std::log(7.0)));
  CHECK(chebyshev_psi(10, RealCharacter::chi4()) == doctest::Approx(-0.33647).epsilon(1e-4));
  CHECK(chebyshev_psi(1) == 0.0);
  CHECK(chebyshev_psi(100) == doctest::Approx(94.0453112293574).epsilon(1e-13));

  const auto chi4 = RealCharacter::chi4();
  for (const std::uint64_t x : {2ULL, 9ULL, 27ULL, 128ULL, 1000ULL, 4099ULL}) {
    CHECK(chebyshev_psi(x) == doctest::Approx(oracle::psi_by_definition(x, [](std::uint64_t) { return 1; })).epsilon(1e-12));
    CHECK(chebyshev_psi(x, chi4) == doctest::Approx(oracle::psi_by_definition(x, chi4)).epsilon(1e-12).scale(1.0));
  }
  double prev = 0.0;
  for (std::uint64_t x = 1; x < 3000; x += 7) {
    const double v = chebyshev_psi(x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("psi error diagnostic on a decade grid") {
  auto diag = [](double x) {
    return (chebyshev_psi(static_cast<std::uint64_t>(x)) - x) / (std::sqrt(x) * std::log(x));
  };
  // Oracle (Python, exact prime powers): 0.01454527, -0.02992307, -0.00953930.
  const double d4 = diag(1e4);
  const double d6 = diag(1e6);
  const double d8 = diag(1e8);
  CHECK(d4 == doctest::Approx(0.014545274899801952).epsilon(1e-9));
  CHECK(d6 == doctest::Approx(-0.029923071075274615).epsilon(1e-9));
  CHECK(d8 == doctest::Approx(-0.009539296607159563).epsilon(1e-7));
  CHECK(std::abs(d8) < std::abs(d4));
  CHECK(std::abs(d8) < std::abs(d6));
  // Schoenfeld's envelope |psi(x) - x| < sqrt(x) log^2(x) / (8 pi).
  for (const double x : {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8}) {
    CHECK(std::abs(diag(x)) < std::log(x) / (8 * std::numbers::pi));
  }
}

TEST_CASE("mangoldt") {
  CHECK(mangoldt(1).value == 0.0);
  CHECK(mangoldt(8).value == doctest::Approx(std::log(2.0)));
  CHECK(mangoldt(9).value == doctest::Approx(std::log(3.0)));
  CHECK(mangoldt(12).value == 0.0);
  for (std::uint64_t n = 1; n < 2000; ++n) {
    const bool prime_power = [&] {
      for (const auto p : oracle::naive_primes(n)) {
        std::uint64_t m = n;
        while (m % p == 0) m /= p;
        if (m == 1) return true;
      }
      return false;
    }();
    CHECK((mangoldt(n).value > 0) == prime_power);
  }
  CHECK_THROWS_AS(mangoldt(0), DomainError);
}

TEST_CASE("is_prime_u64 against trial division") {
  for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime_u64(n) == oracle::is_prime_trial(n));
  CHECK(is_prime_u64(4611685944339202049ULL));
  CHECK_FALSE(is_prime_u64(4611685944339202051ULL * 1));
}

TEST_CASE("prime cache round trip and corruption") {
  const auto dir = std::filesystem::temp_directory_path() / "drh_prime_cache_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "primes.prmt";
  const auto table = sieve_range(1000, 200000);
  write_prime_cache(path, table);
  const auto back = read_prime_cache(path);
  CHECK(back.lo == table.lo);
  CHECK(back.hi == table.hi);
  CHECK(back.primes == table.primes);

  // Header layout is fixed: magic, u32 version, u64 lo, u64 hi.
  const auto bytes = [&] {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  CHECK(bytes.substr(0, 4) == "PRMT");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[8]) == (1000 & 0xFF));
  CHECK(static_cast<unsigned char>(bytes[9]) == (1000 >> 8));
  // First gap 1009 - 1000 = 9, one varint byte.
  CHECK(static_cast<unsigned char>(bytes[24]) == 9);

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "PRMX";
  }
  CHECK_THROWS_AS(read_prime_cache(path), ValidationError);
  std::filesystem::remove_all(dir);
}
