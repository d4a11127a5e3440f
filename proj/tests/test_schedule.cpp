#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "samplemine/errors.hpp"
#include "samplemine/schedule.hpp"

using namespace samplemine;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ApproxParams{0, 1, 0.1, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ApproxParams{5, 0, 0.1, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ApproxParams{5, 1, 0.0, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ApproxParams{5, 1, 1.0, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ApproxParams{5, 1, 0.1, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ApproxParams{5, 1, 0.1, 1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((ApproxParams{5, 1, 0.1, 0.1}.validate()));
}

TEST_CASE("universe_count: exact binomial sums") {
  CHECK(universe_count(7, 1) == 7);
  CHECK(universe_count(5, 2) == 15);
  CHECK(universe_count(10, 10) == 1023);  // all non-empty subsets
  CHECK(universe_count(4, 3) == 14);
  CHECK(universe_count(41270, 1) == 41270);
  CHECK(universe_count(41270, 2) == big_int("851627085"));
  CHECK(universe_count(41270, 3) == big_int("11715266098225"));
  CHECK_THROWS_AS(universe_count(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(universe_count(5, 6), std::invalid_argument);
}

TEST_CASE("one-shot sample bound: pinned values and monotonicity") {
  const ApproxParams p{100, 1, 0.02, 0.1};
  CHECK(sufficient_sample_size(p, universe_count(41270, 1)) == 87766);
  ApproxParams p2 = p;
  p2.w = 2;
  CHECK(sufficient_sample_size(p2, universe_count(41270, 2)) == 137452);
  ApproxParams p3 = p;
  p3.w = 3;
  CHECK(sufficient_sample_size(p3, universe_count(41270, 3)) == 185098);

  SUBCASE("grows with the universe") {
    CHECK(sufficient_sample_size(p, 20000) < sufficient_sample_size(p, 2000000));
  }
  SUBCASE("shrinks with looser accuracy") {
    ApproxParams loose = p;
    loose.eps = 0.05;
    CHECK(sufficient_sample_size(loose, 41270) < sufficient_sample_size(p, 41270));
  }
  SUBCASE("grows as delta tightens") {
    ApproxParams tight = p;
    tight.delta = 0.01;
    CHECK(sufficient_sample_size(tight, 41270) > sufficient_sample_size(p, 41270));
  }
  SUBCASE("k beyond the universe throws") {
    const ApproxParams bad{50, 1, 0.1, 0.1};
    CHECK_THROWS_AS(sufficient_sample_size(bad, 10), std::invalid_argument);
  }
  SUBCASE("eps so small the bound leaves 64 bits") {
    const ApproxParams tiny{5, 1, 1e-12, 0.1};
    CHECK_THROWS_AS(sufficient_sample_size(tiny, 1000), resource_error);
  }
}

TEST_CASE("tail bounds") {
  CHECK_THROWS_AS(tail_bounds(0.1, 0), std::invalid_argument);

  const auto a = tail_bounds(0.1, 1000);
  CHECK(a.swap == doctest::Approx(std::exp(-0.01 * 1000 / 2.0)));
  CHECK(a.deviation == doctest::Approx(2.0 * std::exp(-0.01 * 1000 / 2.0)));

  const auto b = tail_bounds(0.1, 4000);
  CHECK(b.swap < a.swap);
  CHECK(b.deviation < a.deviation);
  CHECK(tail_bounds(0.01, 10).deviation == 1.0);  // clamped
}

TEST_CASE("exact frequency-gap comparison has no floating-point ties") {
  // eps = 0.25 is exactly representable: gap of 4/8 against 2*eps = 1/2 is
  // equality, which must NOT count as exceeding.
  CHECK_FALSE(frequency_gap_exceeds(6, 2, 8, 2, 0.25));
  CHECK(frequency_gap_exceeds(7, 2, 8, 2, 0.25));
  CHECK_FALSE(frequency_gap_exceeds(2, 6, 8, 2, 0.25));  // reversed gap
  CHECK_FALSE(frequency_gap_exceeds(5, 5, 8, 1, 0.25));
}

TEST_CASE("phase sizes: pinned first phase, growth, geometric floor") {
  const ApproxParams p{100, 1, 0.02, 0.1};
  const auto sched = make_schedule(p, 41270);
  CHECK(sched.phase_size(0) == 179744);
  CHECK(sched.phase_size(1) > sched.phase_size(0));
  CHECK(sched.phase_size(2) > sched.phase_size(1));

  const auto geo = make_schedule(p, 41270, kNoDatasetSize, 1.5);
  for (std::uint32_t j = 0; j < 4; ++j) {
    CHECK(geo.phase_size(j) >= sched.phase_size(j));
    const double floor_j = 179744.0 * std::pow(1.5, j);
    CHECK(static_cast<double>(geo.phase_size(j)) >= floor_j - 1.0);
  }
  CHECK(geo.phase_size(0) == sched.phase_size(0));
}

TEST_CASE("schedule bound and j_max") {
  const ApproxParams p{100, 1, 0.02, 0.1};
  SUBCASE("without a dataset the bound is the one-shot size") {
    const auto sched = make_schedule(p, 41270);
    CHECK(sched.sufficient == 87766);
    CHECK(sched.bound == 87766);
    // t_0 = 179744 already covers the bound: no progressive phase helps.
    CHECK(sched.j_max == 0);
  }
  SUBCASE("a small dataset caps the bound") {
    const auto sched = make_schedule(p, 41270, 50000);
    CHECK(sched.bound == 50000);
    CHECK(sched.j_max == 0);
  }
  SUBCASE("j_max is the first phase reaching the bound") {
    // Large universe pushes the one-shot bound past t_0.
    const ApproxParams q{10, 2, 0.25, 0.1};
    const auto sched = make_schedule(q, 90000, 789996);
    CHECK(sched.sufficient == 862);
    CHECK(sched.phase_size(0) == 856);
    CHECK(sched.j_max == 1);
    CHECK(sched.phase_size(sched.j_max) >= sched.bound);
    CHECK(sched.phase_size(sched.j_max - 1) < sched.bound);
  }
}

TEST_CASE("bucket widths: squared-exponent growth from the base width") {
  // K=2, m=15: widths 2, 128 with prefix sums 2, 130; the bucket after rank
  // 131 would start outside the universe, so h = 1.
  const ApproxParams p{2, 1, 0.3, 0.1};
  auto sched = make_schedule(p, 15);
  const auto bw = bucket_widths(sched, 0);
  CHECK(bw.sigma == 2.0);
  REQUIRE(bw.s.size() == 2);
  CHECK(bw.s[0] == 2);
  CHECK(bw.s[1] == 128);
  CHECK(bw.S[0] == 2);
  CHECK(bw.S[1] == 130);
  CHECK(bw.h == 1);
}

TEST_CASE("bucket base width scales by e/2 per phase") {
  const ApproxParams p{10, 2, 0.25, 0.1};
  const auto sched = make_schedule(p, 90000, 789996);
  const double e = std::exp(1.0);
  CHECK(bucket_widths(sched, 0).sigma == doctest::Approx(10.0));
  CHECK(bucket_widths(sched, 1).sigma == doctest::Approx(10.0 * e / 2.0));
  CHECK(bucket_widths(sched, 2).sigma == doctest::Approx(10.0 * e * e / 4.0));
}

TEST_CASE("bucket prefix sums stay within one clamp of the universe") {
  const ApproxParams p{10, 2, 0.25, 0.1};
  const auto sched = make_schedule(p, 90000, 789996);
  for (std::uint32_t j = 0; j < 2; ++j) {
    const auto bw = bucket_widths(sched, j);
    REQUIRE(bw.s.size() == bw.S.size());
    REQUIRE(bw.s.size() == static_cast<std::size_t>(bw.h) + 1);
    big_int running = 0;
    for (std::size_t i = 0; i < bw.s.size(); ++i) {
      CHECK(bw.s[i] >= 1);
      running += bw.s[i];
      CHECK(bw.S[i] == running);
      if (i > 0) CHECK(bw.s[i] > bw.s[i - 1]);
    }
    // Every bucket 1..h starts inside the universe.
    for (std::size_t i = 1; i < bw.S.size(); ++i) CHECK(bw.S[i - 1] + 1 <= sched.m);
    // The bucket after h would not.
    CHECK(bw.S[bw.h] + 1 > sched.m);
  }
}
