#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "isogeo/estimate.hpp"
#include "isogeo/rng.hpp"
#include "isogeo/special.hpp"

using namespace isogeo;

TEST_CASE("identical seeds give identical streams", "[rng]") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds separate purposes, chunks and sub-indices", "[rng]") {
  const std::uint64_t base = derive_seed(7, streams::kPoints, 0, 0);
  CHECK(base != derive_seed(8, streams::kPoints, 0, 0));
  CHECK(base != derive_seed(7, streams::kSphere, 0, 0));
  CHECK(base != derive_seed(7, streams::kPoints, 1, 0));
  CHECK(base != derive_seed(7, streams::kPoints, 0, 1));
}

TEST_CASE("uniform moments", "[rng]") {
  Rng rng(99);
  RunningStat stat;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    stat.add(u);
  }
  CHECK(std::fabs(stat.mean() - 0.5) < 4.0 * stat.se());
  // variance of U(0,1) is 1/12; SE of the sample variance ~ sqrt(var of (u-1/2)^2 / n)
  CHECK(stat.variance() == Catch::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal moments", "[rng]") {
  Rng rng(1234);
  RunningStat stat, absolute;
  const int count = 400000;
  double z0, z1;
  for (int i = 0; i < count / 2; ++i) {
    rng.normal_pair(&z0, &z1);
    stat.add(z0);
    stat.add(z1);
    absolute.add(std::fabs(z0));
    absolute.add(std::fabs(z1));
  }
  CHECK(std::fabs(stat.mean()) < 4.0 * stat.se());
  CHECK(stat.variance() == Catch::Approx(1.0).epsilon(0.02));
  // E|Z| = sqrt(2/pi)
  CHECK(std::fabs(absolute.mean() - std::sqrt(2.0 / kPi)) < 4.0 * absolute.se());
}

TEST_CASE("gamma moments across the shape boost boundary", "[rng]") {
  for (double shape : {0.5, 1.0, 2.5}) {
    Rng rng(static_cast<std::uint64_t>(shape * 1000) + 5);
    RunningStat stat;
    const int count = 300000;
    for (int i = 0; i < count; ++i) stat.add(rng.gamma(shape));
    INFO("shape=" << shape);
    CHECK(std::fabs(stat.mean() - shape) < 4.0 * stat.se());
    CHECK(stat.variance() == Catch::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("exponential mean", "[rng]") {
  Rng rng(777);
  RunningStat stat;
  for (int i = 0; i < 200000; ++i) stat.add(rng.exponential());
  CHECK(std::fabs(stat.mean() - 1.0) < 4.0 * stat.se());
}

TEST_CASE("running stat merge equals sequential accumulation", "[rng]") {
  Rng rng(42);
  RunningStat whole, left, right;
  std::vector<double> values(10001);
  for (auto& v : values) v = rng.normal();
  for (std::size_t i = 0; i < values.size(); ++i) {
    whole.add(values[i]);
    (i < 5000 ? left : right).add(values[i]);
  }
  left.merge(right);
  CHECK(left.count() == whole.count());
  CHECK(left.mean() == Catch::Approx(whole.mean()).epsilon(1e-12));
  CHECK(left.variance() == Catch::Approx(whole.variance()).epsilon(1e-12));
}
