#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "icll/rng.hpp"

using icll::Rng;

TEST_CASE("rng streams are deterministic for equal seeds") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("derive_seed separates streams by tag and is order sensitive") {
  const auto s1 = icll::derive_seed(7, 1, 2);
  const auto s2 = icll::derive_seed(7, 2, 1);
  const auto s3 = icll::derive_seed(8, 1, 2);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(icll::derive_seed(7, 1, 2) == s1);
}

TEST_CASE("derive_seed_str distinguishes labels") {
  CHECK(icll::derive_seed_str(0, "model") != icll::derive_seed_str(0, "resample"));
  CHECK(icll::derive_seed_str(0, "model") == icll::derive_seed_str(0, "model"));
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below respects its bound and covers small ranges") {
  Rng r(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal deviates have plausible first moments") {
  Rng r(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle permutes and is seed reproducible") {
  std::vector<int> v1{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<int> v2 = v1;
  Rng a(3), b(3);
  a.shuffle(v1);
  b.shuffle(v2);
  CHECK(v1 == v2);
  std::vector<int> sorted = v1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("sample_without_replacement yields k distinct in-range indices") {
  Rng r(13);
  const auto picks = r.sample_without_replacement(20, 8);
  CHECK(picks.size() == 8);
  std::set<Eigen::Index> uniq(picks.begin(), picks.end());
  CHECK(uniq.size() == 8);
  for (auto p : picks) {
    CHECK(p >= 0);
    CHECK(p < 20);
  }
  const auto all = r.sample_without_replacement(5, 5);
  std::set<Eigen::Index> full(all.begin(), all.end());
  CHECK(full.size() == 5);
}
