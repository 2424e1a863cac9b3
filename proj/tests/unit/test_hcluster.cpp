#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "icll/distance.hpp"
#include "icll/hcluster.hpp"
#include "icll/rng.hpp"
#include "oracles.hpp"

using icll::pairwise_euclidean;
using icll::ward_linkage;

TEST_CASE("pairwise distances follow the 3-4-5 triangle") {
  Eigen::MatrixXd x(2, 2);
  x << 0.0, 0.0,
       3.0, 4.0;
  const auto d = pairwise_euclidean(x);
  CHECK(d(0, 1) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(d(1, 0) == d(0, 1));
  CHECK(d(0, 0) == 0.0);
}

TEST_CASE("duplicated points are at distance zero") {
  Eigen::MatrixXd x(3, 2);
  x << 1.0, 2.0,
       1.0, 2.0,
       4.0, 6.0;
  const auto d = pairwise_euclidean(x);
  CHECK(d(0, 1) == 0.0);
  CHECK(d(0, 2) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("pairwise distances match a per-pair loop to 1e-12") {
  icll::Rng rng(101);
  const auto x = oracles::random_matrix(rng, 6, 3);
  const auto d = pairwise_euclidean(x);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      double sq = 0.0;
      for (Eigen::Index c = 0; c < 3; ++c) {
        const double diff = x(i, c) - x(j, c);
        sq += diff * diff;
      }
      CHECK(d(i, j) == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-finite input is rejected") {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pairwise_euclidean(x), std::invalid_argument);
}

TEST_CASE("merging two singletons records their distance as the height") {
  Eigen::MatrixXd x(2, 2);
  x << 0.0, 0.0,
       3.0, 4.0;
  const auto tree = ward_linkage(pairwise_euclidean(x));
  REQUIRE(tree.merges.size() == 1);
  CHECK(tree.merges[0].left == 0);
  CHECK(tree.merges[0].right == 1);
  CHECK(tree.merges[0].height == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(tree.merges[0].size == 2);
}

TEST_CASE("ward heights are non-decreasing and the final size is n") {
  icll::Rng rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const auto n = static_cast<Eigen::Index>(3 + rng.below(20));
    const auto p = static_cast<Eigen::Index>(1 + rng.below(4));
    const auto x = oracles::random_matrix(rng, n, p);
    const auto tree = ward_linkage(pairwise_euclidean(x));
    REQUIRE(tree.merges.size() == static_cast<std::size_t>(n - 1));
    for (std::size_t t = 1; t < tree.merges.size(); ++t) {
      CHECK(tree.merges[t].height >= tree.merges[t - 1].height);
    }
    CHECK(tree.merges.back().size == n);
  }
}

TEST_CASE("ward heights match the sse-increase oracle on random sets") {
  icll::Rng rng(303);
  for (int rep = 0; rep < 25; ++rep) {
    const auto n = static_cast<Eigen::Index>(4 + rng.below(12));
    const auto p = static_cast<Eigen::Index>(1 + rng.below(5));
    const auto x = oracles::random_matrix(rng, n, p);
    const auto tree = ward_linkage(pairwise_euclidean(x));
    const auto brute = oracles::brute_force_ward(x);
    REQUIRE(tree.merges.size() == brute.size());
    for (std::size_t t = 0; t < brute.size(); ++t) {
      CHECK(tree.merges[t].height == doctest::Approx(brute[t].height).epsilon(1e-9));
      CHECK(tree.merges[t].left == brute[t].left);
      CHECK(tree.merges[t].right == brute[t].right);
      CHECK(tree.merges[t].size == brute[t].size);
    }
  }
}

TEST_CASE("merge ties break toward the smallest id pair") {
  // Four collinear equidistant points: the first merge has three candidates
  // at distance 1, and the smallest pair (0,1) must win.
  Eigen::MatrixXd x(4, 1);
  x << 0.0, 1.0, 2.0, 3.0;
  const auto tree = ward_linkage(pairwise_euclidean(x));
  CHECK(tree.merges[0].left == 0);
  CHECK(tree.merges[0].right == 1);
  CHECK(tree.merges[1].left == 2);
  CHECK(tree.merges[1].right == 3);
}

TEST_CASE("cut statistics on equal heights collapse sigma to zero") {
  icll::LinkageTree tree;
  tree.n_leaves = 3;
  const double e = std::exp(1.0);
  tree.merges = {{0, 1, e, 2}, {2, 3, e, 3}};
  const auto params = icll::cut_parameters(tree);
  CHECK(params.mu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(params.sigma == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(params.tau == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cut statistics for heights e and e^3") {
  icll::LinkageTree tree;
  tree.n_leaves = 3;
  tree.merges = {{0, 1, std::exp(1.0), 2}, {2, 3, std::exp(3.0), 3}};
  const auto params = icll::cut_parameters(tree);
  CHECK(params.mu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(params.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(params.tau == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cut statistics match an independent recomputation") {
  icll::Rng rng(404);
  for (int rep = 0; rep < 10; ++rep) {
    const auto n = static_cast<Eigen::Index>(5 + rng.below(15));
    const auto x = oracles::random_matrix(rng, n, 3);
    const auto tree = ward_linkage(pairwise_euclidean(x));
    const auto params = icll::cut_parameters(tree);

    // Spreadsheet-style recomputation over positive heights only.
    std::vector<double> logs;
    for (const auto& m : tree.merges)
      if (m.height > 0.0) logs.push_back(std::log(m.height));
    double mu = 0.0;
    for (double v : logs) mu += v;
    mu /= static_cast<double>(logs.size());
    double var = 0.0;
    for (double v : logs) var += (v - mu) * (v - mu);
    var /= static_cast<double>(logs.size());
    const double sigma = std::sqrt(var);

    CHECK(params.mu == doctest::Approx(mu).epsilon(1e-12));
    CHECK(params.sigma == doctest::Approx(sigma).epsilon(1e-12));
    CHECK(params.tau == params.mu + params.sigma);
  }
}

TEST_CASE("zero heights are excluded from the cut statistics") {
  Eigen::MatrixXd x(3, 1);
  x << 2.0, 2.0, 7.0;  // one duplicate pair, one positive merge
  const auto tree = ward_linkage(pairwise_euclidean(x));
  const auto params = icll::cut_parameters(tree);
  // Only the positive merge contributes, so sigma is zero.
  CHECK(params.sigma == 0.0);
  CHECK(params.tau == params.mu);
}

TEST_CASE("fully duplicated data raises the degenerate cut error") {
  Eigen::MatrixXd x(4, 2);
  x << 1.0, 1.0,
       1.0, 1.0,
       1.0, 1.0,
       1.0, 1.0;
  const auto tree = ward_linkage(pairwise_euclidean(x));
  CHECK_THROWS_AS(icll::cut_parameters(tree), icll::DegenerateCutError);
}

TEST_CASE("extreme taus give one cluster or all singletons") {
  icll::Rng rng(505);
  const auto x = oracles::random_matrix(rng, 9, 2);
  const auto tree = ward_linkage(pairwise_euclidean(x));
  const double top = std::log(tree.merges.back().height);
  const double bottom = std::log(tree.merges.front().height);

  const auto one = icll::form_clusters(tree, top + 1.0);
  CHECK(one.k == 1);
  for (Eigen::Index i = 0; i < 9; ++i) CHECK(one.cluster_of[i] == 0);

  const auto singletons = icll::form_clusters(tree, bottom - 1.0);
  CHECK(singletons.k == 9);
  std::set<int> ids;
  for (Eigen::Index i = 0; i < 9; ++i) ids.insert(singletons.cluster_of[i]);
  CHECK(ids.size() == 9);
}

TEST_CASE("two separated blobs split at the automatic cut") {
  // Eight points: a tight blob near the origin and one near (10, 10).
  Eigen::MatrixXd x(8, 2);
  x << 0.0, 0.0,
       0.1, 0.0,
       0.0, 0.1,
       0.1, 0.1,
       10.0, 10.0,
       10.1, 10.0,
       10.0, 10.1,
       10.1, 10.1;
  const auto clustering = icll::cluster(x);
  CHECK(clustering.k == 2);
  CHECK(clustering.cluster_of[0] == 0);  // ids numbered by first appearance
  CHECK(clustering.cluster_of[4] == 1);
  for (Eigen::Index i = 1; i < 4; ++i) CHECK(clustering.cluster_of[i] == 0);
  for (Eigen::Index i = 5; i < 8; ++i) CHECK(clustering.cluster_of[i] == 1);

  const auto tree = ward_linkage(pairwise_euclidean(x));
  const auto params = icll::cut_parameters(tree);
  const auto oracle = oracles::exhaustive_cut(tree, params.tau);
  CHECK(clustering.cluster_of == oracle);
}

TEST_CASE("form_clusters matches the exhaustive subtree oracle") {
  icll::Rng rng(606);
  for (int rep = 0; rep < 40; ++rep) {
    const auto n = static_cast<Eigen::Index>(4 + rng.below(17));  // n <= 20
    const auto p = static_cast<Eigen::Index>(1 + rng.below(3));
    auto x = oracles::random_matrix(rng, n, p);
    if (rep % 3 == 0) x.row(0) = x.row(1);  // exercise duplicate handling
    const auto tree = ward_linkage(pairwise_euclidean(x));

    // Probe the automatic cut plus a sweep of arbitrary thresholds.
    std::vector<double> taus;
    bool has_positive = false;
    for (const auto& m : tree.merges)
      if (m.height > 0.0) has_positive = true;
    if (has_positive) taus.push_back(icll::cut_parameters(tree).tau);
    for (const auto& m : tree.merges)
      if (m.height > 0.0) taus.push_back(std::log(m.height));
    taus.push_back(-50.0);
    taus.push_back(50.0);

    for (double tau : taus) {
      const auto got = icll::form_clusters(tree, tau);
      const auto want = oracles::exhaustive_cut(tree, tau);
      CHECK(got.cluster_of == want);
      CHECK(got.k == want.maxCoeff() + 1);
    }
  }
}

TEST_CASE("raising tau never increases the cluster count") {
  icll::Rng rng(707);
  const auto x = oracles::random_matrix(rng, 15, 2);
  const auto tree = ward_linkage(pairwise_euclidean(x));
  int prev_k = std::numeric_limits<int>::max();
  for (double tau = -6.0; tau <= 6.0; tau += 0.25) {
    const int k = icll::form_clusters(tree, tau).k;
    CHECK(k <= prev_k);
    prev_k = k;
  }
}

TEST_CASE("dendrogram export is one merge per line") {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 1.0, 5.0;
  const auto tree = ward_linkage(pairwise_euclidean(x));
  std::ostringstream out;
  icll::write_dendrogram(tree, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    int left, right, size;
    double height;
    std::istringstream cells(line);
    CHECK((cells >> left >> right >> height >> size));
    CHECK(left == tree.merges[count].left);
    CHECK(right == tree.merges[count].right);
    CHECK(size == tree.merges[count].size);
    ++count;
  }
  CHECK(count == tree.merges.size());
}
