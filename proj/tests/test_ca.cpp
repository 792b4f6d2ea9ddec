#include "catch_amalgamated.hpp"
#include "cricket_rules/ca.hpp"
#include "support/oracles.hpp"

using namespace cricket_rules;
using Catch::Matchers::WithinAbs;

namespace {

CountMatrix counts(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  CountMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto row : rows) {
    Eigen::Index j = 0;
    for (auto v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

CAResult ca_of(const CountMatrix& m) { return correspondence_analysis(make_table(m)); }

}  // namespace

TEST_CASE("Pearson ratios and chi-square", "[ca]") {
  SECTION("independent table") {
    auto alpha = pearson_ratios(counts({{1, 2}, {2, 4}}));
    CHECK((alpha.array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK_THAT(chi_square(counts({{1, 2}, {2, 4}})), WithinAbs(0.0, 1e-12));
  }
  SECTION("diagonal table") {
    auto alpha = pearson_ratios(counts({{10, 0}, {0, 10}}));
    CHECK(alpha(0, 0) == 2.0);
    CHECK(alpha(1, 1) == 2.0);
    CHECK(alpha(0, 1) == 0.0);
    CHECK(alpha(1, 0) == 0.0);
    CHECK_THAT(chi_square(counts({{10, 0}, {0, 10}})), WithinAbs(20.0, 1e-12));
  }
  SECTION("empty table") {
    try {
      pearson_ratios(counts({{0, 0}, {0, 0}}));
      FAIL("expected DegenerateMatrix");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateMatrix);
    }
  }
}

TEST_CASE("hand-computed 2x2 table", "[ca]") {
  auto ca = ca_of(counts({{10, 0}, {0, 10}}));
  REQUIRE(ca.rank() == 1);
  CHECK_THAT(ca.singular_values(0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(ca.inertia, WithinAbs(1.0, 1e-12));
  CHECK_THAT(ca.F(0, 0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(ca.F(1, 0), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(ca.G(0, 0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(ca.G(1, 0), WithinAbs(-1.0, 1e-12));
  CHECK(ca.padded);
  CHECK(ca.F2.col(1).isZero());
}

TEST_CASE("rank-one and degenerate shapes come back as rank zero", "[ca]") {
  CHECK(ca_of(counts({{1, 2}, {2, 4}})).rank_zero);
  CHECK(ca_of(counts({{3, 6, 9}, {1, 2, 3}})).rank_zero);
  CHECK(ca_of(counts({{3, 4, 5}})).rank_zero);
  auto with_empty = ca_of(counts({{1, 2}, {0, 0}, {2, 4}}));
  CHECK(with_empty.rank_zero);
  CHECK(with_empty.dropped_rows == std::vector<std::string>{"r1"});
}

TEST_CASE("zero rows and columns are dropped and reported", "[ca]") {
  auto ca = ca_of(counts({{5, 0, 1}, {0, 0, 0}, {1, 0, 7}, {2, 0, 2}}));
  CHECK(ca.row_labels == std::vector<std::string>{"r0", "r2", "r3"});
  CHECK(ca.col_labels == std::vector<std::string>{"c0", "c2"});
  CHECK(ca.dropped_rows == std::vector<std::string>{"r1"});
  CHECK(ca.dropped_cols == std::vector<std::string>{"c1"});
  CHECK(ca.F.rows() == 3);
  CHECK(ca.G.rows() == 2);
}

TEST_CASE("scaling the table leaves CA unchanged", "[ca]") {
  synthetic::Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    auto m = oracle::random_counts(rng, 3 + t % 5, 4 + t % 3);
    auto a = ca_of(m);
    auto b = ca_of(CountMatrix(m * 7));
    CHECK((a.singular_values - b.singular_values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.F - b.F).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.G - b.G).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("CA agrees with the eigen-decomposition oracle", "[ca]") {
  synthetic::Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    auto m = oracle::random_counts(rng, 2 + static_cast<Eigen::Index>(rng.below(18)),
                                   2 + static_cast<Eigen::Index>(rng.below(11)));
    auto check = oracle::check_ca(m);
    INFO("table " << t << " " << m.rows() << "x" << m.cols());
    REQUIRE(check.rank_ok);
    CHECK(check.worst() < 1e-9);
  }
}

TEST_CASE("sign convention: largest row entry of each axis is positive", "[ca]") {
  synthetic::Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    auto ca = ca_of(oracle::random_counts(rng, 6, 5));
    for (Eigen::Index k = 0; k < ca.rank(); ++k) {
      // U = D_r^{1/2} F / σ has the same sign pattern as √r ⊙ F.
      Eigen::VectorXd u = ca.row_masses.cwiseSqrt().cwiseProduct(ca.F.col(k));
      Eigen::Index best = 0;
      u.cwiseAbs().maxCoeff(&best);
      CHECK(u(best) > 0);
    }
  }
}

TEST_CASE("permuting rows permutes F", "[ca]") {
  synthetic::Rng rng(17);
  auto m = oracle::random_counts(rng, 7, 5);
  CountMatrix swapped = m;
  swapped.row(0).swap(swapped.row(4));
  auto a = ca_of(m), b = ca_of(swapped);
  Eigen::MatrixXd expected = a.F;
  expected.row(0).swap(expected.row(4));
  CHECK(oracle::max_diff_up_to_sign(b.F, expected) < 1e-10);
  CHECK(oracle::max_diff_up_to_sign(b.G, a.G) < 1e-10);
}

TEST_CASE("full-precision text dump", "[ca]") {
  auto text = ca_to_string(ca_of(counts({{10, 0}, {0, 10}})));
  CHECK(text.find("inertia") != std::string::npos);
  CHECK(text.find("r0") != std::string::npos);
}
