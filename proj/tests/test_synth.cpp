#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cap/csv.hpp>
#include <cap/synth.hpp>
#include <charconv>
#include <cmath>
#include <sstream>

using namespace cap;

TEST_CASE("problem 1 mean function") {
  Vector x = Vector::Zero(5);
  CHECK(true_mean_at(ProblemId::problem1, x) == 0.0);
  x[0] = 1.0;
  CHECK(true_mean_at(ProblemId::problem1, x) == 1.0);
  x << 1.0, 2.0, 1.0, 1.0, 2.0;
  CHECK(true_mean_at(ProblemId::problem1, x) == doctest::Approx(9.0));
}

TEST_CASE("problem 2 mean function and weights") {
  Vector x = Vector::Zero(10);
  CHECK(true_mean_at(ProblemId::problem2, x) == doctest::Approx(1.0));
  x.setOnes();
  // weights sum to one, so the all-ones point maps to e
  CHECK(true_mean_at(ProblemId::problem2, x) == doctest::Approx(std::exp(1.0)).epsilon(1e-3));
}

TEST_CASE("quad2d mean function and uniform moment") {
  Vector x = Vector::Zero(2);
  CHECK(true_mean_at(ProblemId::quad2d, x) == 0.0);
  x.setOnes();
  CHECK(true_mean_at(ProblemId::quad2d, x) == doctest::Approx(2.0));

  const SynthData big = gen_quad2d(100000, 123);
  CHECK(big.true_mean.mean() == doctest::Approx(2.0 / 3.0).epsilon(0.015));
  CHECK(big.data.x.minCoeff() >= -1.0);
  CHECK(big.data.x.maxCoeff() <= 1.0);
}

TEST_CASE("generators return the closed-form mean at every row") {
  const SynthData p1 = gen_problem1(200, 5);
  for (Eigen::Index i = 0; i < 200; ++i)
    CHECK(p1.true_mean[i] ==
          doctest::Approx(true_mean_at(ProblemId::problem1, p1.data.x.row(i))).epsilon(1e-12));
  const SynthData p2 = gen_problem2(100, 6);
  CHECK(p2.data.p() == 10);
  for (Eigen::Index i = 0; i < 100; ++i)
    CHECK(p2.true_mean[i] ==
          doctest::Approx(true_mean_at(ProblemId::problem2, p2.data.x.row(i))).epsilon(1e-12));
}

TEST_CASE("generators are deterministic and seeds decouple") {
  const SynthData a = gen_problem1(50, 9);
  const SynthData b = gen_problem1(50, 9);
  CHECK(a.data.x == b.data.x);
  CHECK(a.data.y == b.data.y);
  const SynthData c = gen_problem1(50, 10);
  CHECK(a.data.y != c.data.y);
}

TEST_CASE("generate() honors the noise override") {
  ProblemSpec spec;
  spec.id = ProblemId::quad2d;
  spec.n = 500;
  spec.seed = 3;
  spec.noise_scale = 0.0;
  const SynthData noiseless = generate(spec);
  CHECK((noiseless.data.y - noiseless.true_mean).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("problem id parsing") {
  CHECK(problem_from_string("1") == ProblemId::problem1);
  CHECK(problem_from_string("problem2") == ProblemId::problem2);
  CHECK(problem_from_string("quad2d") == ProblemId::quad2d);
  CHECK_THROWS_AS(problem_from_string("3"), std::invalid_argument);
}

TEST_CASE("rate_study: a perfect oracle reports a NaN slope") {
  const std::vector<Eigen::Index> grid{100, 200, 400};
  const std::vector<std::uint64_t> seeds{1, 2};
  const Fitter oracle = [](const Dataset&) {
    return FittedPredictor{[](const Vector& x) { return true_mean_at(ProblemId::quad2d, x); }, 1};
  };
  const RateStudyResult res = rate_study(ProblemId::quad2d, grid, seeds, oracle, 500);
  CHECK(std::isnan(res.slope));
  REQUIRE(res.cells.size() == 6);
  for (const auto& cell : res.cells) CHECK(cell.mse == 0.0);
}

TEST_CASE("rate_study: error decays for a nearest-observation predictor") {
  // crude but consistent estimator: error shrinks with n, slope negative
  const std::vector<Eigen::Index> grid{50, 200, 800};
  const std::vector<std::uint64_t> seeds{1, 2};
  const Fitter nearest = [](const Dataset& train) {
    Matrix x = train.x;
    Vector y = train.y;
    return FittedPredictor{[x, y](const Vector& q) {
                             Eigen::Index best = 0;
                             double bd = (x.row(0).transpose() - q).squaredNorm();
                             for (Eigen::Index i = 1; i < x.rows(); ++i) {
                               const double d = (x.row(i).transpose() - q).squaredNorm();
                               if (d < bd) {
                                 bd = d;
                                 best = i;
                               }
                             }
                             return y[best];
                           },
                           1};
  };
  const RateStudyResult res = rate_study(ProblemId::quad2d, grid, seeds, nearest, 2000);
  CHECK(res.slope < 0.0);
  CHECK(res.mean_mse.front() > res.mean_mse.back());
}

TEST_CASE("dataset CSV round trip is bit exact") {
  const SynthData sd = gen_problem1(60, 11);
  const auto path = std::filesystem::temp_directory_path() / "capkit_test_roundtrip.csv";
  write_dataset_csv(path, sd.data, &sd.true_mean);
  const DatasetCsv back = read_dataset_csv(path);
  REQUIRE(back.data.n() == 60);
  REQUIRE(back.data.p() == 5);
  REQUIRE(back.true_mean.has_value());
  CHECK(back.data.x == sd.data.x);
  CHECK(back.data.y == sd.data.y);
  CHECK(*back.true_mean == sd.true_mean);
  std::filesystem::remove(path);
}

TEST_CASE("CSV parse errors carry line numbers") {
  std::istringstream no_header("");
  CHECK_THROWS_WITH_AS(read_dataset_csv(no_header), doctest::Contains("line 1"),
                       std::invalid_argument);

  std::istringstream bad_cell("x1,y\n0.5,ok\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(bad_cell), doctest::Contains("line 2"),
                       std::invalid_argument);

  std::istringstream ragged("x1,y\n1.0,2.0\n1.0\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(ragged), doctest::Contains("line 3"),
                       std::invalid_argument);
}

TEST_CASE("format_double survives awkward values") {
  for (double v : {0.1, 1.0 / 3.0, -0.0, 1e-300, 12345.678901234567, 2.2250738585072014e-308}) {
    double back = 0.0;
    const std::string s = format_double(v);
    CHECK(std::from_chars(s.data(), s.data() + s.size(), back).ec == std::errc());
    CHECK(back == v);
  }
}
