#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cap/engine.hpp>
#include <cap/model_io.hpp>
#include <cap/synth.hpp>
#include <filesystem>

#include "test_util.hpp"

using namespace cap;

TEST_CASE("model JSON round trip is exact, including a second serialization") {
  const SynthData train = gen_quad2d(300, 2);
  CapConfig cfg;
  cfg.seed = 2;
  const ModelSequence seq = run_cap(train.data, cfg);
  ModelMeta meta{cfg.d_factor, cfg.knots, cfg.seed, train.data.n()};

  const std::string text = model_to_json(seq.best(), meta);
  ModelMeta back_meta;
  const PartitionModel back = model_from_json(text, &back_meta);
  CHECK(model_to_json(back, back_meta) == text);
  CHECK(back_meta.seed == cfg.seed);
  CHECK(back_meta.n == train.data.n());

  RandomStream rs(5);
  for (int t = 0; t < 500; ++t) {
    const Vector x = test_util::random_point(2, rs, 1.5);
    CHECK(back.evaluate(x) == seq.best().evaluate(x));  // bit identical
  }
}

TEST_CASE("subset indices are 1-based on disk") {
  PartitionModel m;
  m.p = 1;
  m.hyperplanes.resize(1);
  m.hyperplanes[0].alpha = 0.5;
  m.hyperplanes[0].beta = Vector::Constant(1, -2.0);
  m.subsets = {{0, 1, 2}};
  const std::string text = model_to_json(m, {});
  CHECK(text.find("[\n      1,\n      2,\n      3\n    ]") != std::string::npos);
  const PartitionModel back = model_from_json(text);
  CHECK(back.subsets[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("concave orientation survives the round trip") {
  PartitionModel m = test_util::random_model(3, 4, 9, 12);
  m = negated(m);
  const std::string text = model_to_json(m, {});
  const PartitionModel back = model_from_json(text);
  CHECK(back.orientation == Orientation::concave);
  RandomStream rs(10);
  for (int t = 0; t < 100; ++t) {
    const Vector x = test_util::random_point(3, rs);
    CHECK(back.evaluate(x) == m.evaluate(x));
  }
}

TEST_CASE("malformed model JSON is rejected with context") {
  CHECK_THROWS_WITH_AS(model_from_json("{ not json"), doctest::Contains("parse error"),
                       std::invalid_argument);
  CHECK_THROWS_AS(model_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(
      model_from_json(R"({"orientation":"sideways","p":1,"hyperplanes":[],"subsets":[]})"),
      std::invalid_argument);
  // beta length disagreeing with p
  CHECK_THROWS_AS(
      model_from_json(
          R"({"orientation":"convex","p":2,"hyperplanes":[{"alpha":0,"beta":[1]}],"subsets":[[1]]})"),
      std::invalid_argument);
}

TEST_CASE("save_model / load_model file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "capkit_model_io_test.json";
  PartitionModel m = test_util::random_model(2, 3, 21, 9);
  save_model(path, m, {});
  const PartitionModel back = load_model(path);
  CHECK(model_to_json(back, {}) == model_to_json(m, {}));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path), std::invalid_argument);
}
