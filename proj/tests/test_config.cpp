#include "doctest.h"
#include "irisfeat/config.hpp"
#include "irisfeat/errors.hpp"
#include "support.hpp"

using namespace irisfeat;

TEST_CASE("defaults and JSON round trip") {
  RunConfig c;
  CHECK(c.preset == "mini");
  CHECK(c.split_fraction == 0.7);
  CHECK(c.sweep.pca.cap == 2000);
  CHECK(c.sweep.svm.C == 1.0);
  CHECK(c.sweep.svm.max_iter == 1000);
  CHECK(c.sweep.fmr_target == 0.001);
  CHECK(c.sweep.subsplits == 10);
  CHECK(config_from_json_text(config_to_json_text(c)) == c);

  c.taps = std::vector<int>{1, 5};
  c.sweep.pca.basis = VarianceBasis::Captured;
  c.sweep.svm.loss = HingeLoss::Squared;
  c.sweep.tap_mode = TapMode::PostActivation;
  c.sweep.scaler_fit = ScalerFit::AllRows;
  c.init = WeightInit::Zero;
  c.seed = 7;
  sync_seeds(c);
  CHECK(config_from_json_text(config_to_json_text(c)) == c);
}

TEST_CASE("seed is the single entropy source") {
  const auto c = config_from_json_text(R"({"seed": 99})");
  CHECK(c.sweep.seed == 99);
  CHECK(c.synth.seed == 99);
}

TEST_CASE("relative paths resolve against the config location") {
  support::TempDir dir("config");
  std::ofstream(dir / "c.json") << R"({"manifest": "data/manifest.csv", "out": "/abs/out"})";
  const auto c = read_config(dir / "c.json");
  CHECK(c.manifest == dir.path() / "data/manifest.csv");
  CHECK(c.out == "/abs/out");
}

TEST_CASE("tap selection") {
  CHECK_FALSE(parse_taps("all").has_value());
  CHECK(*parse_taps("1,4,10-12") == std::vector<int>{1, 4, 10, 11, 12});
  CHECK_THROWS_AS(parse_taps("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_taps("5-3"), ConfigError);
  CHECK_THROWS_AS(parse_taps(""), ConfigError);
  RunConfig c;
  const auto mini = build_model("mini", WeightInit::Zero);
  CHECK(resolve_taps(c, mini).size() == 8);
  c.taps = std::vector<int>{2, 9};
  CHECK_THROWS_AS(resolve_taps(c, mini), TapError);
  const auto j = config_from_json_text(R"({"taps": [3, 1, 3]})");
  c.taps = j.taps;
  CHECK(resolve_taps(c, mini) == std::set<int>{1, 3});
}

TEST_CASE("bad configs give actionable errors") {
  CHECK_THROWS_AS(config_from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"sed": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"pca": {"capp": 1}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"seed": "x"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"init": "glorot"})"), ConfigError);
  try {
    config_from_json_text(R"({"svm": {"loss": "hinge"}})");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("l1|squared") != std::string::npos);
  }

  RunConfig c;
  CHECK_NOTHROW(validate(c, false));
  CHECK_THROWS_AS(validate(c, true), ConfigError);
  c.manifest = "/nonexistent/manifest.csv";
  CHECK_THROWS_AS(validate(c, true), ConfigError);
  c = {};
  c.split_fraction = 1.0;
  CHECK_THROWS_AS(validate(c, false), ConfigError);
  c = {};
  c.sweep.subsplit_keep = 0.0;
  CHECK_THROWS_AS(validate(c, false), ConfigError);
  c = {};
  c.preset = "vgg";
  CHECK_THROWS_AS(validate(c, false), ConfigError);
  c = {};
  c.weights = "/nonexistent/w.lpwt";
  CHECK_THROWS_AS(validate(c, false), ConfigError);
  c = {};
  c.sweep.threads = 0;
  CHECK_THROWS_AS(validate(c, false), ConfigError);
}
