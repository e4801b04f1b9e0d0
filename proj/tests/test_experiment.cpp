#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "test_util.hpp"
#include "uq/experiment.hpp"
#include "uq/synthetic.hpp"

using namespace uq;
using uqtest::TempDir;

namespace {

ExperimentConfig tiny_mri_config(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.experiment = "mri";
  cfg.alpha_list = {0.01};
  cfg.seed = 5;
  cfg.output_dir = out_dir;
  cfg.size = 32;
  cfg.model.kind = ModelKind::TvTomography;
  cfg.model.sigma = 1e-3;
  cfg.model.lambda = 40.0;
  cfg.model.mask.type = "radial";
  cfg.model.mask.lines = 8;
  cfg.model.mask.seed = 11;
  cfg.solver.rho = 200.0;
  cfg.solver.max_iters = 4000;
  return cfg;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  nlohmann::json j;
  is >> j;
  return j;
}

}  // namespace

TEST_CASE("fnv1a checksums are stable") {
  const char data[] = "uqcr";
  CHECK(fnv1a(data, 4) == fnv1a(data, 4));
  CHECK(fnv1a(data, 4) != fnv1a(data, 3));
}

TEST_CASE("border_mean averages the surrounding frame only") {
  GridImage img(8, 8, 1.0);
  PixelRect roi{3, 3, 2, 2};
  for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
    for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) img.at(r, c) = 100.0;
  }
  CHECK(border_mean(img, roi, 2) == doctest::Approx(1.0));
}

TEST_CASE("densest_rect locates the mass concentration") {
  GridImage img(16, 16, 0.0);
  img.at(10, 11) = 1.0;
  img.at(11, 12) = 1.0;
  img.at(12, 11) = 1.0;
  PixelRect r = densest_rect(img, 4, 4);
  CHECK(r.y <= 10);
  CHECK(r.y + r.h >= 12);
  CHECK(r.x <= 11);
  CHECK(r.x + r.w >= 12);
  CHECK_THROWS_AS(densest_rect(img, 20, 4), InvalidInputError);
}

TEST_CASE("gamma_table_csv emits the documented header") {
  CredibleRegion r = build_region(0.1, 100, 0.0);
  QuantileEstimate e;
  e.gamma_hat = 100.0;
  e.alpha = 0.1;
  const std::string csv = gamma_table_csv({0.1}, {e}, {r});
  CHECK(csv.rfind("alpha,gamma_hat,mc_std_error,gamma_tilde,relative_error\n",
                  0) == 0);
  CHECK_THROWS_AS(gamma_table_csv({0.1, 0.2}, {e}, {r}), InvalidInputError);
}

TEST_CASE("asymptotics experiment writes a parsable curve and manifest") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.experiment = "asymptotics";
  cfg.alpha_list = {0.1};
  cfg.output_dir = tmp.path("asym");
  cfg.asym_q = 2.0;
  cfg.asym_n_max = 100;
  RunManifest manifest = run_experiment(cfg);
  CHECK(manifest.experiment == "asymptotics");
  REQUIRE_FALSE(manifest.files.empty());
  CHECK(manifest.files.front().path == "curve.csv");

  std::ifstream is(tmp.path("asym/curve.csv"));
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  CHECK(header == "n,alpha,gamma_exact,gamma_tilde,e_n,limit");

  auto j = read_json(tmp.path("asym/manifest.json"));
  CHECK(j.at("tool").get<std::string>() == tool_version());
  CHECK(j.at("files").size() == manifest.files.size());
}

TEST_CASE("mri experiment is byte-reproducible under a fixed seed") {
  TempDir tmp;
  RunManifest a = run_experiment(tiny_mri_config(tmp.path("run_a")));
  RunManifest b = run_experiment(tiny_mri_config(tmp.path("run_b")));
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].path == b.files[i].path);
    CHECK(a.files[i].checksum == b.files[i].checksum);
  }
  // the knockout at high SNR rejects
  auto knockout = read_json(tmp.path("run_a/knockout_0.01.json"));
  CHECK(knockout.at("rejected").get<bool>());
  // sweep bounds bracket the MAP scale 1
  auto sweep = read_json(tmp.path("run_a/sweep_intensity.json"));
  CHECK(sweep.at("lower_bound").get<double>() < 1.0);
  CHECK(sweep.at("upper_bound").get<double>() > 1.0);
}

TEST_CASE("a failing stage still writes the partial manifest") {
  TempDir tmp;
  ExperimentConfig cfg = tiny_mri_config(tmp.path("fail"));
  cfg.solver.max_iters = 1;  // map stage cannot converge
  CHECK_THROWS_AS(run_experiment(cfg), ConvergenceError);
  auto j = read_json(tmp.path("fail/manifest.json"));
  bool saw_data_stage = false;
  for (const auto& s : j.at("stages")) {
    if (s.at("stage").get<std::string>() == "data") saw_data_stage = true;
  }
  CHECK(saw_data_stage);
}

TEST_CASE("unknown experiment names are invalid input") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.experiment = "nope";
  cfg.output_dir = tmp.path("x");
  CHECK_THROWS_AS(run_experiment(cfg), InvalidInputError);
}
