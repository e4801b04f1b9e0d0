#include "uq/config.hpp"

#include <filesystem>

#include "uq/io.hpp"

namespace uq {

ModelConfig parse_model_config(const toml::Table& t) {
  ModelConfig cfg;
  cfg.kind = model_kind_from_string(t.get_string("model", "kind"));
  cfg.sigma = t.get_number_or("model", "sigma", 1.0);
  cfg.lambda = t.get_number_or("model", "lambda", 1.0);
  cfg.nonneg = t.get_bool_or("model", "nonneg", false);
  cfg.q = t.get_number_or("model", "q", 1.0);
  cfg.height = static_cast<std::size_t>(t.get_integer_or("model", "height", 0));
  cfg.width = static_cast<std::size_t>(t.get_integer_or("model", "width", 0));

  cfg.mask.type = t.get_string_or("mask", "type", cfg.mask.type);
  cfg.mask.fraction = t.get_number_or("mask", "fraction", cfg.mask.fraction);
  cfg.mask.lines = static_cast<std::size_t>(
      t.get_integer_or("mask", "lines", static_cast<long long>(cfg.mask.lines)));
  cfg.mask.seed = static_cast<std::uint64_t>(t.get_integer_or("mask", "seed", 0));

  cfg.psf.builtin = t.get_string_or("psf", "builtin", cfg.psf.builtin);
  cfg.psf.path = t.get_string_or("psf", "path", "");
  cfg.psf.width = static_cast<std::size_t>(
      t.get_integer_or("psf", "width", static_cast<long long>(cfg.psf.width)));

  cfg.data.observation_path = t.get_string_or("data", "observation_path", "");
  cfg.data.truth_path = t.get_string_or("data", "truth_path", "");
  return cfg;
}

AdmmConfig parse_admm_config(const toml::Table& t) {
  AdmmConfig cfg;
  cfg.rho = t.get_number_or("solver", "rho", cfg.rho);
  cfg.max_iters = static_cast<int>(
      t.get_integer_or("solver", "max_iters", cfg.max_iters));
  cfg.tol_primal = t.get_number_or("solver", "tol_primal", cfg.tol_primal);
  cfg.tol_dual = t.get_number_or("solver", "tol_dual", cfg.tol_dual);
  cfg.adapt_rho = t.get_bool_or("solver", "adapt_rho", cfg.adapt_rho);
  cfg.record_trace = t.get_bool_or("solver", "record_trace", cfg.record_trace);
  return cfg;
}

ChainConfig parse_chain_config(const toml::Table& t) {
  ChainConfig cfg;
  cfg.step_delta = t.get_number_or("chain", "step_delta", cfg.step_delta);
  cfg.moreau_lambda =
      t.get_number_or("chain", "moreau_lambda", cfg.moreau_lambda);
  cfg.iterations =
      t.get_integer_or("chain", "iterations", cfg.iterations);
  cfg.burn_in = t.get_integer_or("chain", "burn_in", cfg.burn_in);
  cfg.thin = t.get_integer_or("chain", "thin", cfg.thin);
  cfg.seed = static_cast<std::uint64_t>(t.get_integer_or("chain", "seed", 0));
  if (t.has("chain", "target_acceptance")) {
    cfg.target_acceptance = t.get_number("chain", "target_acceptance");
  }
  cfg.prox.inner_max_iters = static_cast<int>(t.get_integer_or(
      "chain", "prox_max_iters", cfg.prox.inner_max_iters));
  cfg.prox.inner_tol = t.get_number_or("chain", "prox_tol", cfg.prox.inner_tol);
  return cfg;
}

SamplingMask build_mask(const MaskConfig& cfg, std::size_t height,
                        std::size_t width) {
  if (cfg.type == "radial") {
    return make_radial_mask(height, width, cfg.lines, cfg.seed);
  }
  if (cfg.type == "uniform") {
    return make_uniform_mask(height, width, cfg.fraction, cfg.seed);
  }
  throw InvalidInputError("mask type must be radial or uniform, got " + cfg.type);
}

PointSpreadFunction build_psf(const PsfConfig& cfg, const std::string& base_dir) {
  if (!cfg.path.empty()) {
    PointSpreadFunction psf;
    psf.kernel = read_grd(resolve_path(cfg.path, base_dir));
    double sum = 0.0;
    for (double v : psf.kernel.data) sum += v;
    psf.normalized = std::abs(sum - 1.0) <= 1e-12;
    return psf;
  }
  if (cfg.builtin == "gaussian") return make_gaussian_psf(cfg.width);
  if (cfg.builtin == "airy-like") return make_airy_psf(cfg.width);
  throw InvalidInputError("psf builtin must be gaussian or airy-like, got " +
                          cfg.builtin);
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

PosteriorModel build_model(const ModelConfig& cfg, const std::string& base_dir) {
  switch (cfg.kind) {
    case ModelKind::GenGaussian: {
      if (cfg.height == 0 || cfg.width == 0) {
        throw InvalidInputError(
            "gen_gaussian model needs [model] height and width");
      }
      return make_gen_gaussian_model(cfg.height, cfg.width, cfg.q, cfg.lambda);
    }
    case ModelKind::TvTomography: {
      if (cfg.data.observation_path.empty()) {
        throw InvalidInputError("tv_tomography model needs observation_path");
      }
      ComplexGrid obs =
          read_cpx(resolve_path(cfg.data.observation_path, base_dir));
      SamplingMask mask = build_mask(cfg.mask, obs.height, obs.width);
      return make_tv_model(std::move(obs), std::move(mask), cfg.sigma,
                           cfg.lambda, cfg.nonneg);
    }
    case ModelKind::L1Deconvolution: {
      if (cfg.data.observation_path.empty()) {
        throw InvalidInputError("l1_deconvolution model needs observation_path");
      }
      GridImage obs = read_grd(resolve_path(cfg.data.observation_path, base_dir));
      PointSpreadFunction psf = build_psf(cfg.psf, base_dir);
      return make_l1_model(std::move(obs), std::move(psf), cfg.sigma,
                           cfg.lambda, cfg.nonneg);
    }
  }
  throw InvalidInputError("build_model: bad model kind");
}

ExperimentConfig parse_experiment_config(const toml::Table& t) {
  ExperimentConfig cfg;
  cfg.experiment = t.get_string_or("", "experiment", "");
  if (t.has("", "alpha_list")) cfg.alpha_list = t.get_numbers("", "alpha_list");
  for (double a : cfg.alpha_list) {
    if (!(a > 0.0 && a < 1.0)) {
      throw InvalidInputError("alpha_list entries must be in (0,1)");
    }
  }
  cfg.seed = static_cast<std::uint64_t>(t.get_integer_or("", "seed", 0));
  cfg.output_dir = t.get_string_or("", "output_dir", cfg.output_dir);

  if (t.has("model", "kind")) cfg.model = parse_model_config(t);
  cfg.solver = parse_admm_config(t);
  cfg.with_chain = t.has("chain", "iterations");
  cfg.chain = parse_chain_config(t);

  cfg.size = static_cast<std::size_t>(
      t.get_integer_or("scene", "size", static_cast<long long>(cfg.size)));
  cfg.sources = static_cast<std::size_t>(t.get_integer_or(
      "scene", "sources", static_cast<long long>(cfg.sources)));
  cfg.snr_db = t.get_number_or("scene", "snr_db", cfg.snr_db);

  cfg.sweep_lo = t.get_number_or("sweep", "lo", cfg.sweep_lo);
  cfg.sweep_hi = t.get_number_or("sweep", "hi", cfg.sweep_hi);
  cfg.sweep_tol = t.get_number_or("sweep", "tol", cfg.sweep_tol);
  cfg.sweep_max_shift =
      t.get_integer_or("sweep", "max_shift", cfg.sweep_max_shift);

  cfg.asym_q = t.get_number_or("asymptotics", "q", cfg.asym_q);
  cfg.asym_lambda = t.get_number_or("asymptotics", "lambda", cfg.asym_lambda);
  cfg.asym_n_max = static_cast<std::size_t>(t.get_integer_or(
      "asymptotics", "n_max", static_cast<long long>(cfg.asym_n_max)));
  return cfg;
}

}  // namespace uq
