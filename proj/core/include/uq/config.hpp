#pragma once

#include <string>
#include <vector>

#include "uq/admm.hpp"
#include "uq/model.hpp"
#include "uq/pxmala.hpp"
#include "uq/toml.hpp"

namespace uq {

// Run configuration schema (TOML). Sections:
//   top level   experiment, alpha_list, seed, output_dir
//   [model]     kind, sigma, lambda, nonneg, q, height, width
//   [mask]      type (radial|uniform), fraction, lines, seed
//   [psf]       builtin (gaussian|airy-like) or path, width
//   [data]      observation_path, truth_path
//   [solver]    rho, max_iters, tol_primal, tol_dual, adapt_rho
//   [chain]     iterations, burn_in, thin, step_delta, moreau_lambda,
//               target_acceptance, seed
//   [scene]     size, sources, snr_db
//   [sweep]     lo, hi, tol, max_shift
//   [asymptotics] q, lambda, n_max

struct MaskConfig {
  std::string type = "radial";
  double fraction = 0.15;
  std::size_t lines = 10;
  std::uint64_t seed = 0;
};

struct PsfConfig {
  std::string builtin = "gaussian";
  std::string path;  // overrides builtin when set
  std::size_t width = 16;
};

struct DataConfig {
  std::string observation_path;
  std::string truth_path;
};

struct ModelConfig {
  ModelKind kind = ModelKind::GenGaussian;
  double sigma = 1.0;
  double lambda = 1.0;
  bool nonneg = false;
  double q = 1.0;          // gen_gaussian
  std::size_t height = 0;  // gen_gaussian grid; imaging kinds take the
  std::size_t width = 0;   // shape from the observation
  MaskConfig mask;
  PsfConfig psf;
  DataConfig data;
};

ModelConfig parse_model_config(const toml::Table& table);
AdmmConfig parse_admm_config(const toml::Table& table);
ChainConfig parse_chain_config(const toml::Table& table);

SamplingMask build_mask(const MaskConfig& cfg, std::size_t height,
                        std::size_t width);
PointSpreadFunction build_psf(const PsfConfig& cfg, const std::string& base_dir);

/// Instantiates the posterior from the config, loading the observation (and
/// mask/psf) as needed. Relative paths resolve against base_dir.
PosteriorModel build_model(const ModelConfig& cfg, const std::string& base_dir);

std::string resolve_path(const std::string& path, const std::string& base_dir);

struct ExperimentConfig {
  std::string experiment;  // mri | deconv | asymptotics
  std::vector<double> alpha_list{0.01};
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  ModelConfig model;
  AdmmConfig solver;
  ChainConfig chain;
  bool with_chain = false;  // [chain] section present

  // data generation ([scene])
  std::size_t size = 64;
  std::size_t sources = 100;
  double snr_db = 0.0;  // > 0: derive sigma from the blurred SNR (deconv)

  // sweep controls
  double sweep_lo = 0.0;
  double sweep_hi = 3.0;
  double sweep_tol = 1e-3;
  long sweep_max_shift = 16;

  // asymptotics
  double asym_q = 1.0;
  double asym_lambda = 1.0;
  std::size_t asym_n_max = 10000;
};

ExperimentConfig parse_experiment_config(const toml::Table& table);

}  // namespace uq
