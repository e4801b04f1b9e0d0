#pragma once

#include <string>
#include <vector>

#include "uq/admm.hpp"
#include "uq/config.hpp"
#include "uq/pxmala.hpp"
#include "uq/region.hpp"

namespace uq {

std::string tool_version();

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

struct ManifestFile {
  std::string path;      // relative to the output directory
  std::string checksum;  // fnv1a-64 of the file bytes, hex
};

/// Record of one experiment run. Wall-clock timings live here and only
/// here; the data files themselves are byte-reproducible under a fixed
/// seed.
struct RunManifest {
  std::string tool;
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config_snapshot;  // JSON echo of the parsed configuration
  double realized_snr_db = 0.0;
  std::vector<StageTime> stages;
  std::vector<ManifestFile> files;
};

std::uint64_t fnv1a(const void* bytes, std::size_t len);
std::string checksum_file(const std::string& path);

// Deterministic JSON encoders shared by the harness and the CLI.
std::string solve_report_json(const PosteriorModel& model,
                              const SolveReport& report,
                              bool include_wall_time);
std::string region_json(const CredibleRegion& region);
std::string outcome_json(const TestOutcome& outcome);
std::string sweep_json(const SweepResult& sweep);
std::string chain_summary_json(const ChainOutput& out);
std::string config_snapshot_json(const ExperimentConfig& cfg);

/// Threshold-comparison CSV over an alpha list:
/// alpha,gamma_hat,mc_std_error,gamma_tilde,relative_error.
std::string gamma_table_csv(const std::vector<double>& alphas,
                            const std::vector<QuantileEstimate>& estimates,
                            const std::vector<CredibleRegion>& regions);

/// Mean of the pixels in a frame of `margin` pixels around the rectangle:
/// the surrounding intensity used for knockout fills.
double border_mean(const GridImage& img, const PixelRect& roi,
                   std::size_t margin = 2);

/// Rectangle of the given size with the largest absolute mass in the image
/// (the densest source cluster).
PixelRect densest_rect(const GridImage& img, std::size_t w, std::size_t h);

/// End-to-end run: data generation, MAP, regions, knockout/sweeps, optional
/// chain, all written under cfg.output_dir together with manifest.json.
/// A failing stage writes the manifest of completed stages and rethrows.
RunManifest run_experiment(const ExperimentConfig& cfg);

}  // namespace uq
