#include "uq/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uq/analytic.hpp"
#include "uq/io.hpp"
#include "uq/synthetic.hpp"

namespace uq {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return "uqcr 0.1.0"; }

std::uint64_t fnv1a(const void* bytes, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string checksum_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("checksum_file: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  const std::string bytes = buf.str();
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes.data(), bytes.size())));
  return out;
}

std::string solve_report_json(const PosteriorModel& model,
                              const SolveReport& report,
                              bool include_wall_time) {
  json j;
  j["model_kind"] = to_string(model.kind);
  j["height"] = model.height;
  j["width"] = model.width;
  j["n"] = model.n();
  j["sigma"] = model.sigma;
  j["lambda"] = model.lambda;
  j["iterations"] = report.iterations;
  j["primal_residual"] = report.primal_residual;
  j["dual_residual"] = report.dual_residual;
  j["g_at_map"] = report.g_at_map.total;
  j["data_term"] = report.g_at_map.data_term;
  j["reg_term"] = report.g_at_map.reg_term;
  j["feasible"] = report.g_at_map.feasible;
  if (include_wall_time) j["wall_time_seconds"] = report.wall_time_seconds;
  if (!report.objective_trace.empty()) {
    j["objective_trace"] = report.objective_trace;
  }
  return j.dump(2) + "\n";
}

std::string region_json(const CredibleRegion& r) {
  json j;
  j["alpha"] = r.alpha;
  j["n"] = r.n;
  j["g_at_map"] = r.g_at_map;
  j["tau_alpha"] = r.tau_alpha;
  j["gamma_tilde"] = r.gamma_tilde;
  j["alpha_valid"] = r.alpha_valid;
  j["tau_in_range"] = r.tau_in_range;
  return j.dump(2) + "\n";
}

std::string outcome_json(const TestOutcome& o) {
  json j;
  j["surrogate_g"] = o.surrogate_g;
  j["threshold"] = o.threshold;
  j["rejected"] = o.rejected;
  j["alpha"] = o.alpha;
  j["margin"] = o.margin;
  j["verdict"] = o.verdict;
  return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& s) {
  json j;
  j["parameter_name"] = s.parameter_name;
  j["lower_bound"] = s.lower_bound;
  j["upper_bound"] = s.upper_bound;
  j["evaluations"] = s.evaluations;
  j["boundary_tolerance"] = s.boundary_tolerance;
  return j.dump(2) + "\n";
}

std::string chain_summary_json(const ChainOutput& out) {
  json j;
  j["samples"] = out.g_samples.size();
  j["acceptance_rate"] = out.acceptance_rate;
  j["ess_estimate"] = out.ess_estimate;
  j["seed"] = out.seed;
  j["step_delta_final"] = out.step_delta_final;
  return j.dump(2) + "\n";
}

std::string config_snapshot_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["alpha_list"] = cfg.alpha_list;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["model"] = {{"kind", to_string(cfg.model.kind)},
                {"sigma", cfg.model.sigma},
                {"lambda", cfg.model.lambda},
                {"nonneg", cfg.model.nonneg},
                {"q", cfg.model.q}};
  j["mask"] = {{"type", cfg.model.mask.type},
               {"fraction", cfg.model.mask.fraction},
               {"lines", cfg.model.mask.lines},
               {"seed", cfg.model.mask.seed}};
  j["psf"] = {{"builtin", cfg.model.psf.builtin},
              {"path", cfg.model.psf.path},
              {"width", cfg.model.psf.width}};
  j["solver"] = {{"rho", cfg.solver.rho},
                 {"max_iters", cfg.solver.max_iters},
                 {"tol_primal", cfg.solver.tol_primal},
                 {"tol_dual", cfg.solver.tol_dual},
                 {"adapt_rho", cfg.solver.adapt_rho}};
  j["scene"] = {{"size", cfg.size},
                {"sources", cfg.sources},
                {"snr_db", cfg.snr_db}};
  if (cfg.with_chain) {
    j["chain"] = {{"iterations", cfg.chain.iterations},
                  {"burn_in", cfg.chain.burn_in},
                  {"thin", cfg.chain.thin},
                  {"step_delta", cfg.chain.step_delta},
                  {"moreau_lambda", cfg.chain.moreau_lambda},
                  {"seed", cfg.chain.seed}};
  }
  j["sweep"] = {{"lo", cfg.sweep_lo},
                {"hi", cfg.sweep_hi},
                {"tol", cfg.sweep_tol},
                {"max_shift", cfg.sweep_max_shift}};
  j["asymptotics"] = {{"q", cfg.asym_q},
                      {"lambda", cfg.asym_lambda},
                      {"n_max", cfg.asym_n_max}};
  return j.dump(2);
}

std::string gamma_table_csv(const std::vector<double>& alphas,
                            const std::vector<QuantileEstimate>& estimates,
                            const std::vector<CredibleRegion>& regions) {
  if (alphas.size() != estimates.size() || alphas.size() != regions.size()) {
    throw InvalidInputError("gamma_table_csv: length mismatch");
  }
  std::ostringstream os;
  os.precision(17);
  os << "alpha,gamma_hat,mc_std_error,gamma_tilde,relative_error\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    os << alphas[i] << "," << estimates[i].gamma_hat << ","
       << estimates[i].mc_std_error << "," << regions[i].gamma_tilde << ","
       << relative_error(regions[i], estimates[i]) << "\n";
  }
  return os.str();
}

double border_mean(const GridImage& img, const PixelRect& roi, std::size_t margin) {
  double sum = 0.0;
  std::size_t count = 0;
  const long y0 = static_cast<long>(roi.y) - static_cast<long>(margin);
  const long y1 = static_cast<long>(roi.y + roi.h) + static_cast<long>(margin);
  const long x0 = static_cast<long>(roi.x) - static_cast<long>(margin);
  const long x1 = static_cast<long>(roi.x + roi.w) + static_cast<long>(margin);
  for (long r = y0; r < y1; ++r) {
    for (long c = x0; c < x1; ++c) {
      if (r < 0 || c < 0 || r >= static_cast<long>(img.height) ||
          c >= static_cast<long>(img.width)) {
        continue;
      }
      const bool inside = r >= static_cast<long>(roi.y) &&
                          r < static_cast<long>(roi.y + roi.h) &&
                          c >= static_cast<long>(roi.x) &&
                          c < static_cast<long>(roi.x + roi.w);
      if (inside) continue;
      sum += img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      ++count;
    }
  }
  if (count == 0) throw InvalidInputError("border_mean: empty border");
  return sum / static_cast<double>(count);
}

PixelRect densest_rect(const GridImage& img, std::size_t w, std::size_t h) {
  if (w > img.width || h > img.height) {
    throw InvalidInputError("densest_rect: window larger than image");
  }
  PixelRect best{0, 0, w, h};
  double best_mass = -1.0;
  for (std::size_t y = 0; y + h <= img.height; ++y) {
    for (std::size_t x = 0; x + w <= img.width; ++x) {
      double mass = 0.0;
      for (std::size_t r = y; r < y + h; ++r) {
        for (std::size_t c = x; c < x + w; ++c) mass += std::abs(img.at(r, c));
      }
      if (mass > best_mass) {
        best_mass = mass;
        best = PixelRect{x, y, w, h};
      }
    }
  }
  return best;
}

namespace {

std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

class StageRecorder {
 public:
  explicit StageRecorder(RunManifest& manifest) : manifest_(manifest) {}

  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    manifest_.stages.push_back({name, secs});
  }

 private:
  RunManifest& manifest_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["tool"] = m.tool;
  j["experiment"] = m.experiment;
  j["seed"] = m.seed;
  j["config"] = json::parse(m.config_snapshot);
  if (m.realized_snr_db != 0.0) j["realized_snr_db"] = m.realized_snr_db;
  json stages = json::array();
  for (const auto& s : m.stages) {
    stages.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  }
  j["stages"] = stages;
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path}, {"checksum", f.checksum}});
  }
  j["files"] = files;
  write_text(path, j.dump(2) + "\n");
}

// Registers the file in the manifest after writing it.
class OutputDir {
 public:
  OutputDir(const std::string& dir, RunManifest& manifest)
      : dir_(dir), manifest_(manifest) {
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const {
    return (fs::path(dir_) / name).string();
  }

  void add(const std::string& name) {
    manifest_.files.push_back({name, checksum_file(path(name))});
  }

  void write(const std::string& name, const std::string& text) {
    write_text(path(name), text);
    add(name);
  }

  void write_image(const std::string& name, const GridImage& img) {
    write_grd(path(name), img);
    add(name);
  }

  void write_complex(const std::string& name, const ComplexGrid& grid) {
    write_cpx(path(name), grid);
    add(name);
  }

 private:
  std::string dir_;
  RunManifest& manifest_;
};

struct PipelineOutput {
  PosteriorModel model;
  SolveReport map;
};

void run_region_stages(const ExperimentConfig& cfg, OutputDir& out,
                       StageRecorder& rec, const PipelineOutput& pipe,
                       const GridImage& knockout_surrogate) {
  const double g_map = pipe.map.g_at_map.total;
  const std::size_t n = pipe.model.n();

  rec.run("regions", [&] {
    for (double alpha : cfg.alpha_list) {
      const CredibleRegion region = build_region(alpha, n, g_map);
      out.write("region_" + format_alpha(alpha) + ".json", region_json(region));
    }
  });

  rec.run("knockout", [&] {
    out.write_image("surrogate.grd", knockout_surrogate);
    const double g_surrogate =
        eval_potential(pipe.model, knockout_surrogate).total;
    for (double alpha : cfg.alpha_list) {
      const CredibleRegion region = build_region(alpha, n, g_map);
      out.write("knockout_" + format_alpha(alpha) + ".json",
                outcome_json(classify(region, g_surrogate)));
    }
  });
}

void run_chain_stage(const ExperimentConfig& cfg, OutputDir& out,
                     StageRecorder& rec, const PipelineOutput& pipe) {
  if (!cfg.with_chain) return;
  rec.run("chain", [&] {
    ChainConfig chain_cfg = cfg.chain;
    const ChainOutput chain = run_chain(pipe.model, chain_cfg, pipe.map.x_map);
    out.write("chain.json", chain_summary_json(chain));

    std::vector<QuantileEstimate> estimates;
    std::vector<CredibleRegion> regions;
    for (double alpha : cfg.alpha_list) {
      estimates.push_back(estimate_gamma(chain, alpha));
      regions.push_back(
          build_region(alpha, pipe.model.n(), pipe.map.g_at_map.total));
    }
    out.write("samples.csv", gamma_table_csv(cfg.alpha_list, estimates, regions));
  });
}

void run_mri(const ExperimentConfig& cfg, OutputDir& out, StageRecorder& rec,
             RunManifest& manifest) {
  GridImage truth;
  SamplingMask mask;
  SimulatedObservation obs;
  rec.run("data", [&] {
    truth = make_phantom(cfg.size);
    out.write_image("truth.grd", truth);
    mask = build_mask(cfg.model.mask, cfg.size, cfg.size);
    obs = simulate_tomography(truth, mask, cfg.model.sigma, cfg.seed);
    manifest.realized_snr_db = obs.realized_snr_db;
    out.write_complex("observation.cpx", obs.fourier);
  });

  PipelineOutput pipe;
  rec.run("map", [&] {
    pipe.model = make_tv_model(obs.fourier, mask, cfg.model.sigma,
                               cfg.model.lambda, cfg.model.nonneg);
    pipe.map = solve_map(pipe.model, cfg.solver);
    out.write_image("map.grd", pipe.map.x_map);
    out.write("map_report.json", solve_report_json(pipe.model, pipe.map, false));
  });

  const PixelRect roi = phantom_spot_roi(cfg.size);
  const double fill = border_mean(pipe.map.x_map, roi);
  run_region_stages(cfg, out, rec, pipe, fill_rect(pipe.map.x_map, roi, fill));

  rec.run("sweep", [&] {
    // Structure-intensity family: theta scales the spot contrast over the
    // surrounding level; theta = 1 reproduces the MAP estimate.
    const GridImage& x_map = pipe.map.x_map;
    SurrogateFamily family = [&](double theta) {
      GridImage s = x_map;
      for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
        for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) {
          s.at(r, c) = fill + theta * (x_map.at(r, c) - fill);
        }
      }
      return s;
    };
    const CredibleRegion region =
        build_region(cfg.alpha_list.front(), pipe.model.n(),
                     pipe.map.g_at_map.total);
    const SweepResult sweep =
        scalar_sweep(region, pipe.model, family, "intensity_scale", 1.0,
                     cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_tol);
    out.write("sweep_intensity.json", sweep_json(sweep));
  });

  run_chain_stage(cfg, out, rec, pipe);
}

void run_deconv(const ExperimentConfig& cfg, OutputDir& out, StageRecorder& rec,
                RunManifest& manifest) {
  GridImage truth;
  PointSpreadFunction psf;
  SimulatedObservation obs;
  double sigma = cfg.model.sigma;
  rec.run("data", [&] {
    truth = make_sparse_scene(cfg.size, cfg.sources, cfg.seed);
    out.write_image("truth.grd", truth);
    psf = build_psf(cfg.model.psf, "");
    if (cfg.snr_db > 0.0) {
      sigma = sigma_for_snr_db(convolve(truth, psf), cfg.snr_db);
    }
    obs = simulate_deconvolution(truth, psf, sigma, cfg.seed);
    manifest.realized_snr_db = obs.realized_snr_db;
    out.write_image("observation.grd", obs.image);
  });

  PipelineOutput pipe;
  rec.run("map", [&] {
    pipe.model = make_l1_model(obs.image, psf, sigma, cfg.model.lambda,
                               cfg.model.nonneg);
    pipe.map = solve_map(pipe.model, cfg.solver);
    out.write_image("map.grd", pipe.map.x_map);
    out.write("map_report.json", solve_report_json(pipe.model, pipe.map, false));
  });

  const std::size_t win = std::max<std::size_t>(cfg.size / 8, 8);
  const PixelRect roi = densest_rect(pipe.map.x_map, win, win);
  // Zero fill is the sparse-prior-compatible knockout.
  run_region_stages(cfg, out, rec, pipe, fill_rect(pipe.map.x_map, roi, 0.0));

  rec.run("sweep", [&] {
    const GridImage& x_map = pipe.map.x_map;
    const CredibleRegion region =
        build_region(cfg.alpha_list.front(), pipe.model.n(),
                     pipe.map.g_at_map.total);
    const double limit = static_cast<double>(cfg.sweep_max_shift);
    const auto shift_family = [&](bool vertical) {
      return SurrogateFamily([&x_map, roi, vertical](double theta) {
        const long s = std::lround(theta);
        return translate_region(x_map, roi, vertical ? s : 0, vertical ? 0 : s,
                                0.0);
      });
    };
    const SweepResult vert =
        scalar_sweep(region, pipe.model, shift_family(true), "shift_rows", 0.0,
                     -limit, limit, cfg.sweep_tol);
    out.write("sweep_vertical.json", sweep_json(vert));
    const SweepResult horiz =
        scalar_sweep(region, pipe.model, shift_family(false), "shift_cols", 0.0,
                     -limit, limit, cfg.sweep_tol);
    out.write("sweep_horizontal.json", sweep_json(horiz));
  });

  run_chain_stage(cfg, out, rec, pipe);
}

void run_asymptotics(const ExperimentConfig& cfg, OutputDir& out,
                     StageRecorder& rec) {
  rec.run("curve", [&] {
    const auto points = error_curve(cfg.asym_q, cfg.asym_lambda,
                                    log_n_grid(cfg.asym_n_max), cfg.alpha_list);
    out.write("curve.csv", error_curve_csv(cfg.asym_q, points));
  });
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.tool = tool_version();
  manifest.experiment = cfg.experiment;
  manifest.seed = cfg.seed;
  manifest.config_snapshot = config_snapshot_json(cfg);

  OutputDir out(cfg.output_dir, manifest);
  StageRecorder rec(manifest);

  try {
    if (cfg.experiment == "mri") {
      run_mri(cfg, out, rec, manifest);
    } else if (cfg.experiment == "deconv") {
      run_deconv(cfg, out, rec, manifest);
    } else if (cfg.experiment == "asymptotics") {
      run_asymptotics(cfg, out, rec);
    } else {
      throw InvalidInputError("experiment must be mri, deconv or asymptotics");
    }
  } catch (...) {
    write_manifest(manifest, out.path("manifest.json"));
    throw;
  }

  write_manifest(manifest, out.path("manifest.json"));
  return manifest;
}

}  // namespace uq
