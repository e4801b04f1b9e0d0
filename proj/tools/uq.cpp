// uq: MAP estimation and conservative credible-region analysis for convex
// imaging inverse problems, plus the px-MALA benchmark sampler and the
// analytic threshold oracles.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uq/analytic.hpp"
#include "uq/config.hpp"
#include "uq/experiment.hpp"
#include "uq/io.hpp"
#include "uq/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigBundle {
  uq::toml::Table table;
  uq::ExperimentConfig experiment;
  std::string base_dir;
};

ConfigBundle load_config(const std::string& path) {
  ConfigBundle b;
  b.table = uq::toml::parse_file(path);
  b.experiment = uq::parse_experiment_config(b.table);
  b.base_dir = fs::path(path).parent_path().string();
  return b;
}

std::vector<double> parse_alpha_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw uq::InvalidInputError("empty alpha list");
  for (double a : out) {
    if (!(a > 0.0 && a < 1.0)) {
      throw uq::InvalidInputError("alpha values must be in (0,1)");
    }
  }
  return out;
}

uq::PixelRect parse_roi(const std::string& csv) {
  std::vector<long> v;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stol(tok));
  if (v.size() != 4 || v[0] < 0 || v[1] < 0 || v[2] <= 0 || v[3] <= 0) {
    throw uq::InvalidInputError("--roi expects x,y,w,h with positive size");
  }
  return uq::PixelRect{static_cast<std::size_t>(v[0]),
                       static_cast<std::size_t>(v[1]),
                       static_cast<std::size_t>(v[2]),
                       static_cast<std::size_t>(v[3])};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
  if (!os) throw uq::IoError("cannot open for writing: " + out_path);
  os << text;
}

struct MapReportFile {
  double g_at_map = 0.0;
  std::size_t n = 0;
};

MapReportFile read_map_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw uq::IoError("cannot open map report: " + path);
  json j;
  is >> j;
  MapReportFile r;
  r.g_at_map = j.at("g_at_map").get<double>();
  r.n = j.at("n").get<std::size_t>();
  return r;
}

int cmd_phantom(std::size_t size, const std::string& out,
                const std::string& pgm) {
  uq::GridImage img = uq::make_phantom(size);
  if (!out.empty()) uq::write_grd(out, img);
  if (!pgm.empty()) uq::write_pgm(pgm, img);
  json j{{"size", size}, {"out", out}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_scene(std::size_t size, std::size_t sources, std::uint64_t seed,
              const std::string& out) {
  uq::GridImage img = uq::make_sparse_scene(size, sources, seed);
  uq::write_grd(out, img);
  json j{{"size", size}, {"sources", sources}, {"seed", seed}, {"out", out}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& truth_path,
                 const std::string& out_path, long seed_flag) {
  ConfigBundle cfg = load_config(config_path);
  const uq::ModelConfig& mc = cfg.experiment.model;
  const std::uint64_t seed =
      seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : cfg.experiment.seed;

  std::string tpath = truth_path.empty() ? mc.data.truth_path : truth_path;
  if (tpath.empty()) {
    throw uq::InvalidInputError("simulate: need --truth or [data] truth_path");
  }
  uq::GridImage truth = uq::read_image(uq::resolve_path(tpath, cfg.base_dir));

  std::string opath = out_path.empty() ? mc.data.observation_path : out_path;
  if (opath.empty()) {
    throw uq::InvalidInputError(
        "simulate: need --out or [data] observation_path");
  }
  opath = uq::resolve_path(opath, out_path.empty() ? cfg.base_dir : "");

  double realized = 0.0;
  if (mc.kind == uq::ModelKind::TvTomography) {
    uq::SamplingMask mask = uq::build_mask(mc.mask, truth.height, truth.width);
    auto obs = uq::simulate_tomography(truth, mask, mc.sigma, seed);
    uq::write_cpx(opath, obs.fourier);
    realized = obs.realized_snr_db;
  } else if (mc.kind == uq::ModelKind::L1Deconvolution) {
    uq::PointSpreadFunction psf = uq::build_psf(mc.psf, cfg.base_dir);
    double sigma = mc.sigma;
    if (cfg.experiment.snr_db > 0.0) {
      sigma = uq::sigma_for_snr_db(uq::convolve(truth, psf),
                                   cfg.experiment.snr_db);
    }
    auto obs = uq::simulate_deconvolution(truth, psf, sigma, seed);
    uq::write_grd(opath, obs.image);
    realized = obs.realized_snr_db;
  } else {
    throw uq::InvalidInputError("simulate: gen_gaussian has no observation");
  }
  json j{{"observation", opath}, {"seed", seed}, {"realized_snr_db", realized}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_map(const std::string& config_path, const std::string& out,
            const std::string& save_map) {
  ConfigBundle cfg = load_config(config_path);
  uq::PosteriorModel model = uq::build_model(cfg.experiment.model, cfg.base_dir);
  uq::SolveReport report = uq::solve_map(model, cfg.experiment.solver);
  if (!save_map.empty()) uq::write_grd(save_map, report.x_map);
  const std::string text = uq::solve_report_json(model, report, true);
  if (!out.empty()) emit(text, out);
  std::cout << text;
  return 0;
}

int cmd_region(double alpha, const std::string& map_report) {
  MapReportFile r = read_map_report(map_report);
  std::cout << uq::region_json(uq::build_region(alpha, r.n, r.g_at_map));
  return 0;
}

int cmd_test(const std::string& config_path, const std::string& map_report,
             const std::string& surrogate_path, double alpha,
             const std::string& out) {
  ConfigBundle cfg = load_config(config_path);
  uq::PosteriorModel model = uq::build_model(cfg.experiment.model, cfg.base_dir);
  MapReportFile r = read_map_report(map_report);
  uq::CredibleRegion region = uq::build_region(alpha, r.n, r.g_at_map);
  uq::GridImage surrogate = uq::read_image(surrogate_path);
  emit(uq::outcome_json(uq::knockout_test(region, model, surrogate)), out);
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& map_path,
              const std::string& family_name, const std::string& roi_csv,
              double alpha, double lo, double hi, double tol,
              const std::string& axis, const std::string& out) {
  ConfigBundle cfg = load_config(config_path);
  uq::PosteriorModel model = uq::build_model(cfg.experiment.model, cfg.base_dir);
  uq::GridImage x_map = uq::read_image(map_path);
  const double g_map = uq::eval_potential(model, x_map).total;
  uq::CredibleRegion region = uq::build_region(alpha, model.n(), g_map);
  uq::PixelRect roi = parse_roi(roi_csv);

  uq::SurrogateFamily family;
  std::string name;
  double theta0 = 0.0;
  if (family_name == "intensity") {
    const double fill = uq::border_mean(x_map, roi);
    family = [&x_map, roi, fill](double theta) {
      uq::GridImage s = x_map;
      for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
        for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) {
          s.at(r, c) = fill + theta * (x_map.at(r, c) - fill);
        }
      }
      return s;
    };
    name = "intensity_scale";
    theta0 = 1.0;
  } else if (family_name == "shift") {
    const bool rows = axis != "cols";
    family = [&x_map, roi, rows](double theta) {
      const long s = std::lround(theta);
      return uq::translate_region(x_map, roi, rows ? s : 0, rows ? 0 : s, 0.0);
    };
    name = rows ? "shift_rows" : "shift_cols";
    theta0 = 0.0;
  } else {
    throw uq::InvalidInputError("--family must be intensity or shift");
  }
  emit(uq::sweep_json(uq::scalar_sweep(region, model, family, name, theta0, lo,
                                       hi, tol)),
       out);
  return 0;
}

int cmd_sample(const std::string& config_path, long iters, long burn, long thin,
               long seed, const std::string& alphas_csv,
               const std::string& out_dir, const std::string& start_path) {
  ConfigBundle cfg = load_config(config_path);
  uq::PosteriorModel model = uq::build_model(cfg.experiment.model, cfg.base_dir);

  uq::ChainConfig chain = cfg.experiment.chain;
  if (iters > 0) chain.iterations = iters;
  if (burn >= 0) chain.burn_in = burn;
  if (thin > 0) chain.thin = thin;
  if (seed >= 0) chain.seed = static_cast<std::uint64_t>(seed);

  std::optional<uq::GridImage> x0;
  uq::SolveReport map_report;
  if (!start_path.empty()) {
    x0 = uq::read_image(start_path);
    map_report.x_map = *x0;
    map_report.g_at_map = uq::eval_potential(model, *x0);
  } else {
    map_report = uq::solve_map(model, cfg.experiment.solver);
    x0 = map_report.x_map;
  }

  uq::ChainOutput outp = uq::run_chain(model, chain, x0);

  std::vector<double> alphas = alphas_csv.empty()
                                   ? cfg.experiment.alpha_list
                                   : parse_alpha_list(alphas_csv);
  std::vector<uq::QuantileEstimate> estimates;
  std::vector<uq::CredibleRegion> regions;
  for (double a : alphas) {
    estimates.push_back(uq::estimate_gamma(outp, a));
    regions.push_back(uq::build_region(a, model.n(), map_report.g_at_map.total));
  }
  const std::string csv = uq::gamma_table_csv(alphas, estimates, regions);
  const std::string summary = uq::chain_summary_json(outp);
  if (out_dir.empty()) {
    std::cout << summary << csv;
  } else {
    fs::create_directories(out_dir);
    emit(summary, (fs::path(out_dir) / "chain.json").string());
    emit(csv, (fs::path(out_dir) / "samples.csv").string());
    std::cout << summary;
  }
  return 0;
}

int cmd_asymptotics(double q, double lambda, const std::string& alphas_csv,
                    std::size_t n_max, const std::string& out) {
  const auto alphas = parse_alpha_list(alphas_csv);
  const auto points =
      uq::error_curve(q, lambda, uq::log_n_grid(n_max), alphas);
  emit(uq::error_curve_csv(q, points), out);
  return 0;
}

int cmd_run(const std::string& config_path) {
  ConfigBundle cfg = load_config(config_path);
  uq::RunManifest manifest = uq::run_experiment(cfg.experiment);
  json j{{"output_dir", cfg.experiment.output_dir},
         {"experiment", manifest.experiment},
         {"files", manifest.files.size()}};
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"credible-region analysis for convex imaging inverse problems"};
  app.require_subcommand(1);

  // phantom
  auto* phantom = app.add_subcommand("phantom", "render the head phantom");
  std::size_t ph_size = 128;
  std::string ph_out, ph_pgm;
  phantom->add_option("--size", ph_size, "image side length");
  phantom->add_option("--out", ph_out, "GRD1 output path");
  phantom->add_option("--pgm", ph_pgm, "optional PGM preview path");

  // scene
  auto* scene = app.add_subcommand("scene", "generate a sparse point scene");
  std::size_t sc_size = 256, sc_sources = 100;
  long sc_seed = 0;
  std::string sc_out = "scene.grd";
  scene->add_option("--size", sc_size, "image side length");
  scene->add_option("--sources", sc_sources, "number of unit impulses");
  scene->add_option("--seed", sc_seed, "rng seed");
  scene->add_option("--out", sc_out, "GRD1 output path");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate an observation");
  std::string sim_cfg, sim_truth, sim_out;
  long sim_seed = -1;
  simulate->add_option("--config", sim_cfg, "run configuration")->required();
  simulate->add_option("--truth", sim_truth, "truth image (GRD1)");
  simulate->add_option("--out", sim_out, "observation output path");
  simulate->add_option("--seed", sim_seed, "rng seed (overrides config)");

  // map
  auto* map_cmd = app.add_subcommand("map", "compute the MAP estimate");
  std::string map_cfg, map_out, map_save;
  map_cmd->add_option("--config", map_cfg, "run configuration")->required();
  map_cmd->add_option("--out", map_out, "solve report JSON path");
  map_cmd->add_option("--save-map", map_save, "GRD1 path for the estimate");

  // region
  auto* region = app.add_subcommand("region", "credible-region thresholds");
  double rg_alpha = 0.01;
  std::string rg_report;
  region->add_option("--alpha", rg_alpha, "significance level")->required();
  region->add_option("--map-report", rg_report, "solve report JSON")->required();

  // test
  auto* test = app.add_subcommand("test", "knockout hypothesis test");
  std::string ts_cfg, ts_report, ts_surrogate, ts_out;
  double ts_alpha = 0.01;
  test->add_option("--config", ts_cfg, "run configuration")->required();
  test->add_option("--map-report", ts_report, "solve report JSON")->required();
  test->add_option("--surrogate", ts_surrogate, "surrogate image")->required();
  test->add_option("--alpha", ts_alpha, "significance level");
  test->add_option("--out", ts_out, "outcome JSON path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "region boundary sweep");
  std::string sw_cfg, sw_map, sw_family = "intensity", sw_roi, sw_axis = "rows";
  std::string sw_out;
  double sw_alpha = 0.01, sw_lo = 0.0, sw_hi = 3.0, sw_tol = 1e-3;
  sweep->add_option("--config", sw_cfg, "run configuration")->required();
  sweep->add_option("--map", sw_map, "MAP estimate (GRD1)")->required();
  sweep->add_option("--family", sw_family, "intensity or shift");
  sweep->add_option("--roi", sw_roi, "x,y,w,h rectangle")->required();
  sweep->add_option("--alpha", sw_alpha, "significance level");
  sweep->add_option("--lo", sw_lo, "lower end of the parameter range");
  sweep->add_option("--hi", sw_hi, "upper end of the parameter range");
  sweep->add_option("--tol", sw_tol, "bisection tolerance");
  sweep->add_option("--axis", sw_axis, "rows or cols (shift family)");
  sweep->add_option("--out", sw_out, "result JSON path (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "run the px-MALA benchmark");
  std::string sm_cfg, sm_alphas, sm_outdir, sm_start;
  long sm_iters = 0, sm_burn = -1, sm_thin = 0, sm_seed = -1;
  sample->add_option("--config", sm_cfg, "run configuration")->required();
  sample->add_option("--iters", sm_iters, "chain length");
  sample->add_option("--burn", sm_burn, "burn-in steps");
  sample->add_option("--thin", sm_thin, "thinning stride");
  sample->add_option("--seed", sm_seed, "rng seed");
  sample->add_option("--alpha-list", sm_alphas, "comma-separated alphas");
  sample->add_option("--out-dir", sm_outdir, "directory for chain.json/samples.csv");
  sample->add_option("--start", sm_start, "start image (default: MAP)");

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "analytic error curves");
  double as_q = 1.0, as_lambda = 1.0;
  std::string as_alphas = "0.2,0.1,0.05", as_out;
  std::size_t as_nmax = 10000;
  asym->add_option("--q", as_q, "exponent of the analytic family");
  asym->add_option("--lambda", as_lambda, "scale of the analytic family");
  asym->add_option("--alphas", as_alphas, "comma-separated alphas");
  asym->add_option("--nmax", as_nmax, "largest dimension");
  asym->add_option("--out", as_out, "CSV output path (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "run a configured experiment");
  std::string rn_cfg;
  run->add_option("--config", rn_cfg, "experiment configuration")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(phantom)) return cmd_phantom(ph_size, ph_out, ph_pgm);
    if (app.got_subcommand(scene)) {
      return cmd_scene(sc_size, sc_sources, static_cast<std::uint64_t>(sc_seed),
                       sc_out);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(sim_cfg, sim_truth, sim_out, sim_seed);
    }
    if (app.got_subcommand(map_cmd)) return cmd_map(map_cfg, map_out, map_save);
    if (app.got_subcommand(region)) return cmd_region(rg_alpha, rg_report);
    if (app.got_subcommand(test)) {
      return cmd_test(ts_cfg, ts_report, ts_surrogate, ts_alpha, ts_out);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(sw_cfg, sw_map, sw_family, sw_roi, sw_alpha, sw_lo, sw_hi,
                       sw_tol, sw_axis, sw_out);
    }
    if (app.got_subcommand(sample)) {
      return cmd_sample(sm_cfg, sm_iters, sm_burn, sm_thin, sm_seed, sm_alphas,
                        sm_outdir, sm_start);
    }
    if (app.got_subcommand(asym)) {
      return cmd_asymptotics(as_q, as_lambda, as_alphas, as_nmax, as_out);
    }
    if (app.got_subcommand(run)) return cmd_run(rn_cfg);
  } catch (const uq::InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const uq::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const uq::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const uq::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
