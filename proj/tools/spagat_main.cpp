// Command-line front end for the spatial and technology aggregation toolkit.
#include <cstdint>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spagat/pipeline.hpp"

namespace {

bool parse_on_off(const std::string& s, const std::string& flag) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw spagat::InputError(flag + " must be 'on' or 'off'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spagat: spatial grouping and technology aggregation for "
               "energy-system-model datasets"};
  app.require_subcommand(1);

  std::string dataset_dir, out_dir;
  std::string contiguity = "on";
  std::string mode = "heuristic";
  std::string timing = "on";
  std::uint64_t seed = 0;
  std::size_t k = 1, n_ts = 1, workers = 1;
  std::size_t n_regions = 9, time_steps = 24, n_plants = 4;
  std::size_t max_cut_rounds = 1000;
  std::vector<std::size_t> k_list, nts_list;
  std::vector<std::string> techs;

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset directory");
  gen->add_option("--n-regions", n_regions, "number of regions")->capture_default_str();
  gen->add_option("--time-steps,-T", time_steps, "time steps per series")->capture_default_str();
  gen->add_option("--n-plants", n_plants, "plants per region per technology")
      ->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out_dir, "output directory")->required();

  auto* group = app.add_subcommand("group", "spatially aggregate a dataset into k groups");
  group->add_option("--dataset", dataset_dir, "dataset directory")->required();
  group->add_option("--k", k, "number of region groups")->required();
  group->add_option("--contiguity", contiguity, "contiguity constraints {on,off}")
      ->capture_default_str();
  group->add_option("--mode", mode, "solver mode {exact,heuristic}")->capture_default_str();
  group->add_option("--seed", seed, "heuristic seed")->capture_default_str();
  group->add_option("--max-cut-rounds", max_cut_rounds, "separator cut round limit")
      ->capture_default_str();
  group->add_option("--out", out_dir, "output directory")->required();

  auto* techagg = app.add_subcommand("techagg", "compress fleets into representative sets");
  techagg->add_option("--dataset", dataset_dir, "dataset directory")->required();
  techagg->add_option("--tech", techs, "technology to aggregate (default: all)");
  techagg->add_option("--n-ts", n_ts, "representative series per region")->required();
  techagg->add_option("--out", out_dir, "output directory")->required();

  auto* distances = app.add_subcommand("distances", "export the pairwise distance matrix");
  distances->add_option("--dataset", dataset_dir, "dataset directory")->required();
  distances->add_option("--out", out_dir, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "run a (k, n_ts) grid and emit metrics");
  sweep->add_option("--dataset", dataset_dir, "dataset directory")->required();
  sweep->add_option("--k", k_list, "group counts")->required()->delimiter(',');
  sweep->add_option("--n-ts", nts_list, "representative series counts")
      ->required()
      ->delimiter(',');
  sweep->add_option("--contiguity", contiguity, "contiguity constraints {on,off}")
      ->capture_default_str();
  sweep->add_option("--mode", mode, "solver mode {exact,heuristic}")->capture_default_str();
  sweep->add_option("--seed", seed, "solver seed")->capture_default_str();
  sweep->add_option("--workers", workers, "concurrent sweep cells")->capture_default_str();
  sweep->add_option("--timing", timing, "record wall time per cell {on,off}")
      ->capture_default_str();
  sweep->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  return spagat::run_with_exit_code([&] {
    if (gen->parsed()) {
      spagat::GenConfig cfg;
      cfg.n_regions = n_regions;
      cfg.time_steps = time_steps;
      cfg.n_plants = n_plants;
      cfg.seed = seed;
      spagat::generate_dataset(cfg, out_dir);
      return;
    }
    if (group->parsed()) {
      spagat::GroupOptions opt;
      opt.dataset_dir = dataset_dir;
      opt.out_dir = out_dir;
      opt.k = k;
      opt.contiguity = parse_on_off(contiguity, "--contiguity");
      opt.mode = spagat::solve_mode_from_string(mode);
      opt.seed = seed;
      opt.max_cut_rounds = max_cut_rounds;
      spagat::run_group(opt);
      return;
    }
    if (techagg->parsed()) {
      spagat::TechAggOptions opt;
      opt.dataset_dir = dataset_dir;
      opt.out_dir = out_dir;
      opt.techs = techs;
      opt.n_ts = n_ts;
      spagat::run_techagg(opt);
      return;
    }
    if (distances->parsed()) {
      spagat::DistancesOptions opt;
      opt.dataset_dir = dataset_dir;
      opt.out_dir = out_dir;
      spagat::run_distances(opt);
      return;
    }
    if (sweep->parsed()) {
      spagat::SweepOptions opt;
      opt.dataset_dir = dataset_dir;
      opt.out_dir = out_dir;
      opt.k_list = k_list;
      opt.nts_list = nts_list;
      opt.contiguity = parse_on_off(contiguity, "--contiguity");
      opt.mode = spagat::solve_mode_from_string(mode);
      opt.seed = seed;
      opt.workers = workers;
      opt.timing = parse_on_off(timing, "--timing");
      spagat::run_sweep(opt);
      return;
    }
  });
}
