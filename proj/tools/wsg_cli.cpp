// Command-line front end; talks to the engine exclusively through the C API.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsg.h"

namespace {

struct CliOptions {
  wsg_run_config run{};
  std::string manifest;
  std::string model;
  std::string image;
  std::string out;
  std::string scores_dir;
  std::string config_file;
  std::string color = "yuv";
  std::string scales = "1";
  std::string gamma_grid = "4,7,10,14";
  std::string lambda_grid = "1e-5";
  double boundary_radius = 3.0;
  double holdout = 0.2;
  int bench_width = 320;
  int bench_height = 240;
  int bench_channels = 3;
  int synth_images = 25;
  int synth_classes = 3;
  int synth_size = 96;
};

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void parse_scales(const std::string& csv, wsg_run_config& run) {
  std::stringstream ss(csv);
  std::string item;
  run.n_image_scales = 0;
  while (std::getline(ss, item, ',') && run.n_image_scales < 8)
    run.image_scales[run.n_image_scales++] = std::stoi(item);
}

// key = value lines; flags given on the command line override these.
void apply_config_file(const std::string& path, CliOptions& opt) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "gamma") opt.run.gamma = std::stod(value);
    else if (key == "lambda") opt.run.lambda = std::stod(value);
    else if (key == "mtilde") opt.run.m_tilde = std::stoi(value);
    else if (key == "levels") opt.run.levels = std::stoi(value);
    else if (key == "depth") opt.run.depth = std::stoi(value);
    else if (key == "sample-frac") opt.run.sample_fraction = std::stod(value);
    else if (key == "epochs") opt.run.epochs = std::stoi(value);
    else if (key == "seed") opt.run.seed = std::stoull(value);
    else if (key == "threads") opt.run.threads = std::stoi(value);
    else if (key == "scales") opt.scales = value;
    else if (key == "color") opt.color = value;
    else if (key == "boundary-radius") opt.boundary_radius = std::stod(value);
    else throw CLI::ValidationError("--config", "unknown key: " + key);
  }
}

int die(wsg_status status) {
  std::fprintf(stderr, "error: %s\n", wsg_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CliOptions opt;
  wsg_run_config_init(&opt.run);

  CLI::App app{"Wavelet-scattering semantic segmentation engine"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_file, "key = value config file");
    cmd->add_option("--gamma", opt.run.gamma, "RBF bandwidth parameter");
    cmd->add_option("--lambda", opt.run.lambda, "SVM regularization weight");
    cmd->add_option("--mtilde", opt.run.m_tilde, "random feature dimension");
    cmd->add_option("--levels", opt.run.levels, "wavelet scales per layer");
    cmd->add_option("--scales", opt.scales, "image scales, e.g. 1,2,4");
    cmd->add_option("--sample-frac", opt.run.sample_fraction, "training pixel fraction");
    cmd->add_option("--epochs", opt.run.epochs, "SGD epochs");
    cmd->add_option("--seed", opt.run.seed, "master seed");
    cmd->add_option("--threads", opt.run.threads, "prediction worker threads");
    cmd->add_option("--color", opt.color, "color handling: yuv|raw");
  };

  CLI::App* train = app.add_subcommand("train", "train a model on a manifest");
  add_common(train);
  train->add_option("--manifest", opt.manifest, "dataset manifest")->required();
  train->add_option("--out", opt.out, "output model path")->required();

  CLI::App* tune = app.add_subcommand("tune", "grid-search gamma and lambda");
  add_common(tune);
  tune->add_option("--manifest", opt.manifest)->required();
  tune->add_option("--gamma-grid", opt.gamma_grid, "comma-separated gamma values");
  tune->add_option("--lambda-grid", opt.lambda_grid, "comma-separated lambda values");
  tune->add_option("--holdout", opt.holdout, "validation image fraction");
  tune->add_option("--out", opt.out, "table output path");

  CLI::App* predict = app.add_subcommand("predict", "label one image");
  predict->add_option("--model", opt.model)->required();
  predict->add_option("--image", opt.image)->required();
  predict->add_option("--out", opt.out, "output label PNG")->required();
  predict->add_option("--scores", opt.scores_dir, "per-class score plane directory");
  predict->add_option("--threads", opt.run.threads);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a model over a manifest");
  eval->add_option("--model", opt.model)->required();
  eval->add_option("--manifest", opt.manifest)->required();
  eval->add_option("--boundary-radius", opt.boundary_radius,
                   "exclude errors within this radius of true boundaries");
  eval->add_option("--out", opt.out, "report output path");
  eval->add_option("--threads", opt.run.threads);

  CLI::App* bench = app.add_subcommand("bench", "operation counts and stage timings");
  add_common(bench);
  bench->add_option("--width", opt.bench_width);
  bench->add_option("--height", opt.bench_height);
  bench->add_option("--channels", opt.bench_channels);
  bench->add_option("--out", opt.out, "report output path");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic texture dataset");
  synth->add_option("--out", opt.out, "output directory")->required();
  synth->add_option("--images", opt.synth_images);
  synth->add_option("--classes", opt.synth_classes);
  synth->add_option("--size", opt.synth_size, "square image side");
  synth->add_option("--seed", opt.run.seed);

  // Config file values apply first; command-line flags override them.
  try {
    app.parse(argc, argv);
    if (!opt.config_file.empty()) {
      CliOptions from_file = opt;
      wsg_run_config_init(&from_file.run);
      apply_config_file(opt.config_file, from_file);
      opt = from_file;
      app.clear();
      app.parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  parse_scales(opt.scales, opt.run);
  if (opt.color == "yuv") opt.run.color_mode = 1;
  else if (opt.color == "raw") opt.run.color_mode = 0;
  else {
    std::fprintf(stderr, "error: --color must be yuv or raw\n");
    return 2;
  }

  if (train->parsed()) {
    wsg_train_stats stats{};
    wsg_status s = wsg_train(opt.manifest.c_str(), &opt.run, opt.out.c_str(), &stats);
    if (s != WSG_OK) return die(s);
    std::printf("feature_dim = %d\nsamples = %llu\nfinal_objective = %g\nmodel_bytes = %llu\n",
                stats.feature_dim, (unsigned long long)stats.sample_count,
                stats.final_objective, (unsigned long long)stats.model_bytes);
  } else if (tune->parsed()) {
    auto gg = parse_list(opt.gamma_grid);
    auto lg = parse_list(opt.lambda_grid);
    wsg_tune_result result{};
    wsg_status s = wsg_tune(opt.manifest.c_str(), &opt.run, gg.data(),
                            (int)gg.size(), lg.data(), (int)lg.size(), opt.holdout,
                            opt.out.empty() ? nullptr : opt.out.c_str(), &result);
    if (s != WSG_OK) return die(s);
    std::printf("best_gamma = %g\nbest_lambda = %g\n", result.best_gamma,
                result.best_lambda);
  } else if (predict->parsed()) {
    wsg_model* model = nullptr;
    wsg_status s = wsg_model_open(opt.model.c_str(), &model);
    if (s != WSG_OK) return die(s);
    s = wsg_predict(model, opt.image.c_str(), opt.out.c_str(),
                    opt.scores_dir.empty() ? nullptr : opt.scores_dir.c_str(),
                    opt.run.threads);
    wsg_model_close(model);
    if (s != WSG_OK) return die(s);
    std::printf("labels written: %s\n", opt.out.c_str());
  } else if (eval->parsed()) {
    wsg_model* model = nullptr;
    wsg_status s = wsg_model_open(opt.model.c_str(), &model);
    if (s != WSG_OK) return die(s);
    double acc = 0, f1 = 0;
    s = wsg_eval(model, opt.manifest.c_str(), opt.boundary_radius, opt.run.threads,
                 opt.out.empty() ? nullptr : opt.out.c_str(), &acc, &f1);
    wsg_model_close(model);
    if (s != WSG_OK) return die(s);
    std::printf("pixel_accuracy = %g\nmean_f1 = %g\n", acc, f1);
  } else if (bench->parsed()) {
    wsg_op_report nominal{}, configured{};
    std::string tmp_report = opt.out.empty() ? "" : opt.out;
    wsg_status s = wsg_bench(opt.bench_width, opt.bench_height, opt.bench_channels,
                             &opt.run, &nominal, &configured,
                             tmp_report.empty() ? nullptr : tmp_report.c_str());
    if (s != WSG_OK) return die(s);
    std::printf("nominal_total_mop = %.3f\nconfigured_total_mop = %.3f\n",
                nominal.total_ops / 1e6, configured.total_ops / 1e6);
  } else if (synth->parsed()) {
    wsg_status s = wsg_synth(opt.synth_images, opt.synth_classes, opt.synth_size,
                             opt.synth_size, opt.run.seed, opt.out.c_str());
    if (s != WSG_OK) return die(s);
    std::printf("dataset written: %s\n", opt.out.c_str());
  }
  return 0;
}
