// SPDX-License-Identifier: Apache-2.0
//
// mg1: command-line front end for sampling, exact solution, simulation,
// dataset generation, training and evaluation of the M/G/1 surrogate.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mg1/case_study.hpp"
#include "mg1/dataset.hpp"
#include "mg1/errors.hpp"
#include "mg1/metrics.hpp"
#include "mg1/mlp.hpp"
#include "mg1/phtype.hpp"
#include "mg1/qbd.hpp"
#include "mg1/sampler.hpp"
#include "mg1/simulate.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MG1_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw mg1::Error(mg1::ErrorKind::InvalidArgument, "MG1_SEED is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

/// Writes to a file, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw mg1::Error(mg1::ErrorKind::IoError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw mg1::Error(mg1::ErrorKind::ParseError, "bad number '" + item + "'");
    }
  }
  return out;
}

void print_vector(std::ostream& out, const std::vector<double>& v) {
  for (double x : v) out << mg1::format_double(x) << '\n';
}

struct SamplerFlags {
  int max_ph = 20;
  double rho_max = 0.95;
  double rate_lo = 1.0;
  double rate_hi = 1000.0;

  void add(CLI::App* app) {
    app->add_option("--max-ph", max_ph, "Maximum number of phases")->capture_default_str();
    app->add_option("--rho-max", rho_max, "Upper bound of sampled utilization")->capture_default_str();
    app->add_option("--rate-lo", rate_lo, "Lower bound of uniform rate draws")->capture_default_str();
    app->add_option("--rate-hi", rate_hi, "Upper bound of uniform rate draws")->capture_default_str();
  }
  mg1::SamplerConfig config(std::uint64_t seed) const {
    mg1::SamplerConfig c;
    c.max_ph = max_ph;
    c.rho_max = rho_max;
    c.rate_lo = rate_lo;
    c.rate_hi = rate_hi;
    c.seed = seed;
    return c;
  }
};

struct TrainFlags {
  int epochs = 300;
  int batch = 128;
  double lr = 0.01;
  double decay = 0.97;
  double wd = 1e-5;
  int patience = 0;

  void add(CLI::App* app) {
    app->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    app->add_option("--batch", batch, "Batch size")->capture_default_str();
    app->add_option("--lr", lr, "Initial learning rate")->capture_default_str();
    app->add_option("--decay", decay, "Per-epoch learning-rate decay factor")->capture_default_str();
    app->add_option("--wd", wd, "Weight decay")->capture_default_str();
    app->add_option("--patience", patience, "Early stop after this many epochs without improvement (0 = off)")
        ->capture_default_str();
  }
  mg1::TrainConfig config(std::uint64_t seed) const {
    mg1::TrainConfig c;
    c.epochs = epochs;
    c.batch_size = batch;
    c.lr0 = lr;
    c.lr_decay = decay;
    c.weight_decay = wd;
    c.patience = patience;
    c.seed = seed;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned and exact stationary queue-length distributions for M/G/1 queues"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Progress on stderr");

  std::optional<std::uint64_t> seed_flag;
  auto add_seed = [&seed_flag](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "Master seed (default: $MG1_SEED or 42)");
  };

  // sample-ph
  auto* sample_ph_cmd = app.add_subcommand("sample-ph", "Sample phase-type service distributions");
  SamplerFlags sample_flags;
  sample_flags.add(sample_ph_cmd);
  std::size_t sample_count = 1;
  std::string sample_out;
  bool unit_mean = false;
  sample_ph_cmd->add_option("--count", sample_count, "Number of records")->capture_default_str();
  sample_ph_cmd->add_option("--out", sample_out, "Output file (default stdout)");
  sample_ph_cmd->add_flag("--unit-mean", unit_mean, "Rescale each record to mean 1");
  add_seed(sample_ph_cmd);

  // gen-dataset
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Generate a training/validation/test dataset");
  SamplerFlags gen_flags;
  gen_flags.add(gen_cmd);
  std::size_t gen_count = 1000;
  int gen_moments = 5;
  std::string gen_split = "train";
  std::string gen_out;
  int gen_levels = mg1::kDefaultLevels;
  double gen_eps = mg1::kDefaultTailEpsilon;
  int gen_workers = 1;
  gen_cmd->add_option("--count", gen_count, "Number of samples")->capture_default_str();
  gen_cmd->add_option("--n-moments", gen_moments, "Moments per feature row (lambda counts as one)")
      ->capture_default_str();
  gen_cmd->add_option("--split", gen_split, "Split name: train, val or test")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output dataset file")->required();
  gen_cmd->add_option("--l", gen_levels, "Output vector length")->capture_default_str();
  gen_cmd->add_option("--eps", gen_eps, "Maximum tail mass beyond the last level")->capture_default_str();
  gen_cmd->add_option("--workers", gen_workers, "Worker threads")->capture_default_str();
  add_seed(gen_cmd);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Exact queue-length distribution of an M/PH/1 queue");
  double solve_lambda = 0.0;
  std::string solve_ph;
  int solve_levels = mg1::kDefaultLevels;
  double solve_eps = mg1::kDefaultTailEpsilon;
  bool solve_no_tail_check = false;
  solve_cmd->add_option("--lambda", solve_lambda, "Arrival rate")->required();
  solve_cmd->add_option("--ph", solve_ph, "PH record file")->required();
  solve_cmd->add_option("--l", solve_levels, "Output vector length")->capture_default_str();
  solve_cmd->add_option("--eps", solve_eps, "Maximum tail mass")->capture_default_str();
  solve_cmd->add_flag("--no-tail-check", solve_no_tail_check, "Print the vector even if the tail exceeds --eps");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Discrete-event simulation of an M/PH/1 queue");
  double sim_lambda = 0.0;
  std::string sim_ph;
  double sim_events = 1e6;
  double sim_warmup = 1e4;
  int sim_levels = mg1::kDefaultLevels;
  sim_cmd->add_option("--lambda", sim_lambda, "Arrival rate")->required();
  sim_cmd->add_option("--ph", sim_ph, "PH record file")->required();
  sim_cmd->add_option("--events", sim_events, "Total events, warmup included")->capture_default_str();
  sim_cmd->add_option("--warmup", sim_warmup, "Warmup events")->capture_default_str();
  sim_cmd->add_option("--l", sim_levels, "Output vector length")->capture_default_str();
  add_seed(sim_cmd);

  // draw-sample
  auto* draw_cmd = app.add_subcommand("draw-sample", "Draw service times from a PH distribution");
  std::string draw_ph;
  std::size_t draw_count = 50000;
  std::string draw_out;
  draw_cmd->add_option("--ph", draw_ph, "PH record file")->required();
  draw_cmd->add_option("--count", draw_count, "Number of service times")->capture_default_str();
  draw_cmd->add_option("--out", draw_out, "Output file (default stdout)");
  add_seed(draw_cmd);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the surrogate network");
  std::string train_path, val_path, model_out, train_log;
  TrainFlags train_flags;
  train_flags.add(train_cmd);
  train_cmd->add_option("--train", train_path, "Training dataset")->required();
  train_cmd->add_option("--val", val_path, "Validation dataset")->required();
  train_cmd->add_option("--out", model_out, "Model output file")->required();
  train_cmd->add_option("--log", train_log, "Per-epoch CSV log");
  add_seed(train_cmd);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Predict the queue-length distribution");
  std::string predict_model, predict_moments;
  double predict_lambda = 0.0;
  predict_cmd->add_option("--model", predict_model, "Model file")->required();
  predict_cmd->add_option("--lambda", predict_lambda, "Arrival rate (unit-mean service)")->required();
  predict_cmd->add_option("--moments", predict_moments, "Raw service moments m2,m3,...")->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a model on a test dataset");
  std::string eval_model, eval_test, eval_out, eval_hist;
  eval_cmd->add_option("--model", eval_model, "Model file")->required();
  eval_cmd->add_option("--test", eval_test, "Test dataset")->required();
  eval_cmd->add_option("--out", eval_out, "Report file (default stdout)");
  eval_cmd->add_option("--histogram", eval_hist, "Per-sample Metric1 histogram CSV");

  // moment-sweep
  auto* sweep_cmd = app.add_subcommand("moment-sweep", "Validation Metric1 as a function of moment count");
  std::string sweep_train, sweep_val, sweep_out, sweep_ns = "2,5,8";
  TrainFlags sweep_flags;
  sweep_flags.add(sweep_cmd);
  sweep_cmd->add_option("--train", sweep_train, "Training dataset (generated with the largest n)")->required();
  sweep_cmd->add_option("--val", sweep_val, "Validation dataset")->required();
  sweep_cmd->add_option("--n", sweep_ns, "Comma-separated moment counts")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "CSV table (default stdout)");
  add_seed(sweep_cmd);

  // case-study
  auto* case_cmd = app.add_subcommand("case-study", "Predict from raw service data and compare with the truth");
  std::string case_sample, case_model, case_truth, case_out;
  double case_lambda = 0.85;
  case_cmd->add_option("--sample", case_sample, "Service times, one per line")->required();
  case_cmd->add_option("--lambda", case_lambda, "Arrival rate")->capture_default_str();
  case_cmd->add_option("--model", case_model, "Model file")->required();
  case_cmd->add_option("--truth", case_truth, "Ground-truth PH record file");
  case_cmd->add_option("--out", case_out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: UsageError: " << e.what() << '\n';
    return 2;
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();

    if (*sample_ph_cmd) {
      const auto cfg = sample_flags.config(seed);
      Output out(sample_out);
      for (std::size_t i = 0; i < sample_count; ++i) {
        mg1::Rng rng = mg1::Rng::derive(seed, {i});
        mg1::PhaseType ph = mg1::sample_ph(cfg, rng);
        if (unit_mean) ph = mg1::scale_to_unit_mean(ph);
        out.stream() << mg1::to_json_line(ph) << '\n';
      }
    } else if (*gen_cmd) {
      mg1::GenerateOptions opt;
      opt.count = gen_count;
      opt.n_moments = gen_moments;
      opt.sampler = gen_flags.config(seed);
      opt.solve.levels = gen_levels;
      opt.solve.epsilon = gen_eps;
      opt.split = gen_split;
      opt.workers = gen_workers;
      mg1::GenerateReport report;
      const mg1::Dataset data = mg1::generate(opt, &report);
      mg1::save_dataset(gen_out, data);
      std::cerr << "generated " << data.size() << " samples; redrawn for tail mass: " << report.tail_retries
                << ", for other errors: " << report.other_retries << ", livelock rejections: "
                << report.sampler_rejections << '/' << report.sampler_attempts << '\n';
    } else if (*solve_cmd) {
      const mg1::PhaseType ph = mg1::load_phase_type(solve_ph);
      mg1::SolveOptions opt;
      opt.levels = solve_levels;
      opt.epsilon = solve_eps;
      opt.enforce_tail = !solve_no_tail_check;
      const auto sol = mg1::solve(mg1::QueueInstance{solve_lambda, ph}, opt);
      print_vector(std::cout, sol.dist.probs);
      std::cout << "tail " << mg1::format_double(sol.dist.tail_mass) << '\n';
    } else if (*sim_cmd) {
      mg1::SimConfig cfg;
      cfg.horizon_events = static_cast<long>(sim_events);
      cfg.warmup_events = static_cast<long>(sim_warmup);
      cfg.seed = seed;
      cfg.levels = sim_levels;
      const auto res = mg1::simulate_queue(mg1::QueueInstance{sim_lambda, mg1::load_phase_type(sim_ph)}, cfg);
      print_vector(std::cout, res.dist.probs);
      std::cout << "tail " << mg1::format_double(res.dist.tail_mass) << '\n';
      if (verbose) {
        std::cerr << "mean_in_system " << res.mean_in_system << " mean_sojourn " << res.mean_sojourn
                  << " arrival_rate " << res.observed_arrival_rate << '\n';
      }
    } else if (*draw_cmd) {
      const mg1::PhaseType ph = mg1::load_phase_type(draw_ph);
      mg1::Rng rng = mg1::Rng::derive(seed, {0xd7a3u});
      Output out(draw_out);
      for (double x : mg1::draw_service_sample(ph, draw_count, rng)) out.stream() << mg1::format_double(x) << '\n';
    } else if (*train_cmd) {
      const auto train_set = mg1::load_dataset(train_path);
      const auto val_set = mg1::load_dataset(val_path);
      std::unique_ptr<std::ofstream> log;
      if (!train_log.empty()) {
        log = std::make_unique<std::ofstream>(train_log);
        if (!*log) throw mg1::Error(mg1::ErrorKind::IoError, "cannot write " + train_log);
        *log << "epoch,learning_rate,train_loss,val_metric1\n";
      }
      const auto result = mg1::train(train_set, val_set, train_flags.config(seed), [&](const mg1::EpochLog& e) {
        if (log) {
          *log << e.epoch << ',' << mg1::format_double(e.learning_rate) << ',' << mg1::format_double(e.train_loss)
               << ',' << mg1::format_double(e.val_metric1) << '\n';
        }
        if (verbose) {
          std::cerr << "epoch " << e.epoch << " loss " << e.train_loss << " val_metric1 " << e.val_metric1 << '\n';
        }
      });
      mg1::save_model(model_out, result.model);
      std::cerr << "best epoch " << result.best_epoch << " val_metric1 " << result.best_val_metric1 << '\n';
    } else if (*predict_cmd) {
      const auto model = mg1::load_model(predict_model);
      std::vector<double> m{1.0};
      for (double v : parse_csv_doubles(predict_moments)) m.push_back(v);
      if (static_cast<int>(m.size()) != model.n_moments) {
        throw mg1::Error(mg1::ErrorKind::DimensionMismatch,
                         "model expects " + std::to_string(model.n_moments - 1) + " moments (m2..mn)");
      }
      for (double v : m) {
        if (!(v > 0.0)) throw mg1::Error(mg1::ErrorKind::InvalidArgument, "moments must be positive");
      }
      print_vector(std::cout, model.predict(mg1::raw_features(predict_lambda, m)));
    } else if (*eval_cmd) {
      const auto model = mg1::load_model(eval_model);
      const auto test = mg1::load_dataset(eval_test);
      if (test.n_moments < model.n_moments) {
        throw mg1::Error(mg1::ErrorKind::DatasetMismatch, "test set has fewer moments than the model");
      }
      const auto data = mg1::with_moments(test, model.n_moments);
      const auto report = mg1::evaluate(data.targets(), model.predict(data.features()));
      Output out(eval_out);
      mg1::write_report(out.stream(), report);
      if (!eval_hist.empty()) {
        Output hist(eval_hist);
        mg1::write_histogram_csv(hist.stream(), report.per_sample_metric1);
      }
    } else if (*sweep_cmd) {
      const auto train_set = mg1::load_dataset(sweep_train);
      const auto val_set = mg1::load_dataset(sweep_val);
      std::vector<int> ns;
      for (double v : parse_csv_doubles(sweep_ns)) ns.push_back(static_cast<int>(v));
      const auto table = mg1::moment_sweep(train_set, val_set, ns, sweep_flags.config(seed),
                                           [&](int n, const mg1::EpochLog& e) {
                                             if (verbose) {
                                               std::cerr << "n=" << n << " epoch " << e.epoch << " val_metric1 "
                                                         << e.val_metric1 << '\n';
                                             }
                                           });
      Output out(sweep_out);
      out.stream() << "n_moments,best_val_metric1,best_epoch\n";
      for (const auto& row : table) {
        out.stream() << row.n_moments << ',' << mg1::format_double(row.best_val_metric1) << ',' << row.best_epoch
                     << '\n';
      }
      out.stream() << "# selected n = " << mg1::select_moment_count(table) << '\n';
    } else if (*case_cmd) {
      const auto sample = mg1::load_service_sample(case_sample);
      const auto model = mg1::load_model(case_model);
      std::optional<mg1::PhaseType> truth;
      if (!case_truth.empty()) truth = mg1::load_phase_type(case_truth);
      const auto res = mg1::case_study(sample, case_lambda, model, truth ? &*truth : nullptr);
      Output out(case_out);
      auto& os = out.stream();
      os << std::setprecision(6);
      os << "sample_size " << sample.size() << '\n';
      os << "estimated_moments";
      for (double m : res.estimated_moments) os << ' ' << m;
      os << '\n';
      if (res.truth_moments) {
        os << "true_moments";
        for (double m : *res.truth_moments) os << ' ' << m;
        os << '\n';
      }
      os << "model_lambda " << res.scaled_lambda << '\n';
      if (res.metric1) {
        os << "metric1 " << *res.metric1 << '\n';
        os << "percentile\tmetric2\n";
        for (const auto& [p, m2] : res.metric2) {
          os << p * 100.0 << "%\t";
          if (std::isnan(m2.value)) {
            os << "undefined (beyond truncation)\n";
          } else {
            os << m2.value << '\n';
          }
        }
      }
      os << "n\tprediction";
      if (res.truth) os << "\ttruth";
      os << '\n';
      for (std::size_t k = 0; k < res.prediction.size(); ++k) {
        os << k << '\t' << res.prediction[k];
        if (res.truth) os << '\t' << res.truth->probs[k];
        os << '\n';
      }
    }
  } catch (const mg1::Error& e) {
    std::cerr << "error: " << mg1::to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
