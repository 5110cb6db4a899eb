#include "l2f/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "l2f/errors.hpp"
#include "l2f/serialization.hpp"

namespace l2f {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "Inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw config_error(std::string("cannot parse ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw config_error(std::string("empty ") + what + " list");
  return out;
}

void apply_model_string(RunConfig& cfg, const std::string& text) {
  const auto parts = parse_double_list(text, "model");
  if (parts.size() != 4) throw config_error("--model expects T21,T22,A1,A2");
  cfg.t21_ms = parts[0];
  cfg.t22_ms = parts[1];
  cfg.a1 = parts[2];
  cfg.a2 = parts[3];
}

void apply_snr_string(RunConfig& cfg, const std::string& text) {
  cfg.snrs = parse_double_list(text, "snr");
}

// Config file keys mirror the CLI flags one for one; anything else is an error.
void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw config_error(std::string("config parse error: ") + err.what());
  }
  static const std::vector<std::string> known = {
      "model", "snr",   "realizations", "seed", "method", "n",     "m",
      "tau",   "shift-schedule", "delta", "bandwidth", "jobs", "trace", "out"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error("unknown config key: " + key);
    (void)value;
  }
  if (doc.contains("model")) apply_model_string(cfg, doc["model"].get<std::string>());
  if (doc.contains("snr")) {
    if (doc["snr"].is_string())
      apply_snr_string(cfg, doc["snr"].get<std::string>());
    else
      cfg.snrs = {doc["snr"].get<double>()};
  }
  if (doc.contains("realizations")) cfg.realizations = doc["realizations"].get<int>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
  if (doc.contains("method")) cfg.method = doc["method"].get<std::string>();
  if (doc.contains("n")) cfg.l2f.degree = doc["n"].get<int>();
  if (doc.contains("m")) cfg.l2f.quad_order = doc["m"].get<int>();
  if (doc.contains("tau")) cfg.l2f.tau_ms = doc["tau"].get<double>();
  if (doc.contains("shift-schedule"))
    cfg.l2f.shift_schedule = parse_double_list(doc["shift-schedule"].get<std::string>(), "shift");
  if (doc.contains("delta")) cfg.l2f.delta = doc["delta"].get<double>();
  if (doc.contains("bandwidth")) cfg.l2f.bandwidth = doc["bandwidth"].get<int>();
  if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
  if (doc.contains("trace")) cfg.trace = doc["trace"].get<bool>();
  if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
}

void validate(const RunConfig& cfg) {
  if (cfg.t21_ms <= 0.0 || cfg.t22_ms <= 0.0)
    throw config_error("decay constants must be positive");
  if (cfg.a1 < 0.0 || cfg.a2 < 0.0) throw config_error("amplitudes must be nonnegative");
  if (cfg.realizations < 1) throw config_error("realizations must be >= 1");
  if (cfg.method != "l2f" && cfg.method != "nlls" && cfg.method != "both")
    throw config_error("method must be l2f, nlls, or both");
  if (cfg.l2f.degree < 1) throw config_error("n must be >= 1");
  if (cfg.l2f.quad_order < cfg.l2f.degree) throw config_error("m must be >= n");
  if (cfg.l2f.tau_ms <= 0.0) throw config_error("tau must be positive");
  if (cfg.l2f.bandwidth < 2) throw config_error("bandwidth must be >= 2");
  for (double snr : cfg.snrs)
    if (!(snr > 0.0)) throw config_error("snr values must be positive (or inf)");
}

json resolved_config_json(const RunConfig& cfg) {
  json doc;
  doc["model"] = {{"t21_ms", cfg.t21_ms}, {"t22_ms", cfg.t22_ms}, {"a1", cfg.a1}, {"a2", cfg.a2}};
  doc["snr"] = json::array();
  for (double snr : cfg.snrs)
    doc["snr"].push_back(std::isinf(snr) ? json("inf") : json(snr));
  if (cfg.snrs.empty()) doc["snr"].push_back("inf");
  doc["realizations"] = cfg.realizations;
  doc["seed"] = cfg.seed;
  doc["method"] = cfg.method;
  doc["n"] = cfg.l2f.degree;
  doc["m"] = cfg.l2f.quad_order;
  doc["tau"] = cfg.l2f.tau_ms;
  doc["shift-schedule"] = cfg.l2f.shift_schedule;
  doc["delta"] = resolved_delta(cfg.l2f);
  doc["bandwidth"] = cfg.l2f.bandwidth;
  doc["omega-max"] = cfg.l2f.omega_max;
  doc["measure"] = to_string(cfg.l2f.measure_kind);
  doc["peak-refine"] = cfg.l2f.peak_refine;
  doc["jobs"] = cfg.jobs;
  doc["trace"] = cfg.trace;
  doc["out"] = cfg.out_dir;
  if (cfg.shift_override) doc["shift"] = *cfg.shift_override;
  return doc;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::ios_base::failure("cannot create output directory: " + cfg.out_dir);
  return dir;
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : out_(path) {
    if (!out_) throw std::ios_base::failure("cannot open " + path.string());
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quoted(fields[i]);
    }
    out_ << "\r\n";
    if (!out_) throw std::ios_base::failure("write failure");
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

 private:
  static std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
      out += c;
      if (c == '"') out += '"';
    }
    out += '"';
    return out;
  }
  std::ofstream out_;
};

void write_json_file(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path.string());
  out << doc.dump(2) << "\n";
  if (!out) throw std::ios_base::failure("write failure on " + path.string());
}

double first_snr(const RunConfig& cfg) {
  return cfg.snrs.empty() ? std::numeric_limits<double>::infinity() : cfg.snrs.front();
}

std::unique_ptr<SignalSource> make_source(const RunConfig& cfg) {
  const SignalModel model = cfg.model();
  const double snr = first_snr(cfg);
  if (std::isinf(snr)) return std::make_unique<SyntheticSource>(model);
  const NoiseSpec spec{snr, cfg.seed, 1};
  return std::make_unique<SampledSource>(time_grid_ms(model),
                                         add_noise(synthesize(model), spec, 0));
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const no_peak_error& err) {
    json reason = {{"error", "estimation_failure"}, {"detail", err.what()}};
    std::cerr << reason.dump() << "\n";
    return kExitEstimation;
  } catch (const config_error& err) {
    json reason = {{"error", "validation"}, {"detail", err.what()}};
    std::cerr << reason.dump() << "\n";
    return kExitValidation;
  } catch (const std::ios_base::failure& err) {
    json reason = {{"error", "io"}, {"detail", err.what()}};
    std::cerr << reason.dump() << "\n";
    return kExitIo;
  } catch (const std::exception& err) {
    json reason = {{"error", "internal"}, {"detail", err.what()}};
    std::cerr << reason.dump() << "\n";
    return kExitEstimation;
  }
}

}  // namespace

SignalModel RunConfig::model() const { return make_model({a1, a2}, {t21_ms, t22_ms}); }

int cmd_simulate(const RunConfig& cfg) {
  return run_guarded([&] {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    const SignalModel model = cfg.model();
    const Eigen::VectorXd times = time_grid_ms(model);
    const Eigen::VectorXd clean = synthesize(model);
    const double snr = first_snr(cfg);
    const Eigen::VectorXd noisy =
        std::isinf(snr) ? clean : add_noise(clean, NoiseSpec{snr, cfg.seed, 1}, 0);

    CsvWriter csv(dir / "signal.csv");
    csv.row({"time_ms", "noiseless", "noisy"});
    for (Eigen::Index i = 0; i < times.size(); ++i)
      csv.row({CsvWriter::num(times[i]), CsvWriter::num(clean[i]), CsvWriter::num(noisy[i])});
    write_json_file(dir / "signal.json", resolved_config_json(cfg));
    std::cout << "wrote " << (dir / "signal.csv").string() << "\n";
  });
}

int cmd_expand(const RunConfig& cfg) {
  return run_guarded([&] {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    const auto src = make_source(cfg);

    const SMZMeasure base = gauss_measure(cfg.l2f.quad_order);
    const double reach = base.nodes.cwiseAbs().maxCoeff();
    const double duration_units = src->duration_ms() / cfg.l2f.tau_ms;
    const double shift = cfg.shift_override
                             ? *cfg.shift_override
                             : resolved_shift_schedule(cfg.l2f, duration_units, reach).front();

    const SMZMeasure mu = restrict_to_window(base, shift, duration_units - shift);
    const Eigen::VectorXd samples = shift_and_weight(*src, cfg.l2f.tau_ms, shift, mu.nodes);
    const HermiteExpansion expansion = fit_expansion(samples, mu, cfg.l2f.degree);

    json doc = to_json(expansion);
    doc["shift"] = shift;
    doc["config"] = resolved_config_json(cfg);
    write_json_file(dir / "expansion.json", doc);

    // Fine-grid approximation error over the node span.
    const int grid_size = 1601;
    CsvWriter csv(dir / "approx_error.csv");
    csv.row({"x", "signal", "approximation", "abs_error"});
    for (int i = 0; i < grid_size; ++i) {
      const double x = -8.0 + 16.0 * i / (grid_size - 1);
      double signal = 0.0;
      const double t_ms = (x + shift) * cfg.l2f.tau_ms;
      if (t_ms >= 0.0 && t_ms <= src->duration_ms())
        signal = src->value_at_ms(t_ms) * std::exp(-0.5 * x * x);
      const double approx = evaluate(expansion, x);
      csv.row({CsvWriter::num(x), CsvWriter::num(signal), CsvWriter::num(approx),
               CsvWriter::num(std::abs(signal - approx))});
    }
    std::cout << "wrote " << (dir / "approx_error.csv").string() << "\n";
  });
}

int cmd_spectrum(const RunConfig& cfg) {
  return run_guarded([&] {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    const auto src = make_source(cfg);

    json doc;
    double shift = 0.0;
    if (cfg.shift_override) {
      shift = *cfg.shift_override;
      doc["shift_source"] = "override";
    } else {
      const L2FTrace trace = estimate_t22(*src, cfg.l2f);
      if (trace.chosen_index < 0) throw no_peak_error("no usable peak at any shift");
      shift = trace.shifts[static_cast<size_t>(trace.chosen_index)].shift;
      doc["shift_source"] = "stabilized";
      doc["per_shift"] = to_json(trace)["shifts"];
    }
    const SpectrumEstimate est = spectrum_for_shift(*src, cfg.l2f, shift);
    const Peak peak = detect_peak(est.abs_sigma, est.x_grid, cfg.l2f.peak_refine);
    const double lambda_hat = rate_from_peak(peak.x, est.delta);
    if (lambda_hat <= 0.0) throw no_peak_error("peak at zero frequency");

    CsvWriter csv(dir / "spectrum.csv");
    csv.row({"x", "abs_sigma"});
    for (Eigen::Index i = 0; i < est.x_grid.size(); ++i)
      csv.row({CsvWriter::num(est.x_grid[i]), CsvWriter::num(est.abs_sigma[i])});

    doc["shift"] = shift;
    doc["peak"] = {{"x", peak.x}, {"height", peak.height}};
    doc["lambda_hat"] = lambda_hat;
    doc["t22_hat_ms"] = cfg.l2f.tau_ms / lambda_hat;
    doc["config"] = resolved_config_json(cfg);
    write_json_file(dir / "spectrum.json", doc);
    std::cout << "t22_hat_ms " << cfg.l2f.tau_ms / lambda_hat << "\n";
  });
}

int cmd_experiment(const RunConfig& cfg) {
  return run_guarded([&] {
    validate(cfg);
    const fs::path dir = prepare_out_dir(cfg);
    const SignalModel model = cfg.model();

    std::vector<Method> methods;
    if (cfg.method == "l2f" || cfg.method == "both") methods.push_back(Method::l2f);
    if (cfg.method == "nlls" || cfg.method == "both") methods.push_back(Method::nlls);
    std::vector<double> snrs = cfg.snrs;
    if (snrs.empty()) snrs.push_back(std::numeric_limits<double>::infinity());

    CsvWriter summary(dir / "summary.csv");
    summary.row({"method", "snr", "realizations", "failures",
                 "a1_mean", "a1_stdev", "a1_rmse", "a2_mean", "a2_stdev", "a2_rmse",
                 "t21_mean", "t21_stdev", "t21_rmse", "t22_mean", "t22_stdev", "t22_rmse",
                 "wall_s"});
    CsvWriter records(dir / "realizations.csv");
    records.row({"method", "snr", "index", "a1", "a2", "t21_ms", "t22_ms", "shift", "converged",
                 "failed", "reason"});
    json summary_json = json::array();

    json traces_doc = json::array();
    for (const Method method : methods) {
      for (const double snr : snrs) {
        const NoiseSpec spec{snr, cfg.seed, cfg.realizations};
        std::vector<L2FTrace> traces;
        const bool want_traces = cfg.trace && method == Method::l2f;
        const auto start = std::chrono::steady_clock::now();
        const BatchRun run = run_batch(model, spec, method, cfg.l2f, cfg.jobs,
                                       want_traces ? &traces : nullptr);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (want_traces) {
          const std::string snr_label = std::isinf(snr) ? "inf" : CsvWriter::num(snr);
          for (size_t i = 0; i < traces.size(); ++i) {
            json entry = to_json(traces[i]);
            entry["snr"] = snr_label;
            entry["index"] = i;
            traces_doc.push_back(std::move(entry));
          }
        }

        const std::string snr_text = std::isinf(snr) ? "inf" : CsvWriter::num(snr);
        const auto& pp = run.stats.per_param;
        summary.row({to_string(method), snr_text, std::to_string(cfg.realizations),
                     std::to_string(run.stats.failure_count),
                     CsvWriter::num(pp.at("a1").mean), CsvWriter::num(pp.at("a1").stdev),
                     CsvWriter::num(pp.at("a1").rmse), CsvWriter::num(pp.at("a2").mean),
                     CsvWriter::num(pp.at("a2").stdev), CsvWriter::num(pp.at("a2").rmse),
                     CsvWriter::num(pp.at("t21").mean), CsvWriter::num(pp.at("t21").stdev),
                     CsvWriter::num(pp.at("t21").rmse), CsvWriter::num(pp.at("t22").mean),
                     CsvWriter::num(pp.at("t22").stdev), CsvWriter::num(pp.at("t22").rmse),
                     CsvWriter::num(wall)});
        for (const EstimationResult& rec : run.records)
          records.row({to_string(method), snr_text, std::to_string(rec.realization_index),
                       CsvWriter::num(rec.a1), CsvWriter::num(rec.a2),
                       CsvWriter::num(rec.t21_ms), CsvWriter::num(rec.t22_ms),
                       CsvWriter::num(rec.shift_used), rec.solver_converged ? "1" : "0",
                       rec.failed ? "1" : "0", rec.failure_reason});

        json cell = to_json(run.stats);
        cell["method"] = to_string(method);
        cell["snr"] = std::isinf(snr) ? json("inf") : json(snr);
        cell["wall_s"] = wall;
        summary_json.push_back(std::move(cell));
      }
    }
    json doc;
    doc["cells"] = std::move(summary_json);
    doc["config"] = resolved_config_json(cfg);
    write_json_file(dir / "summary.json", doc);
    if (cfg.trace) write_json_file(dir / "traces.json", traces_doc);
    std::cout << "wrote " << (dir / "summary.csv").string() << "\n";
  });
}

int cli_main(int argc, char** argv) {
  CLI::App app{"multiexponential decay analysis via Hermite-function Fourier estimation"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, model_text, snr_text, schedule_text;
  double shift_value = 0.0;

  auto add_common = [&](CLI::App* sub, bool with_shift) {
    sub->add_option("--config", config_path, "JSON config file; flags override its keys");
    sub->add_option("--model", model_text, "T21,T22,A1,A2 (ms and fractions)");
    sub->add_option("--snr", snr_text, "SNR value or comma list; inf for noiseless");
    sub->add_option("--realizations", cfg.realizations, "Monte Carlo realizations");
    sub->add_option("--seed", cfg.seed, "base random seed");
    sub->add_option("--method", cfg.method, "l2f | nlls | both");
    sub->add_option("--n", cfg.l2f.degree, "expansion degree");
    sub->add_option("--m", cfg.l2f.quad_order, "quadrature order");
    sub->add_option("--tau", cfg.l2f.tau_ms, "ms per dimensionless time unit");
    sub->add_option("--shift-schedule", schedule_text, "comma list of shifts (dimensionless)");
    sub->add_option("--delta", cfg.l2f.delta, "frequency step");
    sub->add_option("--bandwidth", cfg.l2f.bandwidth, "filtered-sum bandwidth N");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
    sub->add_flag("--trace", cfg.trace, "dump per-shift trace JSON");
    sub->add_option("--out", cfg.out_dir, "output directory");
    if (with_shift)
      sub->add_option("--shift", shift_value, "fixed shift override (dimensionless)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "emit a synthetic signal as CSV");
  CLI::App* expand = app.add_subcommand("expand", "fit the weighted signal and dump the error curve");
  CLI::App* spectrum = app.add_subcommand("spectrum", "evaluate the filtered spectrum and peak");
  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo summary tables");
  add_common(simulate, false);
  add_common(expand, true);
  add_common(spectrum, true);
  add_common(experiment, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (!config_path.empty()) load_config_file(cfg, config_path);
    if (!model_text.empty()) apply_model_string(cfg, model_text);
    if (!snr_text.empty()) apply_snr_string(cfg, snr_text);
    if (!schedule_text.empty())
      cfg.l2f.shift_schedule = parse_double_list(schedule_text, "shift");
    for (CLI::App* sub : {expand, spectrum})
      if (sub->parsed() && sub->count("--shift")) cfg.shift_override = shift_value;
  } catch (const config_error& err) {
    nlohmann::json reason = {{"error", "validation"}, {"detail", err.what()}};
    std::cerr << reason.dump() << "\n";
    return kExitValidation;
  }

  if (simulate->parsed()) return cmd_simulate(cfg);
  if (expand->parsed()) return cmd_expand(cfg);
  if (spectrum->parsed()) return cmd_spectrum(cfg);
  if (experiment->parsed()) return cmd_experiment(cfg);
  return kExitValidation;
}

}  // namespace l2f
