#include "chartex/app.hpp"
#include "chartex/chartgen.hpp"
#include "chartex/png_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace chartex;

namespace {

constexpr int kOk = 0, kIoError = 1, kNothing = 2;

struct Common {
  std::string config_path;
  std::string ocr_cmd;
  int jobs = 1;
};

// Effective config: file (or defaults), then the OCR command from flag or environment.
app::Config load_config(const Common& c) {
  app::Config config = c.config_path.empty() ? app::Config{} : app::Config::load(c.config_path);
  if (!c.ocr_cmd.empty())
    config.ocr_command = c.ocr_cmd;
  else if (const char* env = std::getenv("CHARTEX_OCR_CMD"); env && *env)
    config.ocr_command = env;
  return config;
}

void report_failures(const std::vector<app::FileOutcome>& files) {
  for (const app::FileOutcome& f : files) {
    if (!f.io_error.empty()) std::cerr << "chartex: " << f.io_error << "\n";
    for (const app::PanelOutcome& p : f.panels)
      if (p.status == app::PanelStatus::failed) std::cerr << "chartex: " << f.input.string() << ": " << p.error << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Bar chart data extraction"};
  cli.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool ocr) {
    sub->add_option("--config", common.config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--jobs", common.jobs, "files processed in parallel")->check(CLI::PositiveNumber);
    if (ocr) sub->add_option("--ocr-cmd", common.ocr_cmd, "external OCR command (or CHARTEX_OCR_CMD)");
  };

  std::vector<std::string> inputs;
  std::string out_dir, debug_dir;
  bool csv = false, timings = false;
  auto* extract = cli.add_subcommand("extract", "extract chart JSON from PNG files or directories");
  extract->add_option("inputs", inputs, "PNG files or directories")->required();
  extract->add_option("--out-dir", out_dir, "output directory (default: next to each input)");
  extract->add_flag("--csv", csv, "also write <stem>.chart.csv");
  extract->add_option("--debug-dir", debug_dir, "dump intermediate images here");
  extract->add_flag("--timings", timings, "include stage timings in the manifest");
  add_common(extract, true);

  int n = 200;
  std::uint64_t seed = chartgen::kDefaultCorpusSeed;
  std::string gen_out;
  auto* gen = cli.add_subcommand("gen", "write a synthetic corpus with ground truth");
  gen->add_option("--n", n, "number of charts")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "corpus seed");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--jobs", common.jobs, "charts rendered in parallel")->check(CLI::PositiveNumber);

  std::string pred_dir, truth_dir, eval_out;
  double loa_z = 0.0;
  auto* eval = cli.add_subcommand("eval", "score predictions against ground truth");
  eval->add_option("pred_dir", pred_dir, "directory of <stem>.chart.json")->required()->check(CLI::ExistingDirectory);
  eval->add_option("truth_dir", truth_dir, "directory of <stem>.truth.json")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", eval_out, "report directory (default: pred_dir)");
  eval->add_option("--loa-z", loa_z, "limits of agreement multiplier (default 2)")->check(CLI::PositiveNumber);
  eval->add_option("--config", common.config_path, "key = value config file")->check(CLI::ExistingFile);

  std::string pipe_dir, pipe_out;
  auto* pipeline = cli.add_subcommand("pipeline", "extract a directory and evaluate it when truth is present");
  pipeline->add_option("dir", pipe_dir, "directory of PNG (and truth) files")->required()->check(CLI::ExistingDirectory);
  pipeline->add_option("--out", pipe_out, "output directory (default: <dir>/out)");
  pipeline->add_option("--loa-z", loa_z, "limits of agreement multiplier (default 2)")->check(CLI::PositiveNumber);
  add_common(pipeline, true);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kIoError;
  }

  try {
    app::Config config = load_config(common);
    if (loa_z > 0.0) config.agreement.z = loa_z;

    if (*extract) {
      app::ExtractOptions options;
      options.out_dir = out_dir;
      options.csv = csv;
      options.debug_dir = debug_dir;
      options.jobs = common.jobs;
      if (!out_dir.empty()) fs::create_directories(out_dir);
      if (!debug_dir.empty()) fs::create_directories(debug_dir);
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      for (const fs::path& p : paths)
        if (!fs::exists(p)) {
          std::cerr << "chartex: no such file or directory: " << p.string() << "\n";
          return kIoError;
        }
      const auto files = app::extract_files(app::collect_pngs(paths), config, options);
      report_failures(files);
      std::cout << app::dump(app::manifest(files, config, timings));
      return app::exit_code(files);
    }

    if (*gen) {
      const auto written = app::write_corpus(gen_out, n, seed, common.jobs);
      nlohmann::json files = nlohmann::json::array();
      for (const fs::path& p : written) files.push_back(p.filename().generic_string());
      std::cout << app::dump({{"n", n}, {"seed", seed}, {"out", gen_out}, {"files", files}});
      return kOk;
    }

    if (*eval) {
      const app::EvalOutcome outcome = app::evaluate_dirs(pred_dir, truth_dir, config);
      for (const std::string& w : outcome.warnings) std::cerr << "chartex: warning: " << w << "\n";
      if (outcome.charts == 0) {
        std::cerr << "chartex: no prediction matches a truth file\n";
        return kNothing;
      }
      const fs::path dir = eval_out.empty() ? fs::path(pred_dir) : fs::path(eval_out);
      fs::create_directories(dir);
      app::write_reports(outcome, dir);
      std::cout << evalstats::report_text(outcome.report, outcome.agreement);
      return kOk;
    }

    if (*pipeline) {
      const fs::path out = pipe_out.empty() ? fs::path(pipe_dir) / "out" : fs::path(pipe_out);
      const app::PipelineResult r = app::run_pipeline(pipe_dir, out, config, common.jobs);
      report_failures(r.files);
      if (r.eval) {
        for (const std::string& w : r.eval->warnings) std::cerr << "chartex: warning: " << w << "\n";
        std::cout << evalstats::report_text(r.eval->report, r.eval->agreement);
      }
      return r.exit_code;
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "chartex: config: " << e.what() << "\n";
    return kIoError;
  } catch (const io::IoError& e) {
    std::cerr << "chartex: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "chartex: " << e.what() << "\n";
    return kIoError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "chartex: malformed JSON: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}
