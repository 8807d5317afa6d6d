// Command-line front end: qa / synth / train / stats / report / run.
// Every config key has a flag; flag values override the config file.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgbench/config.hpp"
#include "sgbench/pipeline.hpp"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* desc;
};

const FlagSpec kFlags[] = {
    {"--data-mode", "data_mode", "data source: synth or csv"},
    {"--data-dir", "data_dir", "directory with the dataset CSVs (csv mode)"},
    {"--edge-type", "edge_type", "plant, storage, group, or subgroup"},
    {"--feature", "feature",
     "production, sales_order, delivery, or factory_issue"},
    {"--synth-products", "synth_products", "synthetic product count"},
    {"--synth-inactive", "synth_inactive", "synthetic mostly-zero products"},
    {"--synth-t", "synth_t", "synthetic time points"},
    {"--coupling", "coupling", "synthetic neighbor coupling strength"},
    {"--noise-std", "noise_std", "synthetic innovation noise std"},
    {"--data-seed", "data_seed", "seed fixing the synthetic dataset"},
    {"--train-ratio", "train_ratio", "train fraction of the time axis"},
    {"--window", "window", "input window length"},
    {"--zero-fraction-threshold", "zero_fraction_threshold",
     "mask products with at least this zero fraction"},
    {"--adjacency-mode", "adjacency_mode", "symmetrized or directed_in"},
    {"--normalize-scope", "normalize_scope", "train_only or full_series"},
    {"--models", "models", "comma list of mlp, gcn, gat"},
    {"--epochs", "epochs", "training epochs"},
    {"--learning-rate", "learning_rate", "Adam learning rate"},
    {"--weight-decay", "weight_decay", "coupled L2 weight decay"},
    {"--adam-beta1", "adam_beta1", "Adam beta1"},
    {"--adam-beta2", "adam_beta2", "Adam beta2"},
    {"--adam-eps", "adam_eps", "Adam epsilon"},
    {"--seeds", "seeds", "comma list of training seeds"},
    {"--out", "out_dir", "output directory"},
};

struct CommandFlags {
  std::string config_path;
  std::map<std::string, std::string> values;  // config key -> raw value
  std::map<std::string, CLI::Option*> options;
  CLI::Option* config_opt = nullptr;
  std::string seed_value;
  CLI::Option* seed_opt = nullptr;
};

void add_flags(CLI::App* cmd, CommandFlags& flags) {
  flags.config_opt =
      cmd->add_option("--config", flags.config_path, "config file path");
  for (const FlagSpec& spec : kFlags)
    flags.options[spec.key] =
        cmd->add_option(spec.flag, flags.values[spec.key], spec.desc);
  flags.seed_opt = cmd->add_option("--seed", flags.seed_value,
                                   "single training seed (replaces seeds)");
}

sgbench::PipelineConfig build_config(const CommandFlags& flags) {
  sgbench::PipelineConfig config;
  if (flags.config_opt->count() > 0)
    config = sgbench::parse_config_file(flags.config_path);
  for (const FlagSpec& spec : kFlags) {
    const CLI::Option* opt = flags.options.at(spec.key);
    if (opt->count() > 0)
      sgbench::set_config_value(config, spec.key, flags.values.at(spec.key));
  }
  if (flags.seed_opt->count() > 0)
    sgbench::set_config_value(config, "seeds", flags.seed_value);
  sgbench::validate_config(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Supply-chain demand forecasting benchmark: graph QA, rolling-window "
      "dataset construction, MLP/GCN/GAT training, and rank-based model "
      "comparison with deterministic outputs."};
  app.require_subcommand(1);

  std::map<std::string, CommandFlags> flags;
  const char* commands[][2] = {
      {"qa", "dedupe and mask the graph; write qa.json and adjacency.csv"},
      {"synth", "write the synthetic fixture CSVs"},
      {"train", "train every configured model under every seed"},
      {"stats", "rank tests over the squared-error CSVs"},
      {"report", "assemble report.json and the SVG figures"},
      {"run", "full pipeline: qa, train, stats, report"},
  };
  for (const auto& [name, desc] : commands)
    add_flags(app.add_subcommand(name, desc), flags[name]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  const CommandFlags& chosen = flags[stage];

  sgbench::PipelineConfig config;
  try {
    config = sgbench::with_stage(stage.c_str(),
                                 [&] { return build_config(chosen); });
  } catch (const sgbench::StageError& e) {
    std::cerr << "ERROR " << e.stage << ": " << e.what() << std::endl;
    return 1;
  }

  // synth writes the dataset directory; everything else writes outputs
  std::string root = config.out_dir;
  if (stage == "synth" && !config.data_dir.empty()) root = config.data_dir;
  sgbench::OutputTracker out(root);

  try {
    if (stage == "qa") {
      sgbench::PreparedData data = sgbench::with_stage(
          "qa", [&] { return sgbench::prepare_data(config); });
      sgbench::QaSummary qa = sgbench::with_stage(
          "qa", [&] { return sgbench::stage_qa(config, data, out); });
      std::cout << sgbench::qa_summary_line(qa) << "\n";
    } else if (stage == "synth") {
      sgbench::with_stage("synth",
                          [&] { sgbench::stage_synth(config, out); });
      std::cout << "fixture written to " << out.root().string() << "\n";
    } else if (stage == "train") {
      sgbench::PreparedData data = sgbench::with_stage(
          "train", [&] { return sgbench::prepare_data(config); });
      sgbench::with_stage("train",
                          [&] { sgbench::stage_train(config, data, out); });
      std::cout << "trained " << config.models.size() << " model(s) x "
                << config.seeds.size() << " seed(s)\n";
    } else if (stage == "stats") {
      sgbench::with_stage("stats",
                          [&] { sgbench::stage_stats(config, out); });
      std::cout << "wrote stats for " << config.seeds.size() << " seed(s)\n";
    } else if (stage == "report") {
      sgbench::PreparedData data = sgbench::with_stage(
          "report", [&] { return sgbench::prepare_data(config); });
      sgbench::with_stage("report",
                          [&] { sgbench::stage_report(config, data, out); });
      std::cout << "wrote report.json and figures\n";
    } else {  // run
      sgbench::QaSummary qa = sgbench::run_pipeline(config, out);
      std::cout << sgbench::qa_summary_line(qa) << "\n"
                << "wrote " << out.written().size() << " files to "
                << out.root().string() << "\n";
    }
  } catch (const sgbench::StageError& e) {
    out.remove_written();
    std::cerr << "ERROR " << e.stage << ": " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
