#include "sgbench/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgbench/fmt.hpp"

namespace sgbench {

const char* to_string(DataMode m) {
  switch (m) {
    case DataMode::synth: return "synth";
    case DataMode::csv: return "csv";
  }
  throw std::logic_error("unhandled data mode");
}

DataMode data_mode_from_string(const std::string& s) {
  if (s == "synth") return DataMode::synth;
  if (s == "csv") return DataMode::csv;
  throw std::invalid_argument("unknown data mode '" + s +
                              "' (expected synth, csv)");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  items.push_back(trim(cur));
  return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  const char* first = value.data();
  auto [ptr, ec] = std::from_chars(first, first + value.size(), v);
  if (ec != std::errc() || ptr != first + value.size())
    throw std::invalid_argument("config key '" + key + "': bad value '" +
                                value + "'");
  return v;
}

}  // namespace

void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value) {
  try {
    if (key == "data_mode") config.data_mode = data_mode_from_string(value);
    else if (key == "data_dir") config.data_dir = value;
    else if (key == "edge_type") config.edge_type = edge_type_from_string(value);
    else if (key == "feature") config.feature = feature_from_string(value);
    else if (key == "synth_products") config.synth_products = parse_number<int>(key, value);
    else if (key == "synth_inactive") config.synth_inactive = parse_number<int>(key, value);
    else if (key == "synth_t") config.synth_t = parse_number<int>(key, value);
    else if (key == "coupling") config.coupling = parse_number<double>(key, value);
    else if (key == "noise_std") config.noise_std = parse_number<double>(key, value);
    else if (key == "data_seed") config.data_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "train_ratio") config.train_ratio = parse_number<double>(key, value);
    else if (key == "window") config.window = parse_number<int>(key, value);
    else if (key == "zero_fraction_threshold") config.zero_fraction_threshold = parse_number<double>(key, value);
    else if (key == "adjacency_mode") config.adjacency_mode = adjacency_mode_from_string(value);
    else if (key == "normalize_scope") config.normalize_scope = normalize_scope_from_string(value);
    else if (key == "models") {
      config.models.clear();
      for (const std::string& item : split_list(value))
        config.models.push_back(model_kind_from_string(item));
    } else if (key == "epochs") config.epochs = parse_number<int>(key, value);
    else if (key == "learning_rate") config.learning_rate = parse_number<double>(key, value);
    else if (key == "weight_decay") config.weight_decay = parse_number<double>(key, value);
    else if (key == "adam_beta1") config.adam_beta1 = parse_number<double>(key, value);
    else if (key == "adam_beta2") config.adam_beta2 = parse_number<double>(key, value);
    else if (key == "adam_eps") config.adam_eps = parse_number<double>(key, value);
    else if (key == "seeds") {
      config.seeds.clear();
      for (const std::string& item : split_list(value))
        config.seeds.push_back(parse_number<std::uint64_t>(key, item));
    } else if (key == "out_dir") config.out_dir = value;
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

PipelineConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  PipelineConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config '" + path + "' line " +
                                  std::to_string(line_no) +
                                  ": expected 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config '" + path + "' line " +
                                  std::to_string(line_no) + ": empty key");
    set_config_value(config, key, value);
  }
  return config;
}

std::string models_to_string(const std::vector<ModelKind>& models) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) out += ",";
    out += to_string(models[i]);
  }
  return out;
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(seeds[i]);
  }
  return out;
}

std::string serialize_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "data_mode = " << to_string(c.data_mode) << '\n';
  out << "data_dir = " << c.data_dir << '\n';
  out << "edge_type = " << to_string(c.edge_type) << '\n';
  out << "feature = " << to_string(c.feature) << '\n';
  out << "synth_products = " << c.synth_products << '\n';
  out << "synth_inactive = " << c.synth_inactive << '\n';
  out << "synth_t = " << c.synth_t << '\n';
  out << "coupling = " << format_double(c.coupling) << '\n';
  out << "noise_std = " << format_double(c.noise_std) << '\n';
  out << "data_seed = " << c.data_seed << '\n';
  out << "train_ratio = " << format_double(c.train_ratio) << '\n';
  out << "window = " << c.window << '\n';
  out << "zero_fraction_threshold = " << format_double(c.zero_fraction_threshold) << '\n';
  out << "adjacency_mode = " << to_string(c.adjacency_mode) << '\n';
  out << "normalize_scope = " << to_string(c.normalize_scope) << '\n';
  out << "models = " << models_to_string(c.models) << '\n';
  out << "epochs = " << c.epochs << '\n';
  out << "learning_rate = " << format_double(c.learning_rate) << '\n';
  out << "weight_decay = " << format_double(c.weight_decay) << '\n';
  out << "adam_beta1 = " << format_double(c.adam_beta1) << '\n';
  out << "adam_beta2 = " << format_double(c.adam_beta2) << '\n';
  out << "adam_eps = " << format_double(c.adam_eps) << '\n';
  out << "seeds = " << seeds_to_string(c.seeds) << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  return out.str();
}

void validate_config(const PipelineConfig& c) {
  if (c.data_mode == DataMode::csv && c.data_dir.empty())
    throw std::invalid_argument("csv data mode requires data_dir");
  if (c.models.empty()) throw std::invalid_argument("no models configured");
  if (c.seeds.empty()) throw std::invalid_argument("no seeds configured");
  if (c.window < 1) throw std::invalid_argument("window must be >= 1");
  if (c.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(c.train_ratio > 0.0 && c.train_ratio < 1.0))
    throw std::invalid_argument("train_ratio must be in (0, 1)");
  if (!(c.zero_fraction_threshold > 0.0 && c.zero_fraction_threshold <= 1.0))
    throw std::invalid_argument("zero_fraction_threshold must be in (0, 1]");
  if (c.learning_rate <= 0.0)
    throw std::invalid_argument("learning_rate must be positive");
  if (c.out_dir.empty()) throw std::invalid_argument("out_dir is empty");
  for (std::size_t i = 0; i < c.models.size(); ++i)
    for (std::size_t j = i + 1; j < c.models.size(); ++j)
      if (c.models[i] == c.models[j])
        throw std::invalid_argument("duplicate model in models list");
}

}  // namespace sgbench
