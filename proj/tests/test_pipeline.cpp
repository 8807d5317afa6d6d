#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "sgbench/config.hpp"
#include "sgbench/dataset.hpp"
#include "sgbench/pipeline.hpp"

using namespace sgbench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("sgbench_pipe_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small but complete setting: 8 products, 2 masked, short series.
PipelineConfig tiny_config(const std::string& out) {
  PipelineConfig c;
  c.synth_products = 8;
  c.synth_inactive = 2;
  c.synth_t = 60;
  c.train_ratio = 0.8;
  c.epochs = 3;
  c.seeds = {1};
  c.out_dir = out;
  return c;
}

std::set<std::string> files_under(const fs::path& root) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out.insert(fs::relative(e.path(), root).generic_string());
  return out;
}

}  // namespace

TEST_CASE("config serialization round-trips every field") {
  PipelineConfig c;
  c.data_mode = DataMode::csv;
  c.data_dir = "some/dir";
  c.edge_type = EdgeType::storage;
  c.feature = FeatureName::delivery;
  c.synth_products = 12;
  c.coupling = 0.25;
  c.models = {ModelKind::gat, ModelKind::mlp};
  c.seeds = {3, 9, 27};
  c.epochs = 17;

  TempDir tmp;
  std::string path = (tmp.path / "run.cfg").string();
  {
    std::ofstream out(path);
    out << serialize_config(c);
  }
  PipelineConfig back = parse_config_file(path);
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(back.models == c.models);
  CHECK(back.seeds == c.seeds);
}

TEST_CASE("config rejects unknown keys and bad values") {
  PipelineConfig c;
  CHECK_THROWS_WITH_AS(set_config_value(c, "not_a_key", "1"),
                       doctest::Contains("not_a_key"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "epochs", "many"),
                  std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(c, "models", "mlp,vae"),
                  std::invalid_argument);

  set_config_value(c, "models", "gat,mlp");
  CHECK(c.models == std::vector<ModelKind>{ModelKind::gat, ModelKind::mlp});
  set_config_value(c, "seeds", "4,5");
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});

  c.train_ratio = 1.5;
  CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
  c.train_ratio = 0.95;
  c.data_mode = DataMode::csv;
  c.data_dir = "";
  CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
}

TEST_CASE("prepared data is z-scored over the train rows") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  PreparedData data = prepare_data(c);

  CHECK(data.masked.graph.node_count() == 6);
  CHECK(data.split.boundary == 48);
  CHECK(data.dataset.train_examples.size() == 43);
  CHECK(data.dataset.test_examples.size() == 7);

  for (int j = 0; j < data.normalized.node_count(); ++j) {
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < data.split.boundary; ++t) {
      sum += data.normalized.values(t, j);
      sum2 += data.normalized.values(t, j) * data.normalized.values(t, j);
    }
    double mean = sum / data.split.boundary;
    double var = sum2 / data.split.boundary - mean * mean;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
  }
}

TEST_CASE("qa summary counts the synthetic masking exactly") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  PreparedData data = prepare_data(c);
  OutputTracker out(c.out_dir);
  QaSummary qa = stage_qa(c, data, out);
  CHECK(qa.nodes_before == 8);
  CHECK(qa.nodes_after == 6);
  CHECK(qa.removed_codes.size() == 2);
  CHECK(qa_summary_line(qa) == "nodes: 8 → 6 (removed 2)");

  // default-size fixture reproduces the benchmark counts
  PipelineConfig full;
  PreparedData fd = prepare_data(full);
  CHECK(fd.graph.node_count() == 40);
  CHECK(fd.masked.graph.node_count() == 29);
}

TEST_CASE("csv mode ingests what synth mode generates") {
  TempDir data_dir, out_dir;
  Fixture fx = make_fixture(FixtureSpec{});
  write_fixture(fx, data_dir.str());

  PipelineConfig c;
  c.data_mode = DataMode::csv;
  c.data_dir = data_dir.str();
  c.out_dir = out_dir.str();
  PreparedData data = prepare_data(c);
  CHECK(data.masked.graph.node_count() == 29);

  // synth mode with the same identity produces the same windows
  PipelineConfig s;
  s.out_dir = out_dir.str();
  PreparedData sd = prepare_data(s);
  REQUIRE(sd.dataset.train_examples.size() ==
          data.dataset.train_examples.size());
  CHECK(sd.dataset.train_examples[0].x.data ==
        data.dataset.train_examples[0].x.data);
}

TEST_CASE("run_pipeline writes exactly the declared manifest") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  QaSummary qa = [&] {
    OutputTracker out(c.out_dir);
    return run_pipeline(c, out);
  }();
  CHECK(qa.nodes_after == 6);

  std::vector<std::string> manifest = expected_files(c);
  CHECK(std::is_sorted(manifest.begin(), manifest.end()));
  std::set<std::string> expected(manifest.begin(), manifest.end());
  CHECK(files_under(tmp.path) == expected);

  // spot-check report structure
  nlohmann::json report =
      nlohmann::json::parse(slurp((tmp.path / "report.json").string()));
  CHECK(report["schema"] == "run-report/v1");
  CHECK(report["split"]["boundary"] == 48);
  CHECK(report["split"]["train_windows"] == 43);
  CHECK(report["split"]["test_windows"] == 7);
  CHECK(report["models"].size() == 3);  // 3 models x 1 seed
  for (const auto& m : report["models"]) {
    CHECK(m["curve"]["train_loss"].size() == 3);
    CHECK(m["test_mse"].is_number());
  }
  CHECK(report["files"].size() == expected.size());
}

TEST_CASE("two runs of the same config are byte-identical") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  {
    OutputTracker out(c.out_dir);
    run_pipeline(c, out);
  }
  std::map<std::string, std::string> first;
  for (const std::string& rel : expected_files(c))
    first[rel] = slurp((tmp.path / rel).string());

  fs::remove_all(tmp.path);
  {
    OutputTracker out(c.out_dir);
    run_pipeline(c, out);
  }
  for (const auto& [rel, bytes] : first) {
    INFO("file ", rel);
    CHECK(slurp((tmp.path / rel).string()) == bytes);
  }
}

TEST_CASE("stage-by-stage execution reproduces run_pipeline bytes") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());

  {
    PreparedData data = prepare_data(c);
    OutputTracker o1(c.out_dir);
    stage_qa(c, data, o1);
    OutputTracker o2(c.out_dir);
    stage_train(c, data, o2);
    OutputTracker o3(c.out_dir);
    stage_stats(c, o3);
    OutputTracker o4(c.out_dir);
    stage_report(c, data, o4);
  }
  std::map<std::string, std::string> staged;
  for (const std::string& rel : expected_files(c))
    staged[rel] = slurp((tmp.path / rel).string());

  fs::remove_all(tmp.path);
  {
    OutputTracker out(c.out_dir);
    run_pipeline(c, out);
  }
  for (const auto& [rel, bytes] : staged) {
    INFO("file ", rel);
    CHECK(slurp((tmp.path / rel).string()) == bytes);
  }
}

TEST_CASE("stats stage needs at least two models") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  c.models = {ModelKind::mlp};
  OutputTracker out(c.out_dir);
  CHECK_THROWS_AS(stage_stats(c, out), std::exception);
}

TEST_CASE("pipeline failures carry the stage name") {
  TempDir tmp;
  PipelineConfig c = tiny_config(tmp.str());
  c.data_mode = DataMode::csv;
  c.data_dir = (tmp.path / "missing").string();
  OutputTracker out(c.out_dir);
  try {
    run_pipeline(c, out);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage == "qa");
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
}

TEST_CASE("output tracker removes what it wrote on demand") {
  TempDir tmp;
  OutputTracker out(tmp.str());
  out.write_text("sub/file.txt", "hello");
  CHECK(fs::exists(tmp.path / "sub/file.txt"));
  REQUIRE(out.written().size() == 1);
  out.remove_written();
  CHECK_FALSE(fs::exists(tmp.path / "sub/file.txt"));
  CHECK(out.written().empty());
}
