#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hypermads/driver.hpp"
#include "hypermads/numformat.hpp"

using namespace hypermads;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() /
                   ("hypermads_drv_" + tag + "_" + std::to_string(getpid()));
  fs::remove_all(dir);
  return dir;
}

RunConfig config_from(const std::string& text) {
  const auto r = parse_params_text(text);
  REQUIRE(r.config.has_value());
  return *r.config;
}

EvalRecord rec(FlatPoint p, double obj) {
  EvalRecord r;
  r.point = std::move(p);
  r.objective = obj;
  return r;
}

constexpr const char* kHistoryHeader =
    "# one line per evaluation: flat point encoding, then the objective "
    "(100 - test accuracy; lower is better; inf = failed or infeasible)\n";
constexpr const char* kStatsHeader =
    "# improvement trace: the first evaluation, then every evaluation that "
    "strictly improved the objective\n";

}  // namespace

TEST_CASE("the space problem adapts structured points to flat vectors") {
  auto spec = SpaceSpec::defaults();
  spec.find("NUM_CON_LAYERS")->fixed = true;
  const Point start = default_point(spec);
  SpaceProblem problem(spec, start);

  CHECK(problem.initial_point() == encode(start));

  const auto coords = problem.layout_of(encode(start));
  const auto expect = layout(start, spec);
  REQUIRE(coords.size() == expect.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    CHECK(coords[i].key == expect[i].key);
    CHECK(coords[i].fixed == expect[i].fixed);
  }

  // conv moves are filtered out by the fixed header; 3 moves remain
  const auto nbs = problem.neighbors(encode(start));
  REQUIRE(nbs.size() == 3);
  for (const auto& n : nbs) CHECK_NOTHROW(decode(n));
}

TEST_CASE("evaluators are picked by dataset token") {
  const auto sphere = config_from("DATASET SPHERE\nMAX_BB_EVAL 5\nKERNELS 3\n");
  auto ev = make_evaluator(sphere, "");
  CHECK(ev->evaluate(encode(initial_point(sphere))).status == EvalStatus::Ok);

  const auto quad =
      config_from("DATASET QUADRATIC\nMAX_BB_EVAL 5\nKERNELS 3\n");
  auto qv = make_evaluator(quad, "");
  const auto qr = qv->evaluate(encode(initial_point(quad)));
  CHECK(qr.status == EvalStatus::Ok);
  CHECK(qr.objective >= analytic_choice_offset(3));

  const auto custom = config_from(
      "DATASET CUSTOM\nNUMBER_OF_CLASSES 2\nEXTERNAL_COMMAND cat\n"
      "MAX_BB_EVAL 5\n");
  auto cv = make_evaluator(custom, "");
  const auto cr = cv->evaluate(encode(initial_point(custom)));
  CHECK(cr.status == EvalStatus::Ok);
  CHECK(cr.objective == 2.0);  // first token of the flat line

  // the trainer path applies the architecture gate on the 8x8 toy input
  const auto mnist = config_from("DATASET MNIST\nMAX_BB_EVAL 5\n");
  auto mv = make_evaluator(mnist, "");
  CHECK(mv->evaluate(encode(initial_point(mnist))).status ==
        EvalStatus::Infeasible);

  RunConfig bogus = mnist;
  bogus.dataset = "NOPE";
  CHECK_THROWS_AS(make_evaluator(bogus, ""), std::invalid_argument);
}

TEST_CASE("output files record every evaluation and the improvement trace") {
  const auto dir = fresh_dir("out");
  const double inf = std::numeric_limits<double>::infinity();
  write_output_files(
      {rec({1, 2.5}, 3), rec({1, 3}, 5), rec({2, 3}, 2.5), rec({2, 3.5}, inf)},
      dir.string());

  CHECK(slurp(dir / "history.txt") == std::string(kHistoryHeader) +
                                          "1 2.5 3\n"
                                          "1 3 5\n"
                                          "2 3 2.5\n"
                                          "2 3.5 inf\n");
  CHECK(slurp(dir / "stats.txt") == std::string(kStatsHeader) +
                                        "1 2.5 3\n"
                                        "2 3 2.5\n");
  fs::remove_all(dir);
}

TEST_CASE("the first evaluation lands in stats even when it failed") {
  const auto dir = fresh_dir("first");
  const double inf = std::numeric_limits<double>::infinity();
  write_output_files({rec({1}, inf), rec({2}, inf), rec({3}, 4)},
                     dir.string());
  CHECK(slurp(dir / "stats.txt") ==
        std::string(kStatsHeader) + "1 inf\n3 4\n");
  fs::remove_all(dir);
}

TEST_CASE("rewriting truncates leftovers from previous runs") {
  const auto dir = fresh_dir("trunc");
  write_output_files({rec({1}, 1), rec({2}, 0.5)}, dir.string());
  write_output_files({rec({9}, 9)}, dir.string());
  CHECK(slurp(dir / "history.txt") == std::string(kHistoryHeader) + "9 9\n");
  CHECK(slurp(dir / "stats.txt") == std::string(kStatsHeader) + "9 9\n");
  fs::remove_all(dir);
}

TEST_CASE("neighbor listing shows the raw categorical moves in order") {
  const auto cfg = config_from(
      "DATASET MNIST\nMAX_BB_EVAL 150\nNUM_FC_LAYERS 10\n"
      "SIZE_FC_LAYER 500 - 2000\nREMAINING_HPS FIXED\n");

  // expected points built by hand from the initial point: 2 conv groups
  // (6,5,1,0,0), ten fc layers of 500, optimizer 3 with default params
  Point base = initial_point(cfg);
  REQUIRE(base.conv_layers.size() == 2);
  REQUIRE(base.fc_sizes.size() == 10);

  Point conv_add = base;
  conv_add.conv_layers.push_back({6, 5, 1, 0, 0});
  Point conv_sub = base;
  conv_sub.conv_layers.pop_back();
  Point fc_add = base;
  fc_add.fc_sizes.insert(fc_add.fc_sizes.begin(), 500);
  Point fc_sub = base;
  fc_sub.fc_sizes.erase(fc_sub.fc_sizes.begin());
  Point opt = base;
  opt.optimizer_choice = 4;
  opt.optimizer_params = {0.1, 0.9, 0.005, 0};

  const std::string expected =
      "ConvAdd : " + format_flat(encode(conv_add)) + "\n" +
      "ConvSub : " + format_flat(encode(conv_sub)) + "\n" +
      "FcAdd : " + format_flat(encode(fc_add)) + "\n" +
      "FcSub : " + format_flat(encode(fc_sub)) + "\n" +
      "OptimizerCycle : " + format_flat(encode(opt)) + "\n";
  CHECK(format_neighbors(cfg) == expected);
}

TEST_CASE("a sphere run fills its budget and reproduces byte for byte") {
  auto go = [&](const std::string& tag) {
    const auto dir = fresh_dir(tag);
    auto cfg = config_from(
        "DATASET SPHERE\nMAX_BB_EVAL 40\nSEED 3\nKERNELS 3 - - FIXED\n");
    cfg.output_dir = dir.string();
    std::ostringstream log;
    const auto result = run_config(cfg, log);
    return std::make_tuple(result, log.str(), slurp(dir / "history.txt"),
                           slurp(dir / "stats.txt"), dir);
  };

  const auto [r1, log1, hist1, stats1, dir1] = go("run1");
  CHECK(r1.exit_code == 0);
  CHECK(r1.run.evaluations == 40);
  CHECK(r1.run.stop_reason == StopReason::Budget);
  CHECK(r1.run.best_objective < r1.run.history.front().objective);
  CHECK(log1.find("stopped: evaluation budget reached") != std::string::npos);
  CHECK(log1.find("evaluations: 40") != std::string::npos);
  CHECK(log1.find("best objective: ") != std::string::npos);

  // 1 header + one line per evaluation
  int lines = 0;
  for (char c : hist1) lines += c == '\n';
  CHECK(lines == 41);

  const auto [r2, log2, hist2, stats2, dir2] = go("run2");
  CHECK(log2 == log1);
  CHECK(hist2 == hist1);
  CHECK(stats2 == stats1);
  CHECK(r2.run.best_point == r1.run.best_point);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("a failing external command aborts with exit code 1") {
  const auto dir = fresh_dir("fail");
  auto cfg = config_from(
      "DATASET CUSTOM\nNUMBER_OF_CLASSES 2\nEXTERNAL_COMMAND false\n"
      "MAX_BB_EVAL 10\n");
  cfg.output_dir = dir.string();
  std::ostringstream log;
  const auto r = run_config(cfg, log);
  CHECK(r.exit_code == 1);
  CHECK(log.str().find("evaluation of the initial point failed") !=
        std::string::npos);
  // the failed evaluation is still on record
  CHECK(slurp(dir / "history.txt").find(" inf\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("an infeasible initial point warns and keeps searching") {
  const auto dir = fresh_dir("infeas");
  // default kernels of 5 cannot stack twice on an 8x8 input
  auto cfg = config_from(
      "DATASET CUSTOM\nNUMBER_OF_CLASSES 2\nEXTERNAL_COMMAND cat\n"
      "INPUT_SIZE 8\nMAX_BB_EVAL 8\nSEED 1\n");
  cfg.output_dir = dir.string();
  std::ostringstream log;
  const auto r = run_config(cfg, log);
  CHECK(r.exit_code == 0);
  CHECK(r.run.initial_infeasible);
  CHECK(log.str().find("warning: initial point is architecture-infeasible") !=
        std::string::npos);
  CHECK(r.run.evaluations == 8);
  const auto hist = slurp(dir / "history.txt");
  CHECK(hist.find(" inf\n") != std::string::npos);  // the initial point
  fs::remove_all(dir);
}

TEST_CASE("broken configurations exit with code 2 before evaluating") {
  std::ostringstream log;

  auto cfg = config_from("DATASET SPHERE\nMAX_BB_EVAL 5\nKERNELS 3\n");
  cfg.space.find("KERNELS")->default_value = 0;  // below the lower bound
  CHECK(run_config(cfg, log).exit_code == 2);
  CHECK(log.str().find("error: initial point") != std::string::npos);

  std::ostringstream log2;
  auto cfg2 = config_from("DATASET SPHERE\nMAX_BB_EVAL 5\n");
  cfg2.dataset = "NOPE";
  CHECK(run_config(cfg2, log2).exit_code == 2);
  CHECK(log2.str().find("unknown dataset") != std::string::npos);
}
