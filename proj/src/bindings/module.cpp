#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hypermads/driver.hpp"
#include "hypermads/neighbors.hpp"
#include "hypermads/numformat.hpp"

namespace py = pybind11;
using namespace hypermads;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "mesh adaptive direct search over the hyperparameters of a small CNN";

  py::enum_<HpKind>(m, "HpKind")
      .value("Categorical", HpKind::Categorical)
      .value("Integer", HpKind::Integer)
      .value("Real", HpKind::Real)
      .value("Boolean", HpKind::Boolean);

  py::enum_<EvalStatus>(m, "EvalStatus")
      .value("Ok", EvalStatus::Ok)
      .value("Infeasible", EvalStatus::Infeasible)
      .value("EvalFailed", EvalStatus::EvalFailed);

  py::class_<HyperparameterDef>(m, "HyperparameterDef")
      .def_readwrite("keyword", &HyperparameterDef::keyword)
      .def_readwrite("kind", &HyperparameterDef::kind)
      .def_readwrite("default_value", &HyperparameterDef::default_value)
      .def_readwrite("lower", &HyperparameterDef::lower)
      .def_readwrite("upper", &HyperparameterDef::upper)
      .def_readwrite("fixed", &HyperparameterDef::fixed)
      .def(py::self == py::self);

  py::class_<SpaceSpec>(m, "SpaceSpec")
      .def_static("defaults", &SpaceSpec::defaults)
      .def_readwrite("defs", &SpaceSpec::defs)
      .def_readwrite("input_image_size", &SpaceSpec::input_image_size)
      .def_readwrite("input_channels", &SpaceSpec::input_channels)
      .def("definition",
           [](const SpaceSpec& s, const std::string& keyword) {
             return s.def(keyword);
           })
      // defs round-trips as a python list copy, so in-place mutation of one
      // definition needs a dedicated setter
      .def("set_fixed",
           [](SpaceSpec& s, const std::string& keyword, bool fixed) {
             if (auto* d = s.find(keyword)) d->fixed = fixed;
             else throw py::key_error(keyword);
           })
      .def("set_bounds",
           [](SpaceSpec& s, const std::string& keyword, double lower,
              double upper) {
             if (auto* d = s.find(keyword)) {
               d->lower = lower;
               d->upper = upper;
             } else {
               throw py::key_error(keyword);
             }
           })
      .def(py::self == py::self);

  py::class_<ConvLayerGroup>(m, "ConvLayerGroup")
      .def(py::init([](int out_channels, int kernel, int stride, int padding,
                       int do_pool) {
             return ConvLayerGroup{out_channels, kernel, stride, padding,
                                   do_pool};
           }),
           py::arg("out_channels"), py::arg("kernel"), py::arg("stride"),
           py::arg("padding"), py::arg("do_pool"))
      .def_readwrite("out_channels", &ConvLayerGroup::out_channels)
      .def_readwrite("kernel", &ConvLayerGroup::kernel)
      .def_readwrite("stride", &ConvLayerGroup::stride)
      .def_readwrite("padding", &ConvLayerGroup::padding)
      .def_readwrite("do_pool", &ConvLayerGroup::do_pool)
      .def(py::self == py::self);

  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def_readwrite("conv_layers", &Point::conv_layers)
      .def_readwrite("fc_sizes", &Point::fc_sizes)
      .def_readwrite("batch_size", &Point::batch_size)
      .def_readwrite("optimizer_choice", &Point::optimizer_choice)
      .def_readwrite("optimizer_params", &Point::optimizer_params)
      .def_readwrite("dropout_rate", &Point::dropout_rate)
      .def_readwrite("activation", &Point::activation)
      .def(py::self == py::self)
      .def("__repr__", [](const Point& p) {
        return "Point(" + format_flat(encode(p)) + ")";
      });

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_readonly("keyword", &ValidationIssue::keyword)
      .def_readonly("message", &ValidationIssue::message)
      .def("__repr__", [](const ValidationIssue& v) {
        return v.keyword + ": " + v.message;
      });

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("feasible", &FeasibilityReport::feasible)
      .def_readonly("sizes", &FeasibilityReport::sizes);

  m.def("dimension",
        py::overload_cast<std::size_t, std::size_t>(&dimension),
        py::arg("num_conv_groups"), py::arg("num_fc_layers"),
        "flat dimension: 5*n1 + n2 + 10");
  m.def("default_point", &default_point, py::arg("spec"));
  m.def("encode", &encode, py::arg("point"));
  m.def("decode", &decode, py::arg("flat"));
  m.def("validate",
        py::overload_cast<const Point&, const SpaceSpec&>(&validate),
        py::arg("point"), py::arg("spec"));
  m.def("validate_flat",
        py::overload_cast<const std::vector<double>&, const SpaceSpec&>(
            &validate),
        py::arg("flat"), py::arg("spec"));
  m.def("architecture_feasible",
        py::overload_cast<const Point&, int>(&architecture_feasible),
        py::arg("point"), py::arg("input_size"));

  m.def(
      "neighbors",
      [](const Point& p, const SpaceSpec& spec) {
        std::vector<std::pair<std::string, Point>> out;
        for (const auto& n : all_neighbors(p, spec))
          out.emplace_back(std::string(to_string(n.tag)), n.point);
        return out;
      },
      py::arg("point"), py::arg("spec"),
      "categorical neighborhood as (tag, point) pairs, canonical order");

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("dataset", &RunConfig::dataset)
      .def_readwrite("number_of_classes", &RunConfig::number_of_classes)
      .def_readwrite("max_bb_eval", &RunConfig::max_bb_eval)
      .def_readwrite("space", &RunConfig::space)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("external_command", &RunConfig::external_command)
      .def_readwrite("eval_timeout_seconds", &RunConfig::eval_timeout_seconds);

  m.def(
      "parse_params",
      [](const std::string& text) {
        const auto r = parse_params_text(text);
        std::vector<std::pair<int, std::string>> errors;
        for (const auto& e : r.errors) errors.emplace_back(e.line, e.message);
        return std::make_pair(r.config, errors);
      },
      py::arg("text"),
      "parse parameter-file text; returns (config or None, [(line, message)])");
  m.def(
      "parse_params_file",
      [](const std::string& path) {
        const auto r = parse_params_file(path);
        std::vector<std::pair<int, std::string>> errors;
        for (const auto& e : r.errors) errors.emplace_back(e.line, e.message);
        return std::make_pair(r.config, errors);
      },
      py::arg("path"));
  m.def("initial_point", &initial_point, py::arg("config"));

  py::class_<EvalRecord>(m, "EvalRecord")
      .def_readonly("point", &EvalRecord::point)
      .def_readonly("objective", &EvalRecord::objective)
      .def_readonly("status", &EvalRecord::status)
      .def_readonly("index", &EvalRecord::index);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("best_point", &RunResult::best_point)
      .def_readonly("best_objective", &RunResult::best_objective)
      .def_readonly("history", &RunResult::history)
      .def_readonly("evaluations", &RunResult::evaluations)
      .def_readonly("initial_infeasible", &RunResult::initial_infeasible)
      .def_readonly("iterations", &RunResult::iterations)
      .def_property_readonly("stop_reason", [](const RunResult& r) {
        return std::string(to_string(r.stop_reason));
      });

  m.def(
      "minimize",
      [](const std::function<double(const FlatPoint&)>& fn,
         const SpaceSpec& spec, std::optional<Point> start,
         int max_evaluations, std::uint64_t seed, double min_poll_size) {
        SpaceProblem problem(spec, start ? *start : default_point(spec));
        CallbackEvaluator evaluator(fn);
        RunOptions opt;
        opt.max_evaluations = max_evaluations;
        opt.seed = seed;
        opt.min_poll_size = min_poll_size;
        return run_mads(problem, evaluator, opt);
      },
      py::arg("fn"), py::arg("spec"), py::arg("start") = std::nullopt,
      py::arg("max_evaluations") = 100, py::arg("seed") = 0,
      py::arg("min_poll_size") = 1e-6,
      "search the space, calling fn(flat_point) -> objective; exceptions "
      "and non-finite returns count as failed evaluations");

  m.def(
      "run",
      [](const RunConfig& config) {
        std::ostringstream log;
        const auto r = run_config(config, log);
        return py::make_tuple(r.run, r.exit_code, log.str());
      },
      py::arg("config"),
      "full driver run (writes history.txt/stats.txt into "
      "config.output_dir); returns (result, exit_code, log)");
}
