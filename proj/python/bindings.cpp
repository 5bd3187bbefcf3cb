#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "rangesum/dst.hpp"
#include "rangesum/errors.hpp"
#include "rangesum/grw_lsh.hpp"
#include "rangesum/prefix.hpp"
#include "rangesum/sketch.hpp"

namespace py = pybind11;
using namespace rangesum;

namespace {

DstConfig make_dst_config(int universe_log, const std::string& distribution,
                          std::uint64_t seed, const std::string& hash) {
  DstConfig c;
  c.universe_log = universe_log;
  c.distribution = parse_distribution(distribution);
  c.master_seed = seed;
  c.hash = HashFamily::parse(hash);
  return c;
}

SketchConfig make_sketch_config(const std::string& norm, std::size_t r, int universe_log,
                                std::uint64_t seed, const std::string& hash) {
  SketchConfig c;
  c.p = parse_norm(norm);
  c.r = r;
  c.universe_log = universe_log;
  c.seed = seed;
  c.hash = HashFamily::parse(hash);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Range-summable random variables from dyadic simulation trees";

  static py::exception<ArgumentError> argument_error(m, "ArgumentError", PyExc_ValueError);
  static py::exception<SamplingError> sampling_error(m, "SamplingError", PyExc_RuntimeError);

  m.def(
      "dyadic_cover",
      [](std::uint64_t a, std::uint64_t b, int universe_log) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
        for (const Prefix& p : dyadic_cover(a, b, universe_log)) {
          out.emplace_back(p.begin(universe_log), p.end(universe_log));
        }
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("universe_log"),
      "Minimal dyadic partition of [a, b) as (begin, end) pairs.");

  py::class_<Dst>(m, "Dst")
      .def(py::init([](int universe_log, const std::string& distribution, std::uint64_t seed,
                       const std::string& hash) {
             return Dst(make_dst_config(universe_log, distribution, seed, hash));
           }),
           py::arg("universe_log"), py::arg("distribution") = "gaussian", py::arg("seed") = 0,
           py::arg("hash") = "fast")
      .def_property_readonly("universe_log", &Dst::universe_log)
      .def_property_readonly("universe", &Dst::universe)
      .def_property_readonly("root_value", &Dst::root_value)
      .def("range_sum", py::overload_cast<std::uint64_t, std::uint64_t>(&Dst::range_sum, py::const_),
           py::arg("a"), py::arg("b"))
      .def(
          "range_sum_with_splits",
          [](const Dst& d, std::uint64_t a, std::uint64_t b) {
            std::uint64_t splits = 0;
            const double v = d.range_sum(a, b, splits);
            return py::make_tuple(v, splits);
          },
          py::arg("a"), py::arg("b"))
      .def("singleton", &Dst::singleton, py::arg("i"))
      .def(
          "inner_product",
          [](const Dst& d, const std::vector<std::tuple<std::uint64_t, std::uint64_t, double>>& segs) {
            std::vector<Segment> s;
            s.reserve(segs.size());
            for (const auto& [b, e, w] : segs) s.push_back({b, e, w});
            return d.inner_product(s);
          },
          py::arg("segments"), "Sum of weight * S[begin, end) over sorted disjoint segments.");

  py::class_<LpSketch>(m, "LpSketch")
      .def(py::init([](const std::string& norm, std::size_t r, int universe_log,
                       std::uint64_t seed, const std::string& hash) {
             return LpSketch(make_sketch_config(norm, r, universe_log, seed, hash));
           }),
           py::arg("norm") = "l2", py::arg("r") = 100, py::arg("universe_log") = 20,
           py::arg("seed") = 0, py::arg("hash") = "fast")
      .def_property_readonly("size", &LpSketch::size)
      .def("update", &LpSketch::update, py::arg("a"), py::arg("b"), py::arg("delta"))
      .def(
          "update_batch",
          [](LpSketch& s, const std::vector<std::tuple<std::uint64_t, std::uint64_t, double>>& ups) {
            std::vector<RangeUpdate> u;
            u.reserve(ups.size());
            for (const auto& [a, b, d] : ups) u.push_back({a, b, d});
            s.update_batch(u);
          },
          py::arg("updates"))
      .def("accumulators", &LpSketch::accumulators)
      .def("estimate_l1", &LpSketch::estimate_l1)
      .def("estimate_l2", &LpSketch::estimate_l2)
      .def("estimate", &LpSketch::estimate_norm)
      .def("merge_from", &LpSketch::merge_from, py::arg("other"))
      .def("export_state", &LpSketch::export_state)
      .def_static("import_state", [](const std::string& text) { return LpSketch::import_state(text); },
                  py::arg("text"));

  py::class_<GrwLsh>(m, "GrwLsh")
      .def(py::init([](std::size_t dims, int universe_log, double W, std::uint64_t seed,
                       const std::string& hash) {
             GrwLshConfig c;
             c.m = dims;
             c.universe_log = universe_log;
             c.W = W;
             c.seed = seed;
             c.hash = HashFamily::parse(hash);
             return GrwLsh(c);
           }),
           py::arg("m") = 1, py::arg("universe_log") = 20, py::arg("W") = 1.0,
           py::arg("seed") = 0, py::arg("hash") = "fast")
      .def_property_readonly("offset", &GrwLsh::offset)
      .def("raw_hash", [](const GrwLsh& h, const std::vector<std::uint64_t>& s) { return h.raw_hash(s); },
           py::arg("point"))
      .def("__call__", [](const GrwLsh& h, const std::vector<std::uint64_t>& s) { return h.value(s); },
           py::arg("point"));

  m.def(
      "collision_curve",
      [](double W, const std::vector<std::uint64_t>& distances, std::uint64_t trials,
         std::uint64_t seed, int universe_log) {
        std::vector<std::tuple<std::uint64_t, double, double>> out;
        for (const auto& p : collision_curve(W, distances, trials, seed, universe_log)) {
          out.emplace_back(p.distance, p.probability, p.stderr_);
        }
        return out;
      },
      py::arg("W"), py::arg("distances"), py::arg("trials"), py::arg("seed") = 0,
      py::arg("universe_log") = 20, "List of (distance, probability, stderr).");
}
