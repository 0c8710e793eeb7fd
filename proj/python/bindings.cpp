#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "simplicial/analysis.hpp"
#include "simplicial/attention.hpp"
#include "simplicial/curvature.hpp"
#include "simplicial/hypergraph.hpp"
#include "simplicial/lipschitz.hpp"
#include "simplicial/rope.hpp"
#include "simplicial/routing.hpp"

namespace py = pybind11;
using namespace simplicial;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

std::vector<Matrix> to_matrices(const std::vector<Array>& arrays) {
  std::vector<Matrix> out;
  for (const auto& a : arrays) out.push_back(to_matrix(a));
  return out;
}

Array from_matrix(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

Array from_tensor(const DenseTensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  Array out(shape);
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "N-simplicial attention and its verification toolkit";

  py::class_<SimplicialMask>(m, "Mask")
      .def(py::init<std::size_t, std::size_t, std::vector<Simplex>>(), py::arg("tokens"), py::arg("order"),
           py::arg("edges"))
      .def_static("full", &SimplicialMask::full, py::arg("tokens"), py::arg("order"))
      .def_static("causal", &causal_mask, py::arg("tokens"), py::arg("order"))
      .def_property_readonly("tokens", &SimplicialMask::tokens)
      .def_property_readonly("order", &SimplicialMask::order)
      .def_property_readonly("edges", &SimplicialMask::edges)
      .def("__len__", &SimplicialMask::edge_count)
      .def("__contains__", [](const SimplicialMask& mask, const Simplex& s) { return mask.contains(s); })
      .def("quasi_strongly_connected", [](const SimplicialMask& mask) {
        return is_quasi_strongly_connected(mask).connected;
      })
      .def("radius", [](const SimplicialMask& mask) { return radius(mask); })
      .def("__str__", &format_mask);

  m.def("parse_mask", &parse_mask, py::arg("text"));

  py::class_<SimplicialParams>(m, "Params")
      .def(py::init([](const std::vector<Array>& keys, const std::vector<Array>& values) {
             return SimplicialParams::single_head(to_matrices(keys), to_matrices(values));
           }),
           py::arg("keys"), py::arg("values"))
      .def_static(
          "random",
          [](std::size_t order, std::size_t dim, std::size_t heads, double scale, std::uint64_t seed) {
            Rng rng(seed);
            return SimplicialParams::random(order, dim, heads, scale, rng);
          },
          py::arg("order"), py::arg("dim"), py::arg("heads") = 1, py::arg("scale") = 0.25, py::arg("seed") = 0)
      .def_property_readonly("order", &SimplicialParams::order)
      .def_property_readonly("dim", &SimplicialParams::dim)
      .def_property_readonly("heads", &SimplicialParams::head_count)
      .def_property_readonly("head_dim", &SimplicialParams::head_dim)
      .def("__str__", &format_params);

  m.def("parse_params", &parse_params, py::arg("text"));

  m.def(
      "contract_logits",
      [](const std::vector<Array>& keys, double scale) {
        return from_tensor(contract_logits(to_matrices(keys), scale));
      },
      py::arg("keys"), py::arg("scale") = 1.0);

  m.def(
      "softmax",
      [](const Array& logits, const SimplicialMask* mask) {
        std::vector<std::size_t> shape(logits.shape(), logits.shape() + logits.ndim());
        DenseTensor t(shape, std::vector<double>(logits.data(), logits.data() + logits.size()));
        return from_tensor(softmax_multi_axis(t, mask));
      },
      py::arg("logits"), py::arg("mask") = nullptr);

  m.def(
      "forward",
      [](const Array& x, const SimplicialParams& params, const SimplicialMask* mask, bool skip) {
        return from_matrix(forward(to_matrix(x), params, mask, skip));
      },
      py::arg("x"), py::arg("params"), py::arg("mask") = nullptr, py::arg("skip") = false);

  m.def(
      "residual_norm", [](const Array& x) { return residual_norm(to_matrix(x)); }, py::arg("x"));
  m.def(
      "norm_one_inf", [](const Array& x) { return norm_one_inf(to_matrix(x)); }, py::arg("x"));

  m.def(
      "cubic_bound_check",
      [](const Array& x, const SimplicialParams& params) {
        auto c = cubic_bound_check(to_matrix(x), params);
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["gamma"] = c.gamma.gamma;
        d["status"] = std::string(to_string(c.status));
        return d;
      },
      py::arg("x"), py::arg("params"));

  m.def("reduce_order_exact",
        [](const SimplicialParams& params, const Array& x) { return reduce_order(params, to_matrix(x)).exact(); },
        py::arg("params"), py::arg("x"));

  m.def(
      "det_logits",
      [](const std::vector<Array>& keys, std::size_t order, std::size_t dim) {
        return from_tensor(det_logits(to_matrices(keys), RopeConfig(order, dim)));
      },
      py::arg("keys"), py::arg("order"), py::arg("dim"));

  m.def(
      "apply_rotations",
      [](const Array& k, const std::vector<std::int64_t>& positions, std::size_t order) {
        Matrix km = to_matrix(k);
        return from_matrix(apply_rotations(km, positions, RopeConfig(order, km.cols())));
      },
      py::arg("keys"), py::arg("positions"), py::arg("order"));

  m.def(
      "path_sparse_mask",
      [](const Array& scores, std::size_t k, std::size_t order) {
        return path_sparse_mask(pairwise_topk(to_matrix(scores), k), order);
      },
      py::arg("scores"), py::arg("k"), py::arg("order"));

  m.def("lipschitz_bound", &lipschitz_bound, py::arg("n"), py::arg("d"), py::arg("order"), py::arg("v"),
        py::arg("k"), py::arg("r"));

  m.def(
      "analytic_jvp",
      [](const Array& x, const SimplicialParams& params, const Array& direction) {
        return from_matrix(analytic_jvp(to_matrix(x), params, to_matrix(direction)));
      },
      py::arg("x"), py::arg("params"), py::arg("direction"));

  m.def(
      "forman_curvature",
      [](std::size_t nodes, std::vector<Edge> edges, const std::string& variant) {
        return forman_curvature(SimpleGraph(nodes, std::move(edges)), parse_forman_variant(variant));
      },
      py::arg("nodes"), py::arg("edges"), py::arg("variant") = "combinatorial");

  m.def(
      "curvature_increase",
      [](std::size_t nodes, std::vector<Edge> edges, const std::string& variant) {
        auto r = curvature_report(SimpleGraph(nodes, std::move(edges)), parse_forman_variant(variant));
        return py::make_tuple(r.avg_graph, r.avg_line, r.avg_increased);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("variant") = "augmented");
}
