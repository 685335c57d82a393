#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "povm_domain/povm_domain.hpp"

namespace py = pybind11;
using namespace povm_domain;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw py::value_error("expected a square 2-D array");
  }
  const auto d = static_cast<std::size_t>(a.shape(0));
  return ComplexMatrix(d, std::vector<Complex>(a.data(), a.data() + d * d));
}

ComplexArray to_array(const ComplexMatrix& m) {
  const auto d = static_cast<py::ssize_t>(m.order());
  ComplexArray out({d, d});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

RealArray to_array(const RealMatrix& m) {
  RealArray out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  }
  return out;
}

Povm to_povm(const std::vector<ComplexArray>& effects) {
  std::vector<ComplexMatrix> m;
  for (const auto& e : effects) m.push_back(to_matrix(e));
  return Povm(std::move(m));
}

std::vector<ComplexArray> from_povm(const Povm& povm) {
  std::vector<ComplexArray> out;
  for (const auto& e : povm.effects()) out.push_back(to_array(e));
  return out;
}

DensityMatrix to_state(const ComplexArray& a, double tol) { return DensityMatrix(to_matrix(a), tol); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Affine probability maps, membership tests and estimation for POVMs.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<Feasibility>(m, "Feasibility")
      .value("feasible", Feasibility::feasible)
      .value("marginal", Feasibility::marginal)
      .value("insufficient", Feasibility::insufficient);

  m.def("tetrahedral_povm", [] { return from_povm(tetrahedral_povm()); });
  m.def("computational_povm", [](std::size_t d) { return from_povm(computational_povm(d)); }, py::arg("d"));
  m.def("random_povm",
        [](std::size_t d, std::size_t outcomes, std::uint64_t seed) {
          return from_povm(random_povm(d, outcomes, seed));
        },
        py::arg("d"), py::arg("outcomes"), py::arg("seed"));

  m.def("validate_povm",
        [](const std::vector<ComplexArray>& effects, double tol) {
          const auto report = validate(to_povm(effects), tol);
          py::dict out;
          out["ok"] = report.ok;
          out["completeness_residual"] = report.completeness_residual;
          out["violations"] = report.violations;
          return out;
        },
        py::arg("effects"), py::arg("tol") = kDefaultTol);

  m.def("random_density",
        [](std::size_t d, std::size_t rank, std::uint64_t seed) {
          return to_array(random_density(d, rank, seed).matrix());
        },
        py::arg("d"), py::arg("rank"), py::arg("seed"));
  m.def("bloch_state",
        [](double x, double y, double z) { return to_array(bloch_state({x, y, z}).matrix()); },
        py::arg("x"), py::arg("y"), py::arg("z"));
  m.def("pure_state",
        [](std::vector<double> polar, std::vector<double> phases) {
          return to_array(pure_state({std::move(polar), std::move(phases)}).matrix());
        },
        py::arg("polar"), py::arg("phases"));
  m.def("spectral_decompose",
        [](const ComplexArray& rho, double tol) {
          std::vector<std::pair<double, ComplexArray>> out;
          for (const auto& t : spectral_decompose(to_state(rho, tol), tol)) {
            out.emplace_back(t.weight, to_array(t.state.matrix()));
          }
          return out;
        },
        py::arg("rho"), py::arg("tol") = kDefaultTol);

  m.def("probabilities",
        [](const ComplexArray& rho, const std::vector<ComplexArray>& effects, double tol) {
          return probabilities(to_state(rho, tol), to_povm(effects)).values;
        },
        py::arg("rho"), py::arg("effects"), py::arg("tol") = kDefaultTol);
  m.def("build_affine_map",
        [](const std::vector<ComplexArray>& effects) {
          const auto map = build_affine_map(to_povm(effects));
          return py::make_tuple(to_array(map.matrix), map.offset);
        },
        py::arg("effects"), "Returns (M, c) with p = M r + c.");
  m.def("effective_dimension",
        [](const std::vector<ComplexArray>& effects, double tol) {
          return effective_dimension(to_povm(effects), tol);
        },
        py::arg("effects"), py::arg("tol") = kDefaultTol);
  m.def("subspace_dimension",
        [](const std::vector<std::vector<double>>& points, double tol) {
          std::vector<ProbabilityPoint> p;
          for (const auto& v : points) p.emplace_back(v);
          return subspace_dimension(p, tol);
        },
        py::arg("points"), py::arg("tol") = kDefaultTol);
  m.def("extreme_point_sample",
        [](const std::vector<ComplexArray>& effects, std::size_t count, std::uint64_t seed) {
          std::vector<std::vector<double>> out;
          for (auto& p : extreme_point_sample(to_povm(effects), count, seed)) out.push_back(p.values);
          return out;
        },
        py::arg("effects"), py::arg("count"), py::arg("seed"));
  m.def("membership",
        [](std::vector<double> q, const std::vector<ComplexArray>& effects, double tol) {
          const auto v = membership(ProbabilityPoint(std::move(q)), to_povm(effects), tol);
          py::dict out;
          out["inside"] = v.inside;
          out["min_eigenvalue"] = v.min_eigenvalue;
          out["consistency_residual"] = v.consistency_residual;
          out["unique"] = v.unique;
          out["witness"] = v.witness ? py::object(to_array(v.witness->matrix())) : py::none();
          return out;
        },
        py::arg("q"), py::arg("effects"), py::arg("tol") = kDefaultTol);
  m.def("tetrahedron_coordinates",
        [](std::vector<double> q) {
          const auto c = tetrahedron_coordinates(ProbabilityPoint(std::move(q)));
          return py::make_tuple(c.x, c.y, c.z);
        },
        py::arg("q"));

  m.def("simulate_counts",
        [](const ComplexArray& rho, const std::vector<ComplexArray>& effects, std::uint64_t shots,
           std::uint64_t seed) {
          return simulate_counts(to_state(rho, kDefaultTol), to_povm(effects), shots, seed).counts();
        },
        py::arg("rho"), py::arg("effects"), py::arg("shots"), py::arg("seed"));
  m.def("dispersion",
        [](std::vector<std::uint64_t> counts) { return dispersion(CountRecord(std::move(counts))); },
        py::arg("counts"));
  m.def("linear_inversion",
        [](std::vector<double> q, const std::vector<ComplexArray>& effects, double tol) {
          const auto r = linear_inversion(ProbabilityPoint(std::move(q)), to_povm(effects), tol);
          py::dict out;
          out["matrix"] = to_array(r.matrix);
          out["consistency_residual"] = r.consistency_residual;
          out["effective_dimension"] = r.effective_dimension;
          out["min_eigenvalue"] = r.min_eigenvalue;
          return out;
        },
        py::arg("q"), py::arg("effects"), py::arg("tol") = kDefaultTol);
  m.def("project_to_physical",
        [](const ComplexArray& mat, double tol) {
          return to_array(project_to_physical(to_matrix(mat), tol).matrix());
        },
        py::arg("matrix"), py::arg("tol") = kDefaultTol);
  m.def("classify",
        [](std::vector<std::uint64_t> counts, const std::vector<ComplexArray>& effects, double k,
           std::size_t budget, std::uint64_t seed, double tol) {
          const auto v = classify(CountRecord(std::move(counts)), to_povm(effects), k, budget, seed, tol);
          py::dict out;
          out["kind"] = v.kind;
          out["estimate"] = v.estimate ? py::object(to_array(v.estimate->matrix())) : py::none();
          out["boundary_point"] = v.boundary_point ? py::cast(v.boundary_point->values) : py::none();
          out["required_scale"] = v.required_scale;
          out["evaluations"] = v.evaluations;
          return out;
        },
        py::arg("counts"), py::arg("effects"), py::arg("k") = 1.0, py::arg("budget") = 10000,
        py::arg("seed") = 0, py::arg("tol") = kDefaultTol);
}
