#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracspec/commands.hpp"
#include "fracspec/eigensolver.hpp"
#include "fracspec/execution.hpp"
#include "fracspec/fourier.hpp"
#include "fracspec/gagliardo.hpp"

namespace py = pybind11;
using namespace fracspec;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const GridSpec& grid, const Array& values) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw InvalidArgument("array has " + std::to_string(values.size()) + " entries, grid has " +
                          std::to_string(grid.size()));
  }
  return Field(grid, std::vector<double>(values.data(), values.data() + values.size()));
}

py::array_t<double> to_array(const Field& f) {
  const auto& g = f.grid();
  std::vector<py::ssize_t> shape(g.dimension(), static_cast<py::ssize_t>(g.points_per_axis()));
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const Eigen::VectorXd& v) {
  py::array_t<double> out(v.size());
  std::copy(v.data(), v.data() + v.size(), out.mutable_data());
  return out;
}

SolveOptions options(int k, double tol, int max_iter, std::uint64_t seed) {
  SolveOptions o;
  o.k = k;
  o.tol = tol;
  o.max_iter = max_iter;
  o.seed = seed;
  return o;
}

std::string run_command(const std::string& command, const std::string& config_text, bool serial) {
  set_serial(serial);
  const RunConfig config = parse_config(config_text);
  Report report;
  if (command == "solve") report = cmd_solve(config);
  else if (command == "verify") report = cmd_verify(config);
  else if (command == "sweep") report = cmd_sweep(config);
  else if (command == "oracle") report = cmd_oracle(config);
  else throw InvalidArgument("unknown command '" + command + "'");
  return render_json(report, current_timestamp());
}

}  // namespace

PYBIND11_MODULE(_fracspec, m) {
  m.doc() = "Spectral computations for fractional Schroedinger operators on a periodic box.";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<ValidationError>(m, "ValidationError", error);
  py::register_exception<EmptyConstraint>(m, "EmptyConstraint", error);
  py::register_exception<NoConvergence>(m, "NoConvergence", error);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<int, double, std::size_t, double>(), py::arg("dimension"), py::arg("half_length"),
           py::arg("points"), py::arg("order"))
      .def_property_readonly("dimension", &GridSpec::dimension)
      .def_property_readonly("half_length", &GridSpec::half_length)
      .def_property_readonly("points", &GridSpec::points_per_axis)
      .def_property_readonly("order", &GridSpec::order)
      .def_property_readonly("spacing", &GridSpec::spacing)
      .def_property_readonly("size", &GridSpec::size)
      .def("coordinates", [](const GridSpec& g) {
        py::array_t<double> out(static_cast<py::ssize_t>(g.points_per_axis()));
        for (std::size_t j = 0; j < g.points_per_axis(); ++j) out.mutable_data()[j] = g.coordinate(j);
        return out;
      });

  py::class_<Potential>(m, "Potential")
      .def_property_readonly("grid", &Potential::grid)
      .def_property_readonly("values", [](const Potential& p) { return to_array(p.field()); })
      .def_property_readonly("kind", [](const Potential& p) { return descriptor_name(p.descriptor()); })
      .def("validate", [](const Potential& p) {
        const auto r = validate_g1(p);
        py::dict d;
        d["bounds_ok"] = r.bounds_ok;
        d["tail_ok"] = r.tail_ok;
        d["measure_ok"] = r.measure_ok;
        d["min_value"] = r.min_value;
        d["max_value"] = r.max_value;
        d["tail_sup"] = r.tail_sup;
        d["well_fraction"] = r.well_fraction;
        return d;
      });

  m.def("gaussian_well", &gaussian_well, py::arg("grid"), py::arg("depth"), py::arg("width"),
        py::arg("tail_tol") = kDefaultTailTol);
  m.def("compact_bump", &compact_bump, py::arg("grid"), py::arg("radius"), py::arg("depth"),
        py::arg("tail_tol") = kDefaultTailTol);
  m.def("constant_one", &constant_one, py::arg("grid"));

  py::class_<OperatorSpec>(m, "Operator")
      .def(py::init<Potential, double>(), py::arg("potential"), py::arg("beta"))
      .def_property_readonly("beta", &OperatorSpec::beta)
      .def_property_readonly("grid", &OperatorSpec::grid)
      .def("apply", [](const OperatorSpec& op, const Array& u) {
        return to_array(apply_l_beta(op, to_field(op.grid(), u)));
      })
      .def("phi", [](const OperatorSpec& op, const Array& u) { return phi(op, to_field(op.grid(), u)); })
      .def("rayleigh", [](const OperatorSpec& op, const Array& u) {
        return rayleigh(op, to_field(op.grid(), u));
      })
      .def("weighted_mass", [](const OperatorSpec& op, const Array& u) {
        return weighted_mass(op, to_field(op.grid(), u));
      });

  m.def("apply_fractional_laplacian", [](const GridSpec& g, const Array& u) {
    return to_array(apply_fractional_laplacian(to_field(g, u)));
  });
  m.def("multiplier_form", [](const GridSpec& g, const Array& u) { return multiplier_form(to_field(g, u)); });
  m.def("gagliardo_form_direct", [](const GridSpec& g, const Array& u) {
    return gagliardo_form_direct(to_field(g, u));
  });

  m.def(
      "lowest_eigenpairs",
      [](const OperatorSpec& op, int k, double tol, int max_iter, std::uint64_t seed) {
        const auto pairs = lowest_eigenpairs(op, options(k, tol, max_iter, seed));
        Eigen::VectorXd values(pairs.size());
        Eigen::VectorXd residuals(pairs.size());
        py::list vectors;
        for (std::size_t j = 0; j < pairs.size(); ++j) {
          values[j] = pairs[j].lambda;
          residuals[j] = pairs[j].residual;
          vectors.append(to_array(pairs[j].u));
        }
        return py::make_tuple(to_array(values), vectors, to_array(residuals));
      },
      py::arg("op"), py::arg("k") = 1, py::arg("tol") = 1e-9, py::arg("max_iter") = 5000,
      py::arg("seed") = 42);
  m.def("dense_eigenvalues", [](const OperatorSpec& op) { return to_array(dense_oracle(op).values); });
  m.def(
      "gamma_values",
      [](const OperatorSpec& op, int k, double tol) {
        Eigen::VectorXd out(k);
        const auto values = gamma_values(op, k, tol);
        for (int j = 0; j < k; ++j) out[j] = values[j].gamma;
        return to_array(out);
      },
      py::arg("op"), py::arg("k") = 1, py::arg("tol") = 1e-9);
  m.def("dense_gamma_values", [](const OperatorSpec& op) { return to_array(dense_gamma_oracle(op)); });
  m.def(
      "implication_check",
      [](const OperatorSpec& op, double tol) {
        const auto r = implication_check(op, tol);
        py::dict d;
        d["beta"] = r.beta;
        d["lambda1"] = r.lambda1;
        d["gamma1"] = r.gamma1;
        d["hypothesis_met"] = r.hypothesis_met;
        d["conclusion_met"] = r.conclusion_met;
        d["holds"] = r.holds;
        d["note"] = r.note;
        return d;
      },
      py::arg("op"), py::arg("tol") = 1e-6);

  m.def("run", &run_command, py::arg("command"), py::arg("config_text"), py::arg("serial") = true,
        "Runs a command on INI text and returns the report as JSON text.");
  m.def("fingerprint", [](const std::string& text) { return fingerprint_hex(parse_config(text)); });
  m.attr("__version__") = kToolVersion;
}
