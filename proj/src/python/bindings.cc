// Copyright 2026 The LISTA Design Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cli.h"
#include "lista/genome.h"
#include "lista/network.h"
#include "lista/numerics.h"
#include "lista/solvers.h"
#include "lista/synthgen.h"
#include "lista/trainer.h"

namespace py = pybind11;

namespace lista {
namespace {

// Genomes and reports cross the boundary as JSON text; the Python package
// decodes them.
Genome genome_arg(const std::string& text) { return genome_from_json(Json::parse(text)); }

py::dict trace_dict(const SolverTrace& t) {
  py::dict out;
  out["iterates"] = t.iterates;
  out["objectives"] = t.objectives;
  return out;
}

}  // namespace
}  // namespace lista

PYBIND11_MODULE(_core, m) {
  using namespace lista;
  m.doc() = "Native core of lista_space";

  static py::exception<Error> error(m, "ListaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  m.def("soft_threshold", [](const Matrix& v, double theta) {
    return apply_neuron(NeuronType::kSoftThreshold, v, theta);
  });
  m.def("spectral_sq_norm", &spectral_sq_norm, py::arg("d"), py::arg("tol") = 1e-10);
  m.def("lasso_objective", &lasso_objective);
  m.def(
      "ista",
      [](const Matrix& d, const Vector& b, double lambda, int k) {
        return trace_dict(ista(d, b, lambda, k));
      },
      py::arg("d"), py::arg("b"), py::arg("lam"), py::arg("k"));
  m.def(
      "fista",
      [](const Matrix& d, const Vector& b, double lambda, int k) {
        return trace_dict(fista(d, b, lambda, k));
      },
      py::arg("d"), py::arg("b"), py::arg("lam"), py::arg("k"));

  py::class_<Dictionary>(m, "Dictionary")
      .def_readonly("m", &Dictionary::m)
      .def_readonly("n", &Dictionary::n)
      .def_readonly("data", &Dictionary::data)
      .def_property_readonly("id", &Dictionary::id);
  m.def("sample_dictionary", &sample_dictionary, py::arg("m"), py::arg("n"), py::arg("seed"));
  m.def("sample_lowrank_dictionary", &sample_lowrank_dictionary, py::arg("m"), py::arg("rank"),
        py::arg("n"), py::arg("seed"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("x_true", &Dataset::x_true)
      .def_readonly("b", &Dataset::b)
      .def_readonly("dict_id", &Dataset::dict_id)
      .def_property_readonly("count", &Dataset::count)
      .def_property_readonly("content_hash", &Dataset::content_hash);
  m.def(
      "make_dataset",
      [](const Dictionary& d, int count, const std::string& signal, const std::string& noise,
         std::uint64_t seed, const std::string& split) {
        return make_dataset(d, count, parse_signal(signal), parse_noise(noise), seed,
                            parse_split(split));
      },
      py::arg("dictionary"), py::arg("count"), py::arg("signal") = "bernoulli:0.1",
      py::arg("noise") = "none", py::arg("seed") = 0, py::arg("split") = "train");

  m.def("genome_preset", [](const std::string& name, int k) {
    return genome_to_json(genome_preset(name, k)).dump();
  });
  m.def("validate_genome", [](const std::string& g) {
    return validate_genome(genome_from_json(Json::parse(g)));
  });
  m.def("count_extra", [](const std::string& g) { return count_extra(genome_arg(g)); });
  m.def("genome_hash", [](const std::string& g) { return genome_hash(genome_arg(g)); });
  m.def(
      "design_space_size",
      [](int k, bool neurons, bool pruning) {
        // Python ints are unbounded; go through decimal text.
        return py::int_(py::str(design_space_size(k, neurons, pruning).str()));
      },
      py::arg("k"), py::arg("neurons") = false, py::arg("pruning") = false);

  m.def(
      "train",
      [](const std::string& genome, const Dictionary& d, const Dataset& train_ds,
         const Dataset& val_ds, const std::string& config) {
        const Genome g = genome_arg(genome);
        TrainReport r;
        {
          py::gil_scoped_release release;
          r = train(g, d, train_ds, val_ds, config_from_json(Json::parse(config)));
        }
        return report_to_json(r).dump();
      },
      py::arg("genome"), py::arg("dictionary"), py::arg("train"), py::arg("val"),
      py::arg("config") = "{}");

  m.def("cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"lista"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  });
}
