#pragma once

// JSON interchange: matrices as {rows, cols, data: [[re, im], ...]} in row-major
// order, points as [[re, im], ...], tuple files and atomic model files.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/domains.hpp"
#include "cartan/error.hpp"
#include "cartan/lifting.hpp"
#include "cartan/matrix.hpp"
#include "json.hpp"

namespace cartan {

using Json = nlohmann::json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::ParseError, "expected [re, im] pair, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json vector_to_json(std::span<const Complex> v) {
  Json a = Json::array();
  for (auto z : v) a.push_back(complex_to_json(z));
  return a;
}

inline ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a list of [re, im] pairs");
  ComplexVector v;
  v.reserve(j.size());
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) data.push_back(complex_to_json(m(i, k)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorKind::ParseError, "matrix needs rows, cols and data");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw Error(ErrorKind::ParseError, "rows and cols must be nonnegative integers");
  const auto r = j["rows"].get<std::size_t>(), c = j["cols"].get<std::size_t>();
  const auto data = vector_from_json(j["data"]);
  if (data.size() != r * c)
    throw Error(ErrorKind::ParseError, "matrix data has " + std::to_string(data.size()) + " entries, expected " +
                                           std::to_string(r * c));
  return ComplexMatrix(r, c, data);
}

struct TupleFile {
  DomainDescriptor descriptor;
  Tuple matrices;
};

inline Json tuple_to_json(const TupleFile& t) {
  Json ms = Json::array();
  for (const auto& m : t.matrices) ms.push_back(matrix_to_json(m));
  return {{"descriptor", t.descriptor.to_string()}, {"matrices", std::move(ms)}};
}

inline TupleFile tuple_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("descriptor") || !j.contains("matrices") || !j["descriptor"].is_string() ||
      !j["matrices"].is_array())
    throw Error(ErrorKind::ParseError, "tuple file needs a descriptor string and a matrices list");
  TupleFile t{DomainDescriptor::parse(j["descriptor"].get<std::string>()), {}};
  for (const auto& m : j["matrices"]) t.matrices.push_back(matrix_from_json(m));
  if (t.matrices.size() != t.descriptor.dimension())
    throw Error(ErrorKind::ArityMismatch, t.descriptor.to_string() + " needs " +
                                              std::to_string(t.descriptor.dimension()) + " matrices, file has " +
                                              std::to_string(t.matrices.size()));
  tuple_extent(t.matrices);
  return t;
}

/// Serialized form of an atomic model: generators are functions on the atoms
/// (one value per atom); when absent the constant function 1 is used, and the
/// degree defaults to the atom count.
struct ModelSpec {
  DomainDescriptor descriptor;
  std::vector<Atom> atoms;
  std::vector<ComplexVector> generators;
  int degree = 0;

  SubnormalModel build(double tol = kDefaultTol) const {
    AtomicMeasure mu(descriptor, atoms);
    auto gens = generators;
    if (gens.empty()) gens.push_back(ComplexVector(mu.size(), 1.0));
    return build_model(std::move(mu), gens, degree, tol);
  }
};

inline Json model_to_json(const ModelSpec& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"point", vector_to_json(a.point)}, {"weight", a.weight}});
  Json gens = Json::array();
  for (const auto& g : m.generators) gens.push_back(vector_to_json(g));
  return {{"descriptor", m.descriptor.to_string()}, {"atoms", std::move(atoms)}, {"generators", std::move(gens)},
          {"degree", m.degree}};
}

inline ModelSpec model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("descriptor") || !j.contains("atoms") || !j["descriptor"].is_string() ||
      !j["atoms"].is_array())
    throw Error(ErrorKind::ParseError, "model file needs a descriptor string and an atoms list");
  ModelSpec m{DomainDescriptor::parse(j["descriptor"].get<std::string>()), {}, {}, 0};
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("point")) throw Error(ErrorKind::ParseError, "atom needs a point");
    Atom atom{vector_from_json(a["point"]), 1.0};
    if (a.contains("weight")) {
      if (!a["weight"].is_number()) throw Error(ErrorKind::ParseError, "atom weight must be a number");
      atom.weight = a["weight"].get<double>();
    }
    m.atoms.push_back(std::move(atom));
  }
  if (j.contains("generators")) {
    if (!j["generators"].is_array()) throw Error(ErrorKind::ParseError, "generators must be a list");
    for (const auto& g : j["generators"]) m.generators.push_back(vector_from_json(g));
  }
  m.degree = static_cast<int>(m.atoms.size());
  if (j.contains("degree")) {
    if (!j["degree"].is_number_integer()) throw Error(ErrorKind::ParseError, "degree must be an integer");
    m.degree = j["degree"].get<int>();
  }
  return m;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace cartan
