#include "buzano/io.hpp"

#include <cmath>
#include <fstream>

namespace buzano {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw IoError("malformed input: " + what); }

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) malformed(std::string(what) + " must be finite");
  return x;
}

std::size_t positive_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) malformed(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {finite_number(j, "scalar"), 0.0};
  if (!j.is_array() || j.size() != 2) malformed("complex entries are [re, im] pairs");
  return {finite_number(j[0], "real part"), finite_number(j[1], "imaginary part")};
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const Complex& c : v) out.push_back(to_json(c));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) malformed("vector must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i]);
  return v;
}

Json to_json(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("to_json: only square matrices are serialized");
  Json data = Json::array();
  for (const Complex& c : m.data()) data.push_back(to_json(c));
  return Json{{"n", m.dim()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const std::size_t n = positive_size(field(j, "n"), "n");
  const Json& data = field(j, "data");
  if (!data.is_array() || data.size() != n * n) {
    malformed("matrix data must hold n^2 = " + std::to_string(n * n) + " entries");
  }
  ComplexMatrix m(n);
  auto out = m.data();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = complex_from_json(data[k]);
  return m;
}

Json to_json(const Subspace& s) {
  Json vectors = Json::array();
  for (const Vector& v : s.basis()) vectors.push_back(to_json(v));
  return Json{{"n", s.ambient_dim()}, {"vectors", std::move(vectors)}};
}

Subspace subspace_from_json(const Json& j, const Tolerances& tol) {
  const std::size_t n = positive_size(field(j, "n"), "n");
  const Json& raw = field(j, "vectors");
  if (!raw.is_array() || raw.empty()) malformed("subspace needs at least one vector");
  std::vector<Vector> vectors;
  for (const Json& v : raw) {
    vectors.push_back(vector_from_json(v));
    if (vectors.back().size() != n) malformed("subspace vector length differs from n");
  }
  try {
    return Subspace::from_spanning(vectors, tol);
  } catch (const PreconditionError& e) {
    malformed(e.what());
  }
}

Json to_json(const Fingerprint& f) {
  return Json{{"seed", f.seed}, {"id", f.id}, {"dim", f.dim}, {"index", f.index}, {"attempt", f.attempt}};
}

Fingerprint fingerprint_from_json(const Json& j) {
  Fingerprint f;
  try {
    f.seed = field(j, "seed").get<std::uint64_t>();
    f.id = field(j, "id").get<std::string>();
    f.dim = field(j, "dim").get<std::size_t>();
    f.index = field(j, "index").get<std::uint64_t>();
    f.attempt = field(j, "attempt").get<int>();
  } catch (const Json::exception& e) {
    malformed(std::string("fingerprint: ") + e.what());
  }
  return f;
}

Json to_json(InequalityId id, const Instance& inst) {
  Json matrices = Json::object();
  for (const auto& [name, m] : inst.matrices) matrices[name] = to_json(m);
  Json vectors = Json::object();
  for (const auto& [name, v] : inst.vectors) vectors[name] = to_json(v);
  Json scalars = Json::object();
  for (const auto& [name, c] : inst.scalars) scalars[name] = to_json(c);
  return Json{{"id", to_string(id)},
              {"fingerprint", to_json(inst.fingerprint)},
              {"matrices", std::move(matrices)},
              {"vectors", std::move(vectors)},
              {"scalars", std::move(scalars)}};
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) malformed("instance must be an object");
  Instance inst;
  if (j.contains("fingerprint")) inst.fingerprint = fingerprint_from_json(j.at("fingerprint"));
  if (j.contains("matrices")) {
    for (const auto& [name, m] : j.at("matrices").items()) inst.matrices[name] = matrix_from_json(m);
  }
  if (j.contains("vectors")) {
    for (const auto& [name, v] : j.at("vectors").items()) inst.vectors[name] = vector_from_json(v);
  }
  if (j.contains("scalars")) {
    for (const auto& [name, c] : j.at("scalars").items()) inst.scalars[name] = complex_from_json(c);
  }
  return inst;
}

Json to_json(const Verdict& v) {
  Json chain = Json::array();
  for (const Link& l : v.chain) {
    chain.push_back({{"label", l.label},
                     {"lhs", l.lhs},
                     {"rhs", l.rhs},
                     {"slack", l.slack},
                     {"kind", l.kind == LinkKind::identity ? "identity" : "inequality"},
                     {"holds", l.holds}});
  }
  Json out{{"id", to_string(v.id)}, {"lhs", v.lhs},     {"rhs", v.rhs},
           {"slack", v.slack},      {"holds", v.holds}, {"chain", std::move(chain)},
           {"notes", v.notes}};
  const auto r = v.ratio();
  out["ratio"] = r ? Json(*r) : Json(nullptr);
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return matrix_from_json(j);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

Subspace read_subspace_file(const std::filesystem::path& path, const Tolerances& tol) {
  const Json j = read_json_file(path);
  try {
    return subspace_from_json(j, tol);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace buzano
