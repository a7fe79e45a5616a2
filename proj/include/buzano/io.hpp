#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "buzano/decompositions.hpp"
#include "buzano/inequalities.hpp"
#include "buzano/linalg.hpp"

namespace buzano {

using Json = nlohmann::json;

/// Unreadable or malformed input file, or unwritable output path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex numbers are [re, im] pairs everywhere.
Json to_json(Complex c);
Complex complex_from_json(const Json& j);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"n": n, "data": [[re, im], ...]} with n^2 entries, row-major.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"n": n, "vectors": [[[re, im], ...], ...]}; vectors are orthonormalized on load.
Json to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j, const Tolerances& tol = {});

Json to_json(const Fingerprint& f);
Fingerprint fingerprint_from_json(const Json& j);

/// {"id", "fingerprint", "matrices", "vectors", "scalars"}.
Json to_json(InequalityId id, const Instance& inst);
Instance instance_from_json(const Json& j);

Json to_json(const Verdict& v);

Json read_json_file(const std::filesystem::path& path);
/// Writes `text` followed by a newline.
void write_text_file(const std::filesystem::path& path, const std::string& text);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
Subspace read_subspace_file(const std::filesystem::path& path, const Tolerances& tol = {});

}  // namespace buzano
