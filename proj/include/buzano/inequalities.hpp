#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "buzano/linalg.hpp"

namespace buzano {

/// Every inequality and identity the registry can evaluate.
enum class InequalityId {
  cauchy_schwarz,
  buzano,
  alpha_buzano,
  gen_buzano,
  inv_buzano,
  positive_buzano,
  gram_buzano,
  polar_buzano,
  contraction_member,
  cs_refined_contraction,
  proj_half,
  proj_chain,
  proj_shift,
  buzano_refined,
  sum_proj,
  duncan_taylor,
  oblique_buzano,
  omega_polar,
  omega_polar_halfpower,
  omega_eq_norm,
  norm_minus_omega,
  product_bound,
  product_bound_proj,
  product_bound_sym,
  omega_square,
  omega_square_printed,
};

/// Stable lowercase name, e.g. "gen_buzano".
std::string_view to_string(InequalityId id);
/// Throws std::invalid_argument for unknown names.
InequalityId parse_inequality(std::string_view name);
std::span<const InequalityId> all_inequalities();
/// Identities require |slack| <= tolerance instead of slack >= -tolerance.
bool is_identity(InequalityId id);

/// Instance slots do not match what the id needs (missing slot, wrong size).
struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Instance is well formed but violates a hypothesis of the statement.
struct InvalidInstance : PreconditionError {
  using PreconditionError::PreconditionError;
};

/// Addresses the random stream an instance was drawn from.
struct Fingerprint {
  std::uint64_t seed = 0;
  std::string id;
  std::size_t dim = 0;
  std::uint64_t index = 0;
  int attempt = 0;

  bool operator==(const Fingerprint&) const = default;
};

struct Instance {
  std::map<std::string, ComplexMatrix> matrices;
  std::map<std::string, Vector> vectors;
  std::map<std::string, Complex> scalars;
  Fingerprint fingerprint;

  const ComplexMatrix& matrix(const std::string& name) const;
  const Vector& vector(const std::string& name) const;
  Complex scalar(const std::string& name) const;
  bool operator==(const Instance&) const = default;
};

/// Slots required by an id.
struct Schema {
  std::vector<std::string> matrices;
  std::vector<std::string> vectors;
  std::vector<std::string> scalars;
};
Schema schema(InequalityId id);

enum class LinkKind { inequality, identity };

/// One checked comparison lhs <= rhs (or lhs = rhs for identities).
struct Link {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
  double scale = 0.0;  ///< max(|lhs|, |rhs|)
  LinkKind kind = LinkKind::inequality;
  bool holds = false;

  /// slack / (1 + scale); for identities, -|slack| / (1 + scale).
  double normalized_slack() const;
};

struct Verdict {
  InequalityId id = InequalityId::cauchy_schwarz;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  /// Every intermediate comparison, each checked on its own.
  std::vector<Link> chain;
  /// Derived constants (alpha, angles, antecedent flags) for reports.
  std::map<std::string, double> notes;

  /// lhs / rhs; empty when rhs is (numerically) zero.
  std::optional<double> ratio() const;
  /// Smallest normalized slack over the headline and all links.
  double min_normalized_slack() const;
};

/// Evaluates lhs, rhs and every chain link. Throws SchemaError or
/// InvalidInstance; a violated inequality is reported through `holds`.
Verdict evaluate(InequalityId id, const Instance& inst, const Tolerances& tol = {});

/// Checks slots and hypotheses without evaluating; throws like evaluate.
void validate(InequalityId id, const Instance& inst, const Tolerances& tol = {});

/// One draw from the stream (seed, "<id>/<dim>/<attempt>", index). Returns
/// nothing when the generator itself rejects the draw (e.g. poor conditioning).
/// With `special_cases`, some indices are replaced by constructed equality or
/// rank-deficient configurations.
std::optional<Instance> draw_instance(InequalityId id, std::size_t dim, std::uint64_t seed,
                                      std::uint64_t index, int attempt, bool special_cases = true);

struct GeneratedInstance {
  Instance instance;
  /// Draws rejected before this one.
  int regenerations = 0;
};

/// Draws instance `index` of the (seed, id, dim) family, redrawing up to 100
/// times when a draw is rejected or fails validate(). Throws InvalidInstance
/// when every attempt fails.
GeneratedInstance make_instance(InequalityId id, std::size_t dim, std::uint64_t seed,
                                std::uint64_t index, const Tolerances& tol = {},
                                bool special_cases = true);

/// Re-derives the instance a fingerprint points to.
Instance regenerate(const Fingerprint& fp);

struct TightnessResult {
  double best_ratio = 0.0;
  /// Final point of the best restart; its fingerprint names the start draw.
  Instance witness;
  int restart = 0;
  long evaluations = 0;
};

/// Hill-climbs lhs/rhs from `restarts` generated starts drawn without special
/// cases, so equality is found by the search itself. Vectors are kept at
/// unit norm and unconstrained matrices at unit Frobenius norm; each free
/// real coordinate is perturbed by +-step with step halving from 0.5 down to
/// 1e-6, ending early once the ratio reaches 1 - check_tol. Ties go to the
/// lower restart. Identity ids and dim < 2 throw
/// std::invalid_argument.
TightnessResult tightness_search(InequalityId id, std::size_t dim, int restarts, std::uint64_t seed,
                                 const Tolerances& tol = {});

}  // namespace buzano
