#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "buzano/inequalities.hpp"
#include "buzano/io.hpp"

namespace buzano {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Aggregate over the `trials` instances of one (id, dim) cell.
struct CellRecord {
  std::string id;
  std::size_t dim = 0;
  long trials = 0;
  long violations = 0;
  /// Rejected draws summed over all instances of the cell.
  long regenerations = 0;
  /// Instances for which no valid draw was found within the attempt budget.
  long generation_failures = 0;
  /// Smallest normalized slack over every headline and link.
  double min_slack = 0.0;
  /// Largest lhs / rhs; empty when every rhs vanished.
  std::optional<double> max_ratio;
  /// Instance that attained min_slack (lowest index on ties).
  std::optional<Fingerprint> worst_instance;

  bool operator==(const CellRecord&) const = default;
};

struct SuiteConfig {
  std::vector<InequalityId> ids;
  std::vector<std::size_t> dims;
  long trials = 1;
  std::uint64_t seed = 0;
  Tolerances tol;
  /// 0 reads BUZANO_LAB_THREADS, and 0 there means hardware concurrency.
  unsigned threads = 0;
};

struct SuiteReport {
  std::string tool_version;
  std::string rng_algorithm;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<CellRecord> cells;
  double wall_time_s = 0.0;

  long total_violations() const;
  /// No violations and no cell with generation failures.
  bool passed() const;

  Json to_json() const;
  static SuiteReport from_json(const Json& j);
  /// One row per cell with a header line.
  std::string to_csv() const;

  bool operator==(const SuiteReport& other) const;
};

/// Threads a run will use: `requested`, else BUZANO_LAB_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Instance i of cell (id, dim) is make_instance(id, dim, seed, i), so the
/// report does not depend on the thread schedule. Throws std::invalid_argument
/// for trials < 1 or empty id/dim lists.
SuiteReport suite_run(const SuiteConfig& config);

}  // namespace buzano
