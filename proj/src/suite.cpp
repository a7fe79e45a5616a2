#include "buzano/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "buzano/random.hpp"

namespace buzano {

namespace {

struct TrialOutcome {
  bool generated = false;
  bool holds = true;
  int regenerations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<double> ratio;
  Fingerprint fingerprint;
};

TrialOutcome run_trial(InequalityId id, std::size_t dim, std::uint64_t seed, std::uint64_t index,
                       const Tolerances& tol) {
  TrialOutcome out;
  try {
    GeneratedInstance g = make_instance(id, dim, seed, index, tol);
    const Verdict v = evaluate(id, g.instance, tol);
    out.generated = true;
    out.holds = v.holds;
    out.regenerations = g.regenerations;
    out.min_slack = v.min_normalized_slack();
    out.ratio = v.ratio();
    out.fingerprint = g.instance.fingerprint;
  } catch (const PreconditionError&) {
    // Every attempt was rejected, or evaluation refused the drawn instance.
    out.regenerations = 100;
  }
  return out;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

long SuiteReport::total_violations() const {
  long total = 0;
  for (const CellRecord& c : cells) total += c.violations;
  return total;
}

bool SuiteReport::passed() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellRecord& c) { return c.violations == 0 && c.generation_failures == 0; });
}

Json SuiteReport::to_json() const {
  Json cell_list = Json::array();
  for (const CellRecord& c : cells) {
    cell_list.push_back({{"id", c.id},
                         {"dim", c.dim},
                         {"trials", c.trials},
                         {"violations", c.violations},
                         {"regenerations", c.regenerations},
                         {"generation_failures", c.generation_failures},
                         {"min_slack", c.min_slack},
                         {"max_ratio", c.max_ratio ? Json(*c.max_ratio) : Json(nullptr)},
                         {"worst_instance", c.worst_instance ? buzano::to_json(*c.worst_instance) : Json(nullptr)}});
  }
  return Json{{"tool_version", tool_version},
              {"rng_algorithm", rng_algorithm},
              {"seed", seed},
              {"tolerances",
               {{"eig_tol", tol.eig_tol},
                {"rank_tol", tol.rank_tol},
                {"opt_tol", tol.opt_tol},
                {"check_tol", tol.check_tol}}},
              {"cells", std::move(cell_list)},
              {"total_violations", total_violations()},
              {"passed", passed()},
              {"wall_time_s", wall_time_s}};
}

SuiteReport SuiteReport::from_json(const Json& j) {
  SuiteReport r;
  try {
    r.tool_version = j.at("tool_version").get<std::string>();
    r.rng_algorithm = j.at("rng_algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const Json& t = j.at("tolerances");
    r.tol = {t.at("eig_tol").get<double>(), t.at("rank_tol").get<double>(), t.at("opt_tol").get<double>(),
             t.at("check_tol").get<double>()};
    for (const Json& c : j.at("cells")) {
      CellRecord cell;
      cell.id = c.at("id").get<std::string>();
      cell.dim = c.at("dim").get<std::size_t>();
      cell.trials = c.at("trials").get<long>();
      cell.violations = c.at("violations").get<long>();
      cell.regenerations = c.at("regenerations").get<long>();
      cell.generation_failures = c.at("generation_failures").get<long>();
      cell.min_slack = c.at("min_slack").get<double>();
      if (!c.at("max_ratio").is_null()) cell.max_ratio = c.at("max_ratio").get<double>();
      if (!c.at("worst_instance").is_null()) cell.worst_instance = fingerprint_from_json(c.at("worst_instance"));
      r.cells.push_back(std::move(cell));
    }
    r.wall_time_s = j.at("wall_time_s").get<double>();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed suite report: ") + e.what());
  }
  return r;
}

std::string SuiteReport::to_csv() const {
  std::ostringstream os;
  os << "id,dim,trials,violations,regenerations,generation_failures,min_slack,max_ratio,"
        "worst_seed,worst_index,worst_attempt\n";
  for (const CellRecord& c : cells) {
    os << c.id << ',' << c.dim << ',' << c.trials << ',' << c.violations << ',' << c.regenerations << ','
       << c.generation_failures << ',' << format_double(c.min_slack) << ','
       << (c.max_ratio ? format_double(*c.max_ratio) : "") << ',';
    if (c.worst_instance) {
      os << c.worst_instance->seed << ',' << c.worst_instance->index << ',' << c.worst_instance->attempt;
    } else {
      os << ",,";
    }
    os << '\n';
  }
  return os.str();
}

bool SuiteReport::operator==(const SuiteReport& o) const {
  return tool_version == o.tool_version && rng_algorithm == o.rng_algorithm && seed == o.seed &&
         tol.eig_tol == o.tol.eig_tol && tol.rank_tol == o.tol.rank_tol && tol.opt_tol == o.tol.opt_tol &&
         tol.check_tol == o.tol.check_tol && cells == o.cells && wall_time_s == o.wall_time_s;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BUZANO_LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024UL));
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

SuiteReport suite_run(const SuiteConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("suite_run: trials must be at least 1");
  if (config.ids.empty() || config.dims.empty()) throw std::invalid_argument("suite_run: empty id or dim list");
  config.tol.validate();
  const auto start = std::chrono::steady_clock::now();

  struct Cell {
    InequalityId id;
    std::size_t dim;
  };
  std::vector<Cell> cells;
  for (InequalityId id : config.ids) {
    for (std::size_t dim : config.dims) cells.push_back({id, dim});
  }
  const std::size_t per_cell = static_cast<std::size_t>(config.trials);
  std::vector<TrialOutcome> outcomes(cells.size() * per_cell);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < outcomes.size(); k = next++) {
      const Cell& c = cells[k / per_cell];
      outcomes[k] = run_trial(c.id, c.dim, config.seed, k % per_cell, config.tol);
    }
  };
  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(config.threads), outcomes.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SuiteReport report;
  report.tool_version = std::string(kToolVersion);
  report.rng_algorithm = std::string(Rng::algorithm);
  report.seed = config.seed;
  report.tol = config.tol;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellRecord rec;
    rec.id = std::string(to_string(cells[ci].id));
    rec.dim = cells[ci].dim;
    rec.trials = config.trials;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < per_cell; ++i) {
      const TrialOutcome& o = outcomes[ci * per_cell + i];
      rec.regenerations += o.regenerations;
      if (!o.generated) {
        ++rec.generation_failures;
        continue;
      }
      if (!o.holds) ++rec.violations;
      if (o.ratio && (!rec.max_ratio || *o.ratio > *rec.max_ratio)) rec.max_ratio = o.ratio;
      if (o.min_slack < worst) {
        worst = o.min_slack;
        rec.worst_instance = o.fingerprint;
      }
    }
    rec.min_slack = std::isfinite(worst) ? worst : 0.0;
    report.cells.push_back(std::move(rec));
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace buzano
