#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <variant>

#include "buzano/alpha_sets.hpp"
#include "buzano/decompositions.hpp"
#include "buzano/random.hpp"
#include "support.hpp"

using namespace buzano;
using namespace buzano::testing;

namespace {

const char* const kKinds[] = {"ginibre",        "hermitian",       "psd",
                              "positive_contraction", "unitary",   "normal",
                              "orth_proj",      "oblique_pair",    "partial_isometry",
                              "nilpotent_shift", "density_matrix", "unit_vector",
                              "member_alpha(0.5,-1)", "accretive(0.25)"};

// Returns an empty string when the sample has the advertised structure.
std::string certify(const Ensemble& e, std::size_t n, const Sample& sample) {
  constexpr double tol = 1e-9;
  if (e.kind == EnsembleKind::unit_vector) {
    const Vector& v = std::get<Vector>(sample);
    return v.size() == n && std::abs(norm(v) - 1.0) < 1e-14 ? "" : "not a unit vector";
  }
  if (e.kind == EnsembleKind::oblique_pair) {
    const SubspacePair& p = std::get<SubspacePair>(sample);
    if (p.range.dim() + p.null.dim() != n) return "dimensions do not add up";
    std::vector<Vector> cols = p.range.basis();
    cols.insert(cols.end(), p.null.basis().begin(), p.null.basis().end());
    return min_modulus(ComplexMatrix::from_columns(cols)) >= 0.05 ? "" : "poorly conditioned pair";
  }
  const ComplexMatrix& t = std::get<ComplexMatrix>(sample);
  if (t.rows() != n || t.cols() != n || !all_finite(t)) return "bad shape";
  switch (e.kind) {
    case EnsembleKind::ginibre: return "";
    case EnsembleKind::hermitian: return is_hermitian(t, 0.0) ? "" : "not Hermitian";
    case EnsembleKind::psd: {
      const EigenRange r = hermitian_eig_range(t);
      return is_hermitian(t, 0.0) && r.min >= -tol * std::max(1.0, r.max) ? "" : "not positive";
    }
    case EnsembleKind::positive_contraction: {
      const EigenRange r = hermitian_eig_range(t);
      return is_hermitian(t, 0.0) && r.min > 0.0 && r.max < 1.0 ? "" : "not in (0, I)";
    }
    case EnsembleKind::unitary: return is_unitary(t, tol) ? "" : "not unitary";
    case EnsembleKind::normal:
      return max_abs(t * t.adjoint() - t.adjoint() * t) < tol * std::max(1.0, op_norm(t) * op_norm(t)) ? ""
                                                                                                         : "not normal";
    case EnsembleKind::orth_proj:
      return is_hermitian(t, tol) && max_abs(t * t - t) < tol ? "" : "not a projection";
    case EnsembleKind::partial_isometry: return max_abs(t * t.adjoint() * t - t) < tol ? "" : "not a partial isometry";
    case EnsembleKind::nilpotent_shift: return t == nilpotent_shift(n) ? "" : "not the shift";
    case EnsembleKind::density_matrix: {
      const EigenRange r = hermitian_eig_range(t);
      return r.min >= -tol && std::abs(trace(t) - 1.0) < 1e-12 ? "" : "not a state";
    }
    case EnsembleKind::member_alpha: return defect(t, e.param) <= 1.0 + tol ? "" : "not a member";
    case EnsembleKind::accretive:
      return hermitian_eig_range(hermitian_part(t)).min >= e.param.real() - tol ? "" : "Re(T) below s";
    default: break;
  }
  return "unhandled kind";
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("equal seeds give equal streams; labels and indices separate them") {
    Rng a(SeedSpec{7, "stream", 3});
    Rng b(SeedSpec{7, "stream", 3});
    Rng c(SeedSpec{7, "stream", 4});
    Rng d(SeedSpec{7, "other", 3});
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t x = a.next_u64();
      CHECK(x == b.next_u64());
      same_c += x == c.next_u64();
      same_d += x == d.next_u64();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
  }

  TEST_CASE("uniform and normal moments") {
    Rng rng = rng_for("moments");
    double su = 0, sn = 0, sn2 = 0, sc2 = 0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
      const double u = rng.uniform();
      CHECK_UNARY(u >= 0.0);
      CHECK_UNARY(u < 1.0);
      su += u;
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
      sc2 += std::norm(rng.complex_normal());
    }
    CHECK(std::abs(su / m - 0.5) < 5e-3);
    CHECK(std::abs(sn / m) < 1e-2);
    CHECK(std::abs(sn2 / m - 1.0) < 1e-2);
    CHECK(std::abs(sc2 / m - 1.0) < 1e-2);
  }

  TEST_CASE("below stays in range") {
    Rng rng = rng_for("below");
    for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
  }
}

TEST_SUITE("ensembles") {
  TEST_CASE("names round-trip") {
    for (const char* k : kKinds) CHECK(Ensemble::parse(k).name() == k);
    CHECK(Ensemble::parse("member_alpha(2)").name() == "member_alpha(2,0)");
    CHECK_THROWS_AS(Ensemble::parse("wishart"), std::invalid_argument);
    CHECK_THROWS_AS(Ensemble::parse("member_alpha(x)"), std::invalid_argument);
  }

  TEST_CASE("bad parameters throw") {
    const SeedSpec s{1, "bad", 0};
    CHECK_THROWS_AS(generate(Ensemble::parse("ginibre"), 0, s), std::invalid_argument);
    CHECK_THROWS_AS(generate(Ensemble::parse("member_alpha(0)"), 2, s), std::invalid_argument);
    CHECK_THROWS_AS(generate(Ensemble::parse("accretive(0)"), 2, s), std::invalid_argument);
    CHECK_THROWS_AS(generate(Ensemble::parse("oblique_pair"), 1, s), std::invalid_argument);
  }

  TEST_CASE("determinism: equal SeedSpec gives identical samples") {
    for (const char* k : kKinds) {
      const Ensemble e = Ensemble::parse(k);
      const SeedSpec s{99, std::string("determinism/") + k, 5};
      const Sample a = generate(e, 4, s);
      const Sample b = generate(e, 4, s);
      if (e.kind == EnsembleKind::oblique_pair) {
        CHECK(std::get<SubspacePair>(a).range.basis() == std::get<SubspacePair>(b).range.basis());
        CHECK(std::get<SubspacePair>(a).null.basis() == std::get<SubspacePair>(b).null.basis());
      } else if (e.kind == EnsembleKind::unit_vector) {
        CHECK(std::get<Vector>(a) == std::get<Vector>(b));
      } else {
        CHECK(std::get<ComplexMatrix>(a) == std::get<ComplexMatrix>(b));
      }
    }
  }

  TEST_CASE("examples") {
    const SeedSpec s{3, "examples", 0};
    CHECK(std::abs(norm(std::get<Vector>(generate(Ensemble::parse("unit_vector"), 4, s))) - 1.0) < 1e-14);
    CHECK(defect(std::get<ComplexMatrix>(generate(Ensemble::parse("member_alpha(2)"), 3, s)), 2.0) <= 1.0);
    CHECK(std::get<ComplexMatrix>(generate(Ensemble::parse("nilpotent_shift"), 3, s)) ==
          ComplexMatrix{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    const EigenRange r =
        hermitian_eig_range(std::get<ComplexMatrix>(generate(Ensemble::parse("positive_contraction"), 5, s)));
    CHECK(r.min >= 1e-6 - 1e-12);
    CHECK(r.max <= 1.0 - 1e-6 + 1e-12);
  }

  TEST_CASE("class certification, 10^4 draws per kind and dimension") {
    for (const char* k : kKinds) {
      const Ensemble e = Ensemble::parse(k);
      for (std::size_t n : {2, 4, 8}) {
        int failures = 0;
        std::string first;
        for (std::uint64_t i = 0; i < 10000; ++i) {
          const std::string why = certify(e, n, generate(e, n, SeedSpec{11, std::string("certify/") + k, i}));
          if (!why.empty() && failures++ == 0) first = why;
        }
        INFO(k, " n=", n, ": ", first);
        CHECK(failures == 0);
      }
    }
  }

  TEST_CASE("unitary ensemble is close to Haar at n = 2") {
    // Independent reference: U = e^{i phi} [[a, -conj(b)], [b, conj(a)]] with
    // (a, b) uniform on the 3-sphere, so |tr U| = 2 |Re a|.
    std::mt19937_64 gen(123456789);
    std::normal_distribution<double> gauss;
    constexpr int m = 10000;
    double reference = 0.0;
    for (int i = 0; i < m; ++i) {
      double g[4];
      double r2 = 0.0;
      for (double& x : g) {
        x = gauss(gen);
        r2 += x * x;
      }
      reference += 2.0 * std::abs(g[0]) / std::sqrt(r2);
    }
    reference /= m;
    double ours = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      Rng rng = rng_for("haar-trace", i);
      ours += std::abs(trace(random_unitary(2, rng)));
    }
    ours /= m;
    CHECK(std::abs(reference - 8.0 / (3.0 * std::numbers::pi)) < 0.02);
    CHECK(std::abs(ours - reference) < 0.05);
  }

  TEST_CASE("nilpotent shift") {
    const ComplexMatrix s = nilpotent_shift(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(s(i, j) == Complex(i == j + 1 ? 1.0 : 0.0, 0.0));
    }
    CHECK(nilpotent_shift(1) == ComplexMatrix(1));
  }
}
