#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "buzano/alpha_sets.hpp"
#include "buzano/decompositions.hpp"
#include "buzano/functionals.hpp"
#include "buzano/inequalities.hpp"
#include "buzano/random.hpp"
#include "support.hpp"

using namespace buzano;
using namespace buzano::testing;

namespace {

const Link& link_named(const Verdict& v, const std::string& label) {
  for (const Link& l : v.chain) {
    if (l.label == label) return l;
  }
  FAIL("no link named " << label);
  throw std::logic_error("unreachable");
}

Instance xy_instance(std::size_t n, Rng& rng) {
  Instance inst;
  inst.vectors["x"] = gaussian_vector(n, rng);
  inst.vectors["y"] = gaussian_vector(n, rng);
  return inst;
}

}  // namespace

TEST_SUITE("registry") {
  TEST_CASE("names round-trip and are unique") {
    std::set<std::string> names;
    for (InequalityId id : all_inequalities()) {
      const std::string name(to_string(id));
      CHECK(parse_inequality(name) == id);
      names.insert(name);
    }
    CHECK(names.size() == all_inequalities().size());
    CHECK(all_inequalities().size() == 26);
    CHECK_THROWS_AS(parse_inequality("BUZANO"), std::invalid_argument);
    CHECK(is_identity(InequalityId::duncan_taylor));
    CHECK_FALSE(is_identity(InequalityId::buzano));
  }

  TEST_CASE("every id draws instances that validate and hold") {
    for (InequalityId id : all_inequalities()) {
      for (std::size_t n : {2, 3, 5}) {
        for (std::uint64_t i = 0; i < 12; ++i) {
          const GeneratedInstance g = make_instance(id, n, 5, i);
          CHECK_NOTHROW(validate(id, g.instance));
          const Verdict v = evaluate(id, g.instance);
          INFO(to_string(id), " n=", n, " i=", i);
          CHECK(v.holds);
          CHECK(v.min_normalized_slack() >= -1e-9);
        }
      }
    }
  }
}

TEST_SUITE("evaluate examples") {
  TEST_CASE("Buzano equality configuration") {
    Instance inst;
    inst.vectors["x"] = Vector{1, 0};
    inst.vectors["y"] = Vector{0, 1};
    inst.vectors["z"] = Vector{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const Verdict v = evaluate(InequalityId::buzano, inst);
    CHECK(v.lhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(v.rhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(v.slack) < 1e-15);
    CHECK(v.holds);
  }

  TEST_CASE("generalized Buzano with T = I, alpha = 1") {
    Rng rng = rng_for("gen-buzano-identity");
    Instance inst = xy_instance(4, rng);
    inst.matrices["T"] = ComplexMatrix::identity(4);
    inst.scalars["alpha"] = 1.0;
    const Verdict v = evaluate(InequalityId::gen_buzano, inst);
    const Link& first = v.chain.front();
    CHECK(first.lhs == 0.0);
    CHECK(first.rhs == doctest::Approx(norm(inst.vector("x")) * norm(inst.vector("y"))));
    CHECK(v.holds);
  }

  TEST_CASE("Duncan-Taylor at 60 degrees") {
    const double phi = std::numbers::pi / 3.0;
    const Vector u{std::cos(phi), std::sin(phi)};
    Instance inst;
    inst.matrices["P1"] = ComplexMatrix::diagonal({1, 0});
    inst.matrices["P2"] = rank_one(u, u);
    const Verdict v = evaluate(InequalityId::duncan_taylor, inst);
    // Eigenvalues of the 2x2 sum: 1 +- cos(phi).
    CHECK(std::abs(v.lhs - 1.5) < 1e-12);
    CHECK(std::abs(v.rhs - 1.5) < 1e-12);
    CHECK(v.holds);
  }

  TEST_CASE("norm minus omega on a normal matrix") {
    Instance inst;
    inst.matrices["T"] = 0.5 * ComplexMatrix::identity(3);
    inst.scalars["alpha"] = 2.0;
    const Verdict v = evaluate(InequalityId::norm_minus_omega, inst);
    CHECK(std::abs(v.lhs) < 1e-12);
    CHECK(v.rhs == doctest::Approx(0.25));
    CHECK(v.holds);
  }

  TEST_CASE("Gram constant is attained by the top right singular vector") {
    for (std::uint64_t k = 0; k < 10; ++k) {
      Rng rng = rng_for("gram-sharp", k);
      const ComplexMatrix t = random_ginibre(2 + k % 5, rng);
      const Vector w = svd(t).w.col(0);
      Instance inst;
      inst.matrices["T"] = t;
      inst.vectors["x"] = w;
      inst.vectors["y"] = w;
      const Verdict v = evaluate(InequalityId::gram_buzano, inst);
      REQUIRE(v.ratio().has_value());
      CHECK(*v.ratio() >= 0.999);
      CHECK(v.holds);
    }
  }

  TEST_CASE("omega_square_printed is the weaker rearrangement") {
    for (std::uint64_t k = 0; k < 20; ++k) {
      Rng rng = rng_for("omega-square-forms", k);
      Instance inst;
      inst.matrices["S"] = random_ginibre(2 + k % 4, rng);
      const Verdict source = evaluate(InequalityId::omega_square, inst);
      const Verdict printed = evaluate(InequalityId::omega_square_printed, inst);
      CHECK(source.rhs == printed.rhs);
      CHECK(link_named(source, "power").holds);
      CHECK(printed.holds);
    }
  }
}

TEST_SUITE("internal consistency") {
  TEST_CASE("alpha_buzano at alpha = 2 carries the Buzano bound bit for bit") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      Rng rng = rng_for("alpha-two", k);
      const std::size_t n = 2 + k % 5;
      Instance inst = xy_instance(n, rng);
      inst.vectors["z"] = Vector::basis(n, k % n);
      const Verdict plain = evaluate(InequalityId::buzano, inst);
      inst.scalars["alpha"] = 2.0;
      const Verdict alpha = evaluate(InequalityId::alpha_buzano, inst);
      const Link& cont = link_named(alpha, "continuity");
      CHECK(cont.rhs == plain.rhs);
      CHECK(cont.lhs == plain.lhs);
      CHECK(alpha.holds);
    }
  }

  TEST_CASE("projection chain with P = z (x) z reproduces refined Buzano") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      Rng rng = rng_for("proj-rank-one", k);
      const std::size_t n = 2 + k % 5;
      Instance base = xy_instance(n, rng);
      const Vector z = random_unit_vector(n, rng);
      Instance refined = base;
      refined.vectors["z"] = z;
      Instance proj = base;
      proj.matrices["P"] = rank_one(z, z);
      const Verdict a = evaluate(InequalityId::buzano_refined, refined);
      const Verdict b = evaluate(InequalityId::proj_chain, proj);
      CHECK(a.holds == b.holds);
      CHECK(std::abs(a.lhs - b.lhs) < 1e-12);
      CHECK(std::abs(a.rhs - b.rhs) < 1e-12);
      REQUIRE(a.chain.size() == b.chain.size());
      for (std::size_t i = 0; i < a.chain.size(); ++i) {
        CHECK(a.chain[i].label == b.chain[i].label);
        CHECK(std::abs(a.chain[i].slack - b.chain[i].slack) < 1e-12);
      }
    }
  }

  TEST_CASE("sum_proj constant matches Duncan-Taylor") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      Rng rng = rng_for("sum-proj-constant", k);
      const std::size_t n = 2 + k % 6;
      Instance inst = xy_instance(n, rng);
      inst.matrices["P1"] = random_orth_projection(n, rng);
      inst.matrices["P2"] = random_orth_projection(n, rng);
      const Verdict sum = evaluate(InequalityId::sum_proj, inst);
      const Verdict dt = evaluate(InequalityId::duncan_taylor, inst);
      CHECK(std::abs(sum.notes.at("constant") - 0.5 * dt.rhs) < 1e-10);
      CHECK(std::abs(sum.notes.at("constant") - 0.5 * dt.lhs) < 1e-10);
    }
  }

  TEST_CASE("omega_eq_norm: normal matrices trigger the consequent") {
    Rng rng = rng_for("omega-eq-norm-normal");
    Instance inst;
    inst.matrices["T"] = random_normal(4, rng);
    const Verdict v = evaluate(InequalityId::omega_eq_norm, inst);
    CHECK(v.notes.at("antecedent") == 1.0);
    CHECK(std::abs(v.notes.at("omega_v") - 1.0) < 1e-9);
    CHECK(v.holds);
  }

  TEST_CASE("omega_eq_norm: the converse fails") {
    // The 3x3 shift is its own partial isometry, so it separates nothing:
    // w(V) = w(T) = 1/sqrt(2).
    Instance shift;
    shift.matrices["T"] = nilpotent_shift(3);
    const Verdict s = evaluate(InequalityId::omega_eq_norm, shift);
    CHECK(s.notes.at("antecedent") == 0.0);
    CHECK(std::abs(s.notes.at("omega_v") - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(numerical_radius(polar(nilpotent_shift(3)).v) - numerical_radius(nilpotent_shift(3))) < 1e-12);
    // Swap times diag(1, 1/2): V unitary so w(V) = ||V|| = 1, yet w(T) = 3/4 < 1.
    Instance sep;
    sep.matrices["T"] = ComplexMatrix{{0, 0.5}, {1, 0}};
    const Verdict v = evaluate(InequalityId::omega_eq_norm, sep);
    CHECK(v.notes.at("antecedent") == 0.0);
    CHECK(std::abs(v.notes.at("omega_v") - 1.0) < 1e-12);
    CHECK(std::abs(op_norm(polar(sep.matrix("T")).v) - 1.0) < 1e-12);
    CHECK(std::abs(numerical_radius(sep.matrix("T")) - 0.75) < 1e-12);
    CHECK(v.holds);
  }

  TEST_CASE("oblique_buzano: identities hold as links") {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Instance inst = make_instance(InequalityId::oblique_buzano, 2 + i % 5, 9, i).instance;
      const Verdict v = evaluate(InequalityId::oblique_buzano, inst);
      CHECK(link_named(v, "norm_q_csc").holds);
      CHECK(link_named(v, "norm_2q_minus_i_cot").holds);
      CHECK(v.holds);
    }
  }
}

TEST_SUITE("verdict") {
  TEST_CASE("ratio is empty when rhs vanishes") {
    Instance inst;
    inst.vectors["x"] = Vector{0, 0};
    inst.vectors["y"] = Vector{1, 0};
    const Verdict v = evaluate(InequalityId::cauchy_schwarz, inst);
    CHECK_FALSE(v.ratio().has_value());
    CHECK(v.holds);
  }

  TEST_CASE("normalized slack") {
    Link l;
    l.slack = 2.0;
    l.scale = 3.0;
    CHECK(l.normalized_slack() == doctest::Approx(0.5));
    l.kind = LinkKind::identity;
    CHECK(l.normalized_slack() == doctest::Approx(-0.5));
  }
}

TEST_SUITE("instance errors") {
  TEST_CASE("schema errors") {
    Instance missing;
    missing.vectors["x"] = Vector{1, 0};
    CHECK_THROWS_AS(evaluate(InequalityId::cauchy_schwarz, missing), SchemaError);

    Instance mismatched;
    mismatched.vectors["x"] = Vector{1, 0};
    mismatched.vectors["y"] = Vector{1, 0, 0};
    CHECK_THROWS_AS(evaluate(InequalityId::cauchy_schwarz, mismatched), SchemaError);

    Instance nonfinite;
    nonfinite.vectors["x"] = Vector{std::nan(""), 0};
    nonfinite.vectors["y"] = Vector{1, 0};
    CHECK_THROWS_AS(evaluate(InequalityId::cauchy_schwarz, nonfinite), SchemaError);

    Instance rect;
    rect.matrices["S"] = ComplexMatrix(2, 3);
    CHECK_THROWS_AS(evaluate(InequalityId::omega_square, rect), SchemaError);

    CHECK(schema(InequalityId::product_bound).matrices == std::vector<std::string>{"R", "S", "T"});
  }

  TEST_CASE("hypothesis violations") {
    Rng rng = rng_for("invalid-instances");
    Instance gen = xy_instance(2, rng);
    gen.matrices["T"] = ComplexMatrix{{0, 1}, {0, 0}};
    gen.scalars["alpha"] = 1.0;
    CHECK_THROWS_AS(evaluate(InequalityId::gen_buzano, gen), InvalidInstance);
    gen.scalars["alpha"] = 0.0;
    CHECK_THROWS_AS(evaluate(InequalityId::gen_buzano, gen), InvalidInstance);

    Instance proj = xy_instance(2, rng);
    proj.matrices["P"] = ComplexMatrix{{1, 1}, {0, 0}};
    CHECK_THROWS_AS(evaluate(InequalityId::proj_half, proj), InvalidInstance);

    Instance z = xy_instance(2, rng);
    z.vectors["z"] = Vector{1, 1};
    CHECK_THROWS_AS(evaluate(InequalityId::buzano_refined, z), InvalidInstance);

    Instance inv = xy_instance(2, rng);
    inv.matrices["T"] = ComplexMatrix{{0, 1}, {0, 0}};
    CHECK_THROWS_AS(evaluate(InequalityId::inv_buzano, inv), InvalidInstance);

    Instance pos = xy_instance(2, rng);
    pos.matrices["T"] = ComplexMatrix::diagonal({1, -1});
    CHECK_THROWS_AS(evaluate(InequalityId::positive_buzano, pos), InvalidInstance);
    pos.matrices["T"] = ComplexMatrix::diagonal({2, 0.5});
    CHECK_THROWS_AS(evaluate(InequalityId::contraction_member, pos), InvalidInstance);

    Instance oblique = xy_instance(2, rng);
    oblique.matrices["PM"] = ComplexMatrix::diagonal({1, 0});
    oblique.matrices["PN"] = ComplexMatrix::diagonal({1, 0});
    CHECK_THROWS_AS(evaluate(InequalityId::oblique_buzano, oblique), InvalidInstance);

    // InvalidInstance is a PreconditionError.
    CHECK_THROWS_AS(evaluate(InequalityId::gen_buzano, gen), PreconditionError);
  }
}

TEST_SUITE("generation") {
  TEST_CASE("make_instance is deterministic and regenerates from its fingerprint") {
    for (InequalityId id : all_inequalities()) {
      const GeneratedInstance a = make_instance(id, 3, 7, 4);
      const GeneratedInstance b = make_instance(id, 3, 7, 4);
      CHECK(a.instance == b.instance);
      CHECK(a.instance.fingerprint.id == to_string(id));
      CHECK(a.instance.fingerprint.dim == 3);
      CHECK(a.instance.fingerprint.index == 4);
      CHECK(regenerate(a.instance.fingerprint) == a.instance);
    }
  }

  TEST_CASE("indices and seeds give different instances") {
    const Instance a = make_instance(InequalityId::buzano, 3, 7, 1).instance;
    const Instance b = make_instance(InequalityId::buzano, 3, 7, 2).instance;
    const Instance c = make_instance(InequalityId::buzano, 3, 8, 1).instance;
    CHECK(a.vectors != b.vectors);
    CHECK(a.vectors != c.vectors);
  }

  TEST_CASE("alpha members need no regeneration") {
    long regenerations = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      regenerations += make_instance(InequalityId::gen_buzano, 4, 42, i).regenerations;
    }
    CHECK(regenerations == 0);
  }

  TEST_CASE("special cases can be switched off") {
    bool differs = false;
    for (std::uint64_t i = 0; i < 8; ++i) {
      const auto with = draw_instance(InequalityId::buzano, 3, 1, i, 0, true);
      const auto without = draw_instance(InequalityId::buzano, 3, 1, i, 0, false);
      REQUIRE(with.has_value());
      REQUIRE(without.has_value());
      differs = differs || with->vectors != without->vectors;
    }
    CHECK(differs);
  }
}

TEST_SUITE("tightness") {
  TEST_CASE("Cauchy-Schwarz and Buzano reach equality; results are deterministic") {
    for (InequalityId id : {InequalityId::cauchy_schwarz, InequalityId::buzano}) {
      const TightnessResult a = tightness_search(id, 2, 8, 3);
      const TightnessResult b = tightness_search(id, 2, 8, 3);
      CHECK(a.best_ratio >= 0.999);
      CHECK(a.best_ratio <= 1.0 + 1e-9);
      CHECK(a.best_ratio == b.best_ratio);
      CHECK(a.witness == b.witness);
      CHECK(a.restart == b.restart);
      const Verdict v = evaluate(id, a.witness);
      REQUIRE(v.ratio().has_value());
      CHECK(std::abs(*v.ratio() - a.best_ratio) < 1e-12);
      CHECK(v.holds);
    }
  }

  TEST_CASE("identities and dim 1 are rejected") {
    CHECK_THROWS_AS(tightness_search(InequalityId::duncan_taylor, 2, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(tightness_search(InequalityId::buzano, 1, 4, 1), std::invalid_argument);
  }
}
