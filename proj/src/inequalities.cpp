#include "buzano/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "buzano/alpha_sets.hpp"
#include "buzano/decompositions.hpp"
#include "buzano/functionals.hpp"
#include "buzano/random.hpp"

namespace buzano {

namespace {

using Id = InequalityId;

constexpr std::array<std::pair<Id, std::string_view>, 26> kNames = {{
    {Id::cauchy_schwarz, "cauchy_schwarz"},
    {Id::buzano, "buzano"},
    {Id::alpha_buzano, "alpha_buzano"},
    {Id::gen_buzano, "gen_buzano"},
    {Id::inv_buzano, "inv_buzano"},
    {Id::positive_buzano, "positive_buzano"},
    {Id::gram_buzano, "gram_buzano"},
    {Id::polar_buzano, "polar_buzano"},
    {Id::contraction_member, "contraction_member"},
    {Id::cs_refined_contraction, "cs_refined_contraction"},
    {Id::proj_half, "proj_half"},
    {Id::proj_chain, "proj_chain"},
    {Id::proj_shift, "proj_shift"},
    {Id::buzano_refined, "buzano_refined"},
    {Id::sum_proj, "sum_proj"},
    {Id::duncan_taylor, "duncan_taylor"},
    {Id::oblique_buzano, "oblique_buzano"},
    {Id::omega_polar, "omega_polar"},
    {Id::omega_polar_halfpower, "omega_polar_halfpower"},
    {Id::omega_eq_norm, "omega_eq_norm"},
    {Id::norm_minus_omega, "norm_minus_omega"},
    {Id::product_bound, "product_bound"},
    {Id::product_bound_proj, "product_bound_proj"},
    {Id::product_bound_sym, "product_bound_sym"},
    {Id::omega_square, "omega_square"},
    {Id::omega_square_printed, "omega_square_printed"},
}};

constexpr std::array<Id, kNames.size()> kAll = [] {
  std::array<Id, kNames.size()> ids{};
  for (std::size_t i = 0; i < kNames.size(); ++i) ids[i] = kNames[i].first;
  return ids;
}();

constexpr int kMaxAttempts = 100;

Link make_link(std::string label, double lhs, double rhs, LinkKind kind, const Tolerances& tol) {
  Link l;
  l.label = std::move(label);
  l.lhs = lhs;
  l.rhs = rhs;
  l.slack = rhs - lhs;
  l.scale = std::max(std::abs(lhs), std::abs(rhs));
  l.kind = kind;
  const double band = tol.check_tol * (1.0 + l.scale);
  l.holds = kind == LinkKind::inequality ? l.slack >= -band : std::abs(l.slack) <= band;
  if (!std::isfinite(l.slack)) l.holds = false;
  return l;
}

class Builder {
 public:
  Builder(Id id, const Tolerances& tol) : tol_(tol) { v_.id = id; }

  void link(std::string label, double lhs, double rhs) {
    v_.chain.push_back(make_link(std::move(label), lhs, rhs, LinkKind::inequality, tol_));
  }
  void identity(std::string label, double lhs, double rhs) {
    v_.chain.push_back(make_link(std::move(label), lhs, rhs, LinkKind::identity, tol_));
  }
  void note(const std::string& key, double value) { v_.notes[key] = value; }

  Verdict finish(double lhs, double rhs) {
    v_.lhs = lhs;
    v_.rhs = rhs;
    v_.slack = rhs - lhs;
    const Link head = make_link("headline", lhs, rhs,
                                is_identity(v_.id) ? LinkKind::identity : LinkKind::inequality, tol_);
    v_.holds = head.holds && std::all_of(v_.chain.begin(), v_.chain.end(),
                                         [](const Link& l) { return l.holds; });
    return std::move(v_);
  }

  // |p| <= |p - w q| + |w| |q| <= r (|q| + nxny), with |p - w q| <= r nxny.
  // `p` plays <Tx, y>, `q` plays <x, y>, `w` the centre 1/alpha, `r` the radius.
  Verdict buzano_chain(Complex p, Complex q, Complex w, double r, double nxny) {
    const double diff = std::abs(p - w * q);
    const double mid = diff + std::abs(w) * std::abs(q);
    link("difference", diff, r * nxny);
    link("triangle", std::abs(p), mid);
    link("bound", mid, r * (std::abs(q) + nxny));
    return finish(std::abs(p), r * (std::abs(q) + nxny));
  }

 private:
  const Tolerances& tol_;
  Verdict v_;
};

std::size_t instance_dim(Id id, const Instance& inst) {
  const Schema s = schema(id);
  std::size_t n = 0;
  auto agree = [&](std::size_t m, const std::string& slot) {
    if (n == 0) n = m;
    if (m != n || m == 0) {
      throw SchemaError(std::string(to_string(id)) + ": slot '" + slot + "' has size " +
                        std::to_string(m) + ", expected " + std::to_string(n));
    }
  };
  for (const auto& name : s.matrices) {
    const ComplexMatrix& m = inst.matrix(name);
    if (!m.is_square()) throw SchemaError(std::string(to_string(id)) + ": matrix '" + name + "' is not square");
    if (!all_finite(m)) throw SchemaError(std::string(to_string(id)) + ": matrix '" + name + "' is not finite");
    agree(m.dim(), name);
  }
  for (const auto& name : s.vectors) {
    const Vector& v = inst.vector(name);
    for (const Complex& c : v) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw SchemaError(std::string(to_string(id)) + ": vector '" + name + "' is not finite");
      }
    }
    agree(v.size(), name);
  }
  for (const auto& name : s.scalars) {
    const Complex c = inst.scalar(name);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw SchemaError(std::string(to_string(id)) + ": scalar '" + name + "' is not finite");
    }
  }
  return n;
}

[[noreturn]] void reject(Id id, const std::string& why) {
  throw InvalidInstance(std::string(to_string(id)) + ": " + why);
}

void require_member(Id id, const ComplexMatrix& t, Complex alpha, const Tolerances& tol) {
  if (alpha == Complex(0.0, 0.0)) reject(id, "alpha must be nonzero");
  if (defect(t, alpha) > 1.0 + tol.check_tol) reject(id, "T is not in A_alpha");
}

void require_positive(Id id, const ComplexMatrix& t, const Tolerances& tol, double upper = -1.0) {
  const double band = tol.check_tol * std::max(1.0, op_norm(t));
  if (!is_hermitian(t, band)) reject(id, "T must be Hermitian");
  const EigenRange r = hermitian_eig_range(hermitian_part(t));
  if (r.min < -band) reject(id, "T must be positive semidefinite");
  if (upper > 0.0 && r.max > upper + band) reject(id, "T must satisfy T <= I");
}

void require_projection(Id id, const ComplexMatrix& p, const std::string& name, const Tolerances& tol) {
  const double band = 10.0 * tol.check_tol * static_cast<double>(std::max<std::size_t>(1, p.dim()));
  if (!is_hermitian(p, band) || frobenius_norm(p * p - p) > band) {
    reject(id, "'" + name + "' must be an orthogonal projection");
  }
}

void require_unit(Id id, const Vector& z, const std::string& name, const Tolerances& tol) {
  if (std::abs(norm(z) - 1.0) > tol.check_tol) reject(id, "'" + name + "' must be a unit vector");
}

bool nonzero_projection(const ComplexMatrix& p) { return trace(p).real() > 0.5; }

struct ObliqueData {
  ComplexMatrix q;
  double theta0 = 0.0;
};

ObliqueData oblique_from_projections(Id id, const ComplexMatrix& pm, const ComplexMatrix& pn,
                                     const Tolerances& tol) {
  if (!nonzero_projection(pm) || !nonzero_projection(pn)) reject(id, "range and null space must be nonzero");
  try {
    const Subspace m = Subspace::from_projection(pm, tol);
    const Subspace n = Subspace::from_projection(pn, tol);
    ObliqueData out;
    out.q = oblique_projection(m, n, tol).q;
    out.theta0 = minimal_angle(m, n);
    return out;
  } catch (const DimensionError& e) {
    reject(id, e.what());
  } catch (const PreconditionError& e) {
    reject(id, e.what());
  }
}

Verdict evaluate_checked(Id id, const Instance& inst, const Tolerances& tol) {
  Builder b(id, tol);
  switch (id) {
    case Id::cauchy_schwarz: {
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      return b.finish(std::abs(inner(x, y)), norm(x) * norm(y));
    }
    case Id::buzano: {
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const Vector& z = inst.vector("z");
      const double zz = inner(z, z).real();
      const double lhs = std::abs(inner(x, z) * inner(z, y));
      return b.finish(lhs, 0.5 * (std::abs(inner(x, y)) + norm(x) * norm(y)) * zz);
    }
    case Id::alpha_buzano: {
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const Vector& z = inst.vector("z");
      const Complex alpha = inst.scalar("alpha");
      const Complex xzzy = inner(x, z) * inner(z, y);
      const Complex xy = inner(x, y);
      const double nxny = norm(x) * norm(y);
      const double m = std::max(1.0, std::abs(alpha - 1.0));
      b.note("max_factor", m);
      if (alpha != Complex(0.0, 0.0)) {
        const double inv = 1.0 / std::abs(alpha);
        b.link("rearranged", std::abs(xzzy - xy / alpha), inv * m * nxny);
        b.link("continuity", std::abs(xzzy), inv * (std::abs(xy) + m * nxny));
      }
      return b.finish(std::abs(alpha * xzzy - xy), m * nxny);
    }
    case Id::gen_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const Complex alpha = inst.scalar("alpha");
      b.note("defect", defect(t, alpha));
      return b.buzano_chain(inner(t * x, y), inner(x, y), 1.0 / alpha, 1.0 / std::abs(alpha),
                            norm(x) * norm(y));
    }
    case Id::inv_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const InverseAlpha ia = unitary_alpha_for_inverse(t, tol);
      const ComplexMatrix t_inv = inverse(t);
      const Vector ux = ia.u.adjoint() * x;
      b.note("alpha", ia.alpha.real());
      b.note("defect", ia.defect);
      b.link("defect_below_one", ia.defect, 1.0);
      b.link("alpha_bound", std::abs(ia.alpha), 2.0 / op_norm(t_inv));
      return b.buzano_chain(inner(t_inv * x, y), inner(ux, y), 1.0 / ia.alpha,
                            1.0 / std::abs(ia.alpha), norm(x) * norm(y));
    }
    case Id::positive_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const double nt = op_norm(t);
      const double alpha = 2.0 / nt;
      b.note("alpha", alpha);
      b.link("member", defect(t, alpha), 1.0);
      return b.buzano_chain(inner(t * x, y), inner(x, y), 1.0 / alpha, 1.0 / alpha, norm(x) * norm(y));
    }
    case Id::gram_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const double nt = op_norm(t);
      const double c = 0.5 * nt * nt;
      b.note("constant", c);
      return b.buzano_chain(inner(t * x, t * y), inner(x, y), c, c, norm(x) * norm(y));
    }
    case Id::polar_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const PolarParts pp = polar(t, tol);
      const Vector vy = pp.v.adjoint() * y;
      const Complex p = inner(t * x, y);
      b.identity("polar_factor", std::abs(p), std::abs(inner(pp.abs_t * x, vy)));
      const double c = 0.5 * op_norm(t);
      return b.buzano_chain(p, inner(x, vy), c, c, norm(x) * norm(vy));
    }
    case Id::contraction_member:
    case Id::proj_chain: {
      const ComplexMatrix& t = inst.matrix(id == Id::proj_chain ? "P" : "T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      if (id == Id::contraction_member) b.link("member", defect(t, 2.0), 1.0);
      return b.buzano_chain(inner(t * x, y), inner(x, y), 0.5, 0.5, norm(x) * norm(y));
    }
    case Id::cs_refined_contraction: {
      const ComplexMatrix& t = inst.matrix("T");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const double nxny = norm(x) * norm(y);
      const double txx = std::max(0.0, inner(t * x, x).real());
      const double tyy = std::max(0.0, inner(t * y, y).real());
      const double s = std::sqrt(txx) * std::sqrt(tyy);
      const Complex xy = inner(x, y);
      const Complex txy = inner(t * x, y);
      const double cx = inner(x, x).real() - txx;
      const double cy = inner(y, y).real() - tyy;
      b.link("elementary", cx * cy, (nxny - s) * (nxny - s));
      b.link("positive_cs", std::norm(xy - txy), cx * cy);
      b.link("square_root", std::abs(xy - txy), nxny - s);
      b.link("reverse_triangle", std::abs(xy) - std::abs(txy), std::abs(xy - txy));
      return b.finish(std::abs(xy) + s - std::abs(txy), nxny);
    }
    case Id::proj_half: {
      const ComplexMatrix& p = inst.matrix("P");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      return b.finish(std::abs(inner(p * x, y) - 0.5 * inner(x, y)), 0.5 * norm(x) * norm(y));
    }
    case Id::proj_shift: {
      const ComplexMatrix& p = inst.matrix("P");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const Complex xy = inner(x, y);
      return b.finish(std::abs(inner(p * x, y) - xy), 0.5 * (std::abs(xy) + norm(x) * norm(y)));
    }
    case Id::buzano_refined: {
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const Vector& z = inst.vector("z");
      return b.buzano_chain(inner(x, z) * inner(z, y), inner(x, y), 0.5, 0.5, norm(x) * norm(y));
    }
    case Id::sum_proj: {
      const ComplexMatrix& p1 = inst.matrix("P1");
      const ComplexMatrix& p2 = inst.matrix("P2");
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const double k = 0.5 * (1.0 + op_norm(p1 * p2));
      b.note("constant", k);
      return b.buzano_chain(inner((p1 + p2) * x, y), inner(x, y), k, k, norm(x) * norm(y));
    }
    case Id::duncan_taylor: {
      const ComplexMatrix& p1 = inst.matrix("P1");
      const ComplexMatrix& p2 = inst.matrix("P2");
      return b.finish(op_norm(p1 + p2), 1.0 + op_norm(p1 * p2));
    }
    case Id::oblique_buzano: {
      const ObliqueData od = oblique_from_projections(id, inst.matrix("PM"), inst.matrix("PN"), tol);
      const Vector& x = inst.vector("x");
      const Vector& y = inst.vector("y");
      const std::size_t n = od.q.dim();
      const double cot_half = 1.0 / std::tan(0.5 * od.theta0);
      const double k = 0.5 * cot_half;
      b.note("theta0", od.theta0);
      b.identity("norm_q_csc", op_norm(od.q), 1.0 / std::sin(od.theta0));
      b.identity("norm_2q_minus_i_cot", op_norm(2.0 * od.q - ComplexMatrix::identity(n)), cot_half);
      b.link("cot_at_least_one", 1.0, cot_half);
      const Complex p = inner(od.q * x, y);
      const Complex xy = inner(x, y);
      const double nxny = norm(x) * norm(y);
      const double diff = std::abs(p - 0.5 * xy);
      b.link("difference", diff, k * nxny);
      b.link("triangle", std::abs(p), diff + 0.5 * std::abs(xy));
      b.link("radius", diff + 0.5 * std::abs(xy), k * nxny + 0.5 * std::abs(xy));
      b.link("bound", k * nxny + 0.5 * std::abs(xy), k * (std::abs(xy) + nxny));
      return b.finish(std::abs(p), k * (std::abs(xy) + nxny));
    }
    case Id::omega_polar: {
      const ComplexMatrix& t = inst.matrix("T");
      const double w = numerical_radius(t, tol);
      const double nt = op_norm(t);
      const double wv = numerical_radius(polar(t, tol).v, tol);
      b.note("omega_v", wv);
      b.link("below_norm", 0.5 * nt * (1.0 + wv), nt);
      b.link("excess", w - 0.5 * nt, 0.5 * nt * wv);
      return b.finish(w, 0.5 * nt * (1.0 + wv));
    }
    case Id::omega_polar_halfpower: {
      const ComplexMatrix& t = inst.matrix("T");
      const PolarParts pp = polar(t, tol);
      const double w = numerical_radius(t, tol);
      const double nt = op_norm(t);
      const double wv = numerical_radius(pp.v, tol);
      const double wh = numerical_radius(pp.v * psd_sqrt(pp.abs_t, tol), tol);
      const double first = 0.5 * (nt + std::sqrt(nt) * wh);
      const double second = 0.5 * (nt + 0.5 * nt * (1.0 + wv));
      b.note("omega_v", wv);
      b.note("omega_v_half", wh);
      b.link("half_power", wh, 0.5 * std::sqrt(nt) * (wv + 1.0));
      b.link("polar_step", first, second);
      b.link("below_norm", second, nt);
      return b.finish(w, first);
    }
    case Id::omega_eq_norm: {
      const ComplexMatrix& t = inst.matrix("T");
      const PolarParts pp = polar(t, tol);
      const double w = numerical_radius(t, tol);
      const double nt = op_norm(t);
      const double wv = numerical_radius(pp.v, tol);
      const double gap = nt - w;
      const bool antecedent = gap <= 1e-6 * std::max(1.0, nt);
      b.note("omega_v", wv);
      b.note("gap", gap);
      b.note("antecedent", antecedent ? 1.0 : 0.0);
      if (antecedent) {
        b.link("omega_v_near_one", 1.0 - wv, 4.0 * std::max(gap, 0.0) / nt);
        b.identity("norm_v_one", op_norm(pp.v), 1.0);
      }
      return b.finish(0.25 * nt * (1.0 - wv), gap);
    }
    case Id::norm_minus_omega: {
      const ComplexMatrix& t = inst.matrix("T");
      const Complex alpha = inst.scalar("alpha");
      const double nt = op_norm(t);
      const double gap = nt - numerical_radius(t, tol);
      const double inv = 1.0 / std::abs(alpha);
      b.link("nonnegative", 0.0, gap);
      b.link("half_norm", gap, 0.5 * nt);
      b.link("norm_bound", 0.5 * nt, inv);
      return b.finish(gap, 0.5 * inv);
    }
    case Id::product_bound: {
      const ComplexMatrix& r = inst.matrix("R");
      const ComplexMatrix& s = inst.matrix("S");
      const ComplexMatrix& t = inst.matrix("T");
      const Complex alpha = inst.scalar("alpha");
      const double rhs = (op_norm(r) * op_norm(s) + numerical_radius(s * r, tol)) / std::abs(alpha);
      return b.finish(numerical_radius(s * t * r, tol), rhs);
    }
    case Id::product_bound_proj: {
      const ComplexMatrix& r = inst.matrix("R");
      const ComplexMatrix& s = inst.matrix("S");
      const ComplexMatrix sum = inst.matrix("P1") + inst.matrix("P2");
      const double k = 0.5 * (1.0 + op_norm(inst.matrix("P1") * inst.matrix("P2")));
      b.note("constant", k);
      b.link("member", defect(sum, 1.0 / k), 1.0);
      const double rhs = k * (op_norm(s) * op_norm(r) + numerical_radius(r * s, tol));
      return b.finish(numerical_radius(r * sum * s, tol), rhs);
    }
    case Id::product_bound_sym: {
      const ComplexMatrix& s = inst.matrix("S");
      const ComplexMatrix& t = inst.matrix("T");
      const Complex alpha = inst.scalar("alpha");
      const double ns = op_norm(s);
      const double rhs = (ns * ns + numerical_radius(s * s, tol)) / std::abs(alpha);
      return b.finish(numerical_radius(s * t * s, tol), rhs);
    }
    case Id::omega_square:
    case Id::omega_square_printed: {
      const ComplexMatrix& s = inst.matrix("S");
      const double ns = op_norm(s);
      const double w2 = numerical_radius(s * s, tol);
      const double rhs = 0.5 * (ns * ns + w2);
      if (id == Id::omega_square_printed) return b.finish(w2, rhs);
      const double w = numerical_radius(s, tol);
      b.link("power", w2, w * w);
      return b.finish(w * w, rhs);
    }
  }
  throw SchemaError("evaluate: unknown inequality id");
}

// ---- generators ----

Complex random_alpha(Rng& rng) {
  const double modulus = std::exp(rng.uniform(-1.5, 1.5));
  const double arg = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(modulus, arg);
}

// Ginibre, made rank deficient for every fourth index.
ComplexMatrix general_matrix(std::size_t n, Rng& rng, std::uint64_t index) {
  ComplexMatrix g = random_ginibre(n, rng);
  if (index % 4 == 3 && n >= 2) g = g * random_orth_projection(n, rng);
  return g;
}

void add_xy(Instance& inst, std::size_t n, Rng& rng) {
  inst.vectors["x"] = gaussian_vector(n, rng);
  inst.vectors["y"] = gaussian_vector(n, rng);
}

}  // namespace

std::string_view to_string(InequalityId id) {
  for (const auto& [k, name] : kNames) {
    if (k == id) return name;
  }
  return "unknown";
}

InequalityId parse_inequality(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown inequality id '" + std::string(name) + "'");
}

std::span<const InequalityId> all_inequalities() { return kAll; }

bool is_identity(InequalityId id) { return id == Id::duncan_taylor; }

const ComplexMatrix& Instance::matrix(const std::string& name) const {
  const auto it = matrices.find(name);
  if (it == matrices.end()) throw SchemaError("instance has no matrix slot '" + name + "'");
  return it->second;
}

const Vector& Instance::vector(const std::string& name) const {
  const auto it = vectors.find(name);
  if (it == vectors.end()) throw SchemaError("instance has no vector slot '" + name + "'");
  return it->second;
}

Complex Instance::scalar(const std::string& name) const {
  const auto it = scalars.find(name);
  if (it == scalars.end()) throw SchemaError("instance has no scalar slot '" + name + "'");
  return it->second;
}

Schema schema(InequalityId id) {
  switch (id) {
    case Id::cauchy_schwarz: return {{}, {"x", "y"}, {}};
    case Id::buzano: return {{}, {"x", "y", "z"}, {}};
    case Id::alpha_buzano: return {{}, {"x", "y", "z"}, {"alpha"}};
    case Id::gen_buzano: return {{"T"}, {"x", "y"}, {"alpha"}};
    case Id::inv_buzano:
    case Id::positive_buzano:
    case Id::gram_buzano:
    case Id::polar_buzano:
    case Id::contraction_member:
    case Id::cs_refined_contraction: return {{"T"}, {"x", "y"}, {}};
    case Id::proj_half:
    case Id::proj_chain:
    case Id::proj_shift: return {{"P"}, {"x", "y"}, {}};
    case Id::buzano_refined: return {{}, {"x", "y", "z"}, {}};
    case Id::sum_proj: return {{"P1", "P2"}, {"x", "y"}, {}};
    case Id::duncan_taylor: return {{"P1", "P2"}, {}, {}};
    case Id::oblique_buzano: return {{"PM", "PN"}, {"x", "y"}, {}};
    case Id::omega_polar:
    case Id::omega_polar_halfpower:
    case Id::omega_eq_norm: return {{"T"}, {}, {}};
    case Id::norm_minus_omega: return {{"T"}, {}, {"alpha"}};
    case Id::product_bound: return {{"R", "S", "T"}, {}, {"alpha"}};
    case Id::product_bound_proj: return {{"P1", "P2", "R", "S"}, {}, {}};
    case Id::product_bound_sym: return {{"S", "T"}, {}, {"alpha"}};
    case Id::omega_square:
    case Id::omega_square_printed: return {{"S"}, {}, {}};
  }
  return {};
}

double Link::normalized_slack() const {
  const double s = kind == LinkKind::identity ? -std::abs(slack) : slack;
  return s / (1.0 + scale);
}

std::optional<double> Verdict::ratio() const {
  if (!(std::abs(rhs) > 1e-12)) return std::nullopt;
  return lhs / rhs;
}

double Verdict::min_normalized_slack() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  double best = (is_identity(id) ? -std::abs(slack) : slack) / (1.0 + scale);
  for (const Link& l : chain) best = std::min(best, l.normalized_slack());
  return best;
}

void validate(InequalityId id, const Instance& inst, const Tolerances& tol) {
  const std::size_t n = instance_dim(id, inst);
  switch (id) {
    case Id::alpha_buzano:
    case Id::buzano_refined:
      require_unit(id, inst.vector("z"), "z", tol);
      break;
    case Id::gen_buzano:
    case Id::norm_minus_omega:
    case Id::product_bound:
    case Id::product_bound_sym:
      require_member(id, inst.matrix("T"), inst.scalar("alpha"), tol);
      break;
    case Id::inv_buzano: {
      const ComplexMatrix& t = inst.matrix("T");
      if (min_modulus(t) <= tol.rank_tol * std::max(1.0, op_norm(t))) reject(id, "T must be invertible");
      break;
    }
    case Id::positive_buzano:
      require_positive(id, inst.matrix("T"), tol);
      if (op_norm(inst.matrix("T")) == 0.0) reject(id, "T must be nonzero");
      break;
    case Id::contraction_member:
    case Id::cs_refined_contraction:
      require_positive(id, inst.matrix("T"), tol, 1.0);
      break;
    case Id::proj_half:
    case Id::proj_chain:
    case Id::proj_shift:
      require_projection(id, inst.matrix("P"), "P", tol);
      break;
    case Id::sum_proj:
    case Id::duncan_taylor:
    case Id::product_bound_proj:
      require_projection(id, inst.matrix("P1"), "P1", tol);
      require_projection(id, inst.matrix("P2"), "P2", tol);
      if (!nonzero_projection(inst.matrix("P1")) && !nonzero_projection(inst.matrix("P2"))) {
        reject(id, "at least one projection must be nonzero");
      }
      break;
    case Id::oblique_buzano: {
      const ComplexMatrix& pm = inst.matrix("PM");
      const ComplexMatrix& pn = inst.matrix("PN");
      require_projection(id, pm, "PM", tol);
      require_projection(id, pn, "PN", tol);
      const double ranks = trace(pm).real() + trace(pn).real();
      if (std::abs(ranks - static_cast<double>(n)) > 0.5) reject(id, "ranks of PM and PN must add up to n");
      break;
    }
    case Id::omega_eq_norm:
      if (op_norm(inst.matrix("T")) == 0.0) reject(id, "T must be nonzero");
      break;
    default:
      break;
  }
}

Verdict evaluate(InequalityId id, const Instance& inst, const Tolerances& tol) {
  validate(id, inst, tol);
  return evaluate_checked(id, inst, tol);
}

std::optional<Instance> draw_instance(InequalityId id, std::size_t n, std::uint64_t seed,
                                      std::uint64_t index, int attempt, bool special_cases) {
  if (n == 0) throw std::invalid_argument("draw_instance: dimension must be positive");
  const std::string name(to_string(id));
  Rng rng(SeedSpec{seed, name + "/" + std::to_string(n) + "/" + std::to_string(attempt), index});
  Instance inst;
  inst.fingerprint = {seed, name, n, index, attempt};
  // Special-case selectors below test `index % k == r`; this moves every index
  // off them when special cases are disabled.
  if (!special_cases) index = 1;
  switch (id) {
    case Id::cauchy_schwarz:
      add_xy(inst, n, rng);
      // Parallel pairs attain equality.
      if (index % 5 == 0) inst.vectors["y"] = rng.complex_normal() * inst.vectors["x"];
      break;
    case Id::buzano: {
      add_xy(inst, n, rng);
      inst.vectors["z"] = gaussian_vector(n, rng);
      if (index % 5 == 0 && n >= 2) {
        // x orthogonal to y with z along the bisector attains equality.
        Vector& x = inst.vectors["x"];
        Vector& y = inst.vectors["y"];
        y -= (inner(y, x) / inner(x, x)) * x;
        inst.vectors["z"] = rng.uniform(0.5, 2.0) * (normalized(x) + normalized(y));
      }
      break;
    }
    case Id::alpha_buzano:
      add_xy(inst, n, rng);
      inst.vectors["z"] = random_unit_vector(n, rng);
      inst.scalars["alpha"] = index % 10 == 0 ? Complex(0.0, 0.0) : random_alpha(rng);
      break;
    case Id::gen_buzano:
    case Id::norm_minus_omega: {
      const Complex alpha = random_alpha(rng);
      inst.scalars["alpha"] = alpha;
      inst.matrices["T"] = random_alpha_member(n, alpha, rng);
      if (id == Id::gen_buzano) add_xy(inst, n, rng);
      break;
    }
    case Id::inv_buzano: {
      const ComplexMatrix t = random_ginibre(n, rng);
      // Keep cond(T) <= 1e4 so T^{-1} is accurate to the checking tolerance.
      if (min_modulus(t) < 1e-4 * op_norm(t)) return std::nullopt;
      inst.matrices["T"] = t;
      add_xy(inst, n, rng);
      break;
    }
    case Id::positive_buzano:
      inst.matrices["T"] = random_psd(n, rng);
      add_xy(inst, n, rng);
      break;
    case Id::gram_buzano: {
      const ComplexMatrix t = general_matrix(n, rng, index);
      inst.matrices["T"] = t;
      add_xy(inst, n, rng);
      if (index % 5 == 0) {
        // x = y = top right singular vector attains equality.
        const Vector w = svd(t).w.col(0);
        inst.vectors["x"] = w;
        inst.vectors["y"] = w;
      }
      break;
    }
    case Id::polar_buzano:
      inst.matrices["T"] = general_matrix(n, rng, index);
      add_xy(inst, n, rng);
      break;
    case Id::contraction_member:
    case Id::cs_refined_contraction:
      inst.matrices["T"] =
          index % 5 == 0 && n >= 2 ? random_orth_projection(n, rng) : random_positive_contraction(n, rng);
      add_xy(inst, n, rng);
      break;
    case Id::proj_half:
    case Id::proj_chain:
    case Id::proj_shift:
      inst.matrices["P"] = random_orth_projection(n, rng);
      add_xy(inst, n, rng);
      break;
    case Id::buzano_refined:
      add_xy(inst, n, rng);
      inst.vectors["z"] = random_unit_vector(n, rng);
      break;
    case Id::sum_proj:
    case Id::duncan_taylor:
      inst.matrices["P1"] = random_orth_projection(n, rng);
      inst.matrices["P2"] = random_orth_projection(n, rng);
      if (id == Id::sum_proj) add_xy(inst, n, rng);
      break;
    case Id::oblique_buzano: {
      if (n < 2) throw std::invalid_argument("oblique_buzano needs dimension >= 2");
      const SubspacePair pair = random_oblique_pair(n, rng);
      inst.matrices["PM"] = orth_projection(pair.range);
      inst.matrices["PN"] = orth_projection(pair.null);
      add_xy(inst, n, rng);
      break;
    }
    case Id::omega_polar:
    case Id::omega_polar_halfpower:
      inst.matrices["T"] = general_matrix(n, rng, index);
      break;
    case Id::omega_eq_norm:
      // Normal T has w(T) = ||T||, so even indices exercise the consequent. An
      // invertible T has a unitary polar factor, so odd ones are rank deficient.
      if (index % 2 == 0 || n < 2) {
        inst.matrices["T"] = random_normal(n, rng);
      } else {
        inst.matrices["T"] = random_ginibre(n, rng) * random_orth_projection(n, rng);
      }
      break;
    case Id::product_bound: {
      const Complex alpha = random_alpha(rng);
      inst.scalars["alpha"] = alpha;
      inst.matrices["T"] = random_alpha_member(n, alpha, rng);
      inst.matrices["R"] = random_ginibre(n, rng);
      inst.matrices["S"] = random_ginibre(n, rng);
      break;
    }
    case Id::product_bound_proj:
      inst.matrices["P1"] = random_orth_projection(n, rng);
      inst.matrices["P2"] = random_orth_projection(n, rng);
      inst.matrices["R"] = random_ginibre(n, rng);
      inst.matrices["S"] = random_ginibre(n, rng);
      break;
    case Id::product_bound_sym: {
      const Complex alpha = random_alpha(rng);
      inst.scalars["alpha"] = alpha;
      inst.matrices["T"] = random_alpha_member(n, alpha, rng);
      inst.matrices["S"] = random_ginibre(n, rng);
      break;
    }
    case Id::omega_square:
    case Id::omega_square_printed:
      // Normal S attains equality in the first form.
      inst.matrices["S"] = index % 4 == 0 ? random_normal(n, rng) : random_ginibre(n, rng);
      break;
  }
  return inst;
}

GeneratedInstance make_instance(InequalityId id, std::size_t dim, std::uint64_t seed,
                                std::uint64_t index, const Tolerances& tol, bool special_cases) {
  GeneratedInstance out;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::optional<Instance> inst = draw_instance(id, dim, seed, index, attempt, special_cases);
    if (inst) {
      try {
        validate(id, *inst, tol);
        out.instance = std::move(*inst);
        return out;
      } catch (const InvalidInstance&) {
      }
    }
    ++out.regenerations;
  }
  throw InvalidInstance(std::string(to_string(id)) + ": no valid instance after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

Instance regenerate(const Fingerprint& fp) {
  std::optional<Instance> inst = draw_instance(parse_inequality(fp.id), fp.dim, fp.seed, fp.index, fp.attempt);
  if (!inst) throw InvalidInstance("regenerate: fingerprint points to a rejected draw");
  return std::move(*inst);
}

namespace {

// Matrices the statement leaves unconstrained, so tightness search may move them.
std::vector<std::string> free_matrices(InequalityId id) {
  switch (id) {
    case Id::inv_buzano:
    case Id::gram_buzano:
    case Id::polar_buzano:
    case Id::omega_polar:
    case Id::omega_polar_halfpower:
    case Id::omega_eq_norm: return {"T"};
    case Id::product_bound:
    case Id::product_bound_proj: return {"R", "S"};
    case Id::product_bound_sym:
    case Id::omega_square:
    case Id::omega_square_printed: return {"S"};
    default: return {};
  }
}

double frobenius_normalize(ComplexMatrix& m) {
  const double f = frobenius_norm(m);
  if (f > 0.0) m *= Complex(1.0 / f, 0.0);
  return f;
}

}  // namespace

TightnessResult tightness_search(InequalityId id, std::size_t dim, int restarts, std::uint64_t seed,
                                 const Tolerances& tol) {
  if (is_identity(id)) throw std::invalid_argument(std::string(to_string(id)) + " is an identity");
  if (dim < 2) throw std::invalid_argument("tightness_search: dimension must be at least 2");
  if (restarts < 1) throw std::invalid_argument("tightness_search: need at least one restart");

  constexpr long kBudget = 4000;  // evaluations per restart
  const Schema sch = schema(id);
  const std::vector<std::string> mats = free_matrices(id);

  TightnessResult best;
  best.best_ratio = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Instance inst = make_instance(id, dim, seed, static_cast<std::uint64_t>(r), tol, false).instance;
    for (const auto& name : sch.vectors) {
      Vector& v = inst.vectors[name];
      if (norm(v) > 0.0) v = normalized(v);
    }
    for (const auto& name : mats) frobenius_normalize(inst.matrices[name]);

    long evals = 0;
    auto score = [&](const Instance& candidate) {
      ++evals;
      try {
        return evaluate(id, candidate, tol).ratio().value_or(0.0);
      } catch (const PreconditionError&) {
        return -std::numeric_limits<double>::infinity();
      }
    };

    double current = score(inst);
    // A valid instance cannot exceed ratio 1 + check_tol, so equality ends the climb.
    auto done = [&] { return evals >= kBudget || current >= 1.0 - tol.check_tol; };
    for (double step = 0.5; step >= 1e-6 && !done(); ) {
      bool improved = false;
      for (const auto& name : sch.vectors) {
        for (std::size_t i = 0; i < dim && !done(); ++i) {
          for (int part = 0; part < 2; ++part) {
            for (double sign : {1.0, -1.0}) {
              Instance trial = inst;
              Vector& v = trial.vectors[name];
              v[i] += part == 0 ? Complex(sign * step, 0.0) : Complex(0.0, sign * step);
              if (norm(v) == 0.0) continue;
              v = normalized(v);
              const double s = score(trial);
              if (s > current) {
                current = s;
                inst = std::move(trial);
                improved = true;
                break;
              }
            }
          }
        }
      }
      for (const auto& name : mats) {
        for (std::size_t k = 0; k < dim * dim && !done(); ++k) {
          for (int part = 0; part < 2; ++part) {
            for (double sign : {1.0, -1.0}) {
              Instance trial = inst;
              ComplexMatrix& m = trial.matrices[name];
              m.data()[k] += part == 0 ? Complex(sign * step, 0.0) : Complex(0.0, sign * step);
              if (frobenius_normalize(m) == 0.0) continue;
              const double s = score(trial);
              if (s > current) {
                current = s;
                inst = std::move(trial);
                improved = true;
                break;
              }
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best.evaluations += evals;
    if (current > best.best_ratio) {
      best.best_ratio = current;
      best.witness = inst;
      best.restart = r;
    }
  }
  return best;
}

}  // namespace buzano
