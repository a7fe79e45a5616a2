#include "buzano/random.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace buzano {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void require_positive_dim(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ensemble dimension must be positive");
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("bad number in ensemble name: '" + std::string(text) + "'");
  }
  return v;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Rng::Rng(const SeedSpec& seed) {
  std::uint64_t h = mix64(seed.master + kGolden);
  h = mix64(h ^ fnv1a64(seed.purpose));
  h = mix64(h ^ (seed.index * kGolden + 0x632BE59BD9B4E019ULL));
  key_ = h;
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::complex_normal() {
  const double a = normal();
  const double b = normal();
  return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
}

Vector gaussian_vector(std::size_t n, Rng& rng) {
  require_positive_dim(n);
  Vector v(n);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

Vector random_unit_vector(std::size_t n, Rng& rng) {
  Vector v = gaussian_vector(n, rng);
  while (norm(v) == 0.0) v = gaussian_vector(n, rng);
  return normalized(v);
}

ComplexMatrix random_ginibre(std::size_t n, Rng& rng) {
  require_positive_dim(n);
  ComplexMatrix g(n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& x : g.data()) x = s * rng.complex_normal();
  return g;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  return hermitian_part(random_ginibre(n, rng));
}

ComplexMatrix random_psd(std::size_t n, Rng& rng) {
  require_positive_dim(n);
  const std::size_t r = 1 + rng.below(n);
  ComplexMatrix g(n, r);
  const double s = 1.0 / std::sqrt(static_cast<double>(r));
  for (auto& x : g.data()) x = s * rng.complex_normal();
  return hermitian_part(g * g.adjoint());
}

ComplexMatrix random_positive_contraction(std::size_t n, Rng& rng) {
  constexpr double eps = 1e-6;
  const ComplexMatrix h = random_hermitian(n, rng);
  const double hn = op_norm(h);
  const ComplexMatrix id = ComplexMatrix::identity(n);
  if (hn == 0.0) return 0.5 * id;
  // Spectrum of h / ||h|| lies in [-1, 1]; map it affinely into [eps, 1 - eps].
  ComplexMatrix t = Complex(1.0 / hn, 0.0) * h + id;
  t *= Complex(0.5 * (1.0 - 2.0 * eps), 0.0);
  t += Complex(eps, 0.0) * id;
  return hermitian_part(t);
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_ginibre(n, rng);
  std::vector<Vector> q;
  q.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = g.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : q) {
        const Complex c = inner(v, b);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
      }
    }
    q.push_back(normalized(v));
  }
  return ComplexMatrix::from_columns(q);
}

ComplexMatrix random_normal(std::size_t n, Rng& rng) {
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<Complex> d(n);
  for (auto& x : d) x = rng.complex_normal();
  return u * ComplexMatrix::diagonal(d) * u.adjoint();
}

Subspace random_subspace(std::size_t n, std::size_t p, Rng& rng) {
  if (p == 0 || p > n) throw std::invalid_argument("random_subspace: need 1 <= p <= n");
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < p; ++j) cols.push_back(u.col(j));
  return Subspace::from_spanning(cols);
}

ComplexMatrix random_orth_projection(std::size_t n, Rng& rng) {
  require_positive_dim(n);
  const std::size_t p = n == 1 ? 1 : 1 + rng.below(n - 1);
  return orth_projection(random_subspace(n, p, rng));
}

ComplexMatrix random_partial_isometry(std::size_t n, Rng& rng) {
  require_positive_dim(n);
  const std::size_t r = 1 + rng.below(n);
  const ComplexMatrix u = random_unitary(n, rng);
  const ComplexMatrix w = random_unitary(n, rng);
  std::vector<Complex> d(n, 0.0);
  for (std::size_t k = 0; k < r; ++k) d[k] = 1.0;
  return u * ComplexMatrix::diagonal(d) * w.adjoint();
}

ComplexMatrix random_density_matrix(std::size_t n, Rng& rng) {
  const ComplexMatrix p = random_psd(n, rng);
  return Complex(1.0 / trace(p).real(), 0.0) * p;
}

ComplexMatrix random_contraction(std::size_t n, Rng& rng) {
  ComplexMatrix g = random_ginibre(n, rng);
  const double gn = op_norm(g);
  const double r = std::pow(rng.uniform(), 0.25);
  if (gn == 0.0) return g;
  return Complex(r / gn, 0.0) * g;
}

ComplexMatrix random_alpha_member(std::size_t n, Complex alpha, Rng& rng) {
  if (alpha == Complex(0.0, 0.0)) throw std::invalid_argument("member_alpha: alpha must be nonzero");
  ComplexMatrix t = ComplexMatrix::identity(n) + random_contraction(n, rng);
  return (1.0 / alpha) * t;
}

ComplexMatrix random_accretive(std::size_t n, double s, Rng& rng) {
  if (!(s > 0.0)) throw std::invalid_argument("accretive: s must be positive");
  ComplexMatrix t = Complex(s, 0.0) * ComplexMatrix::identity(n);
  t += random_psd(n, rng);
  t += Complex(0.0, 1.0) * random_hermitian(n, rng);
  return t;
}

ComplexMatrix nilpotent_shift(std::size_t n) {
  require_positive_dim(n);
  ComplexMatrix t(n);
  for (std::size_t i = 0; i + 1 < n; ++i) t(i + 1, i) = 1.0;
  return t;
}

SubspacePair random_oblique_pair(std::size_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("oblique_pair: need n >= 2");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::size_t p = 1 + rng.below(n - 1);
    Subspace m = random_subspace(n, p, rng);
    Subspace nsp = random_subspace(n, n - p, rng);
    std::vector<Vector> cols = m.basis();
    cols.insert(cols.end(), nsp.basis().begin(), nsp.basis().end());
    if (min_modulus(ComplexMatrix::from_columns(cols)) >= 0.05) {
      return {std::move(m), std::move(nsp)};
    }
  }
  throw std::runtime_error("oblique_pair: rejection sampling did not terminate");
}

std::string Ensemble::name() const {
  switch (kind) {
    case EnsembleKind::ginibre: return "ginibre";
    case EnsembleKind::hermitian: return "hermitian";
    case EnsembleKind::psd: return "psd";
    case EnsembleKind::positive_contraction: return "positive_contraction";
    case EnsembleKind::unitary: return "unitary";
    case EnsembleKind::normal: return "normal";
    case EnsembleKind::orth_proj: return "orth_proj";
    case EnsembleKind::oblique_pair: return "oblique_pair";
    case EnsembleKind::partial_isometry: return "partial_isometry";
    case EnsembleKind::nilpotent_shift: return "nilpotent_shift";
    case EnsembleKind::density_matrix: return "density_matrix";
    case EnsembleKind::unit_vector: return "unit_vector";
    case EnsembleKind::member_alpha:
      return "member_alpha(" + format_number(param.real()) + "," + format_number(param.imag()) + ")";
    case EnsembleKind::accretive: return "accretive(" + format_number(param.real()) + ")";
  }
  return "unknown";
}

Ensemble Ensemble::parse(std::string_view text) {
  static constexpr std::pair<std::string_view, EnsembleKind> plain[] = {
      {"ginibre", EnsembleKind::ginibre},
      {"hermitian", EnsembleKind::hermitian},
      {"psd", EnsembleKind::psd},
      {"positive_contraction", EnsembleKind::positive_contraction},
      {"unitary", EnsembleKind::unitary},
      {"normal", EnsembleKind::normal},
      {"orth_proj", EnsembleKind::orth_proj},
      {"oblique_pair", EnsembleKind::oblique_pair},
      {"partial_isometry", EnsembleKind::partial_isometry},
      {"nilpotent_shift", EnsembleKind::nilpotent_shift},
      {"density_matrix", EnsembleKind::density_matrix},
      {"unit_vector", EnsembleKind::unit_vector},
  };
  for (const auto& [name, kind] : plain) {
    if (text == name) return {kind, 0.0};
  }
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw std::invalid_argument("unknown ensemble '" + std::string(text) + "'");
  }
  const std::string_view head = text.substr(0, open);
  const std::string_view args = text.substr(open + 1, text.size() - open - 2);
  if (head == "member_alpha") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) return {EnsembleKind::member_alpha, parse_double(args)};
    return {EnsembleKind::member_alpha,
            Complex(parse_double(args.substr(0, comma)), parse_double(args.substr(comma + 1)))};
  }
  if (head == "accretive") return {EnsembleKind::accretive, parse_double(args)};
  throw std::invalid_argument("unknown ensemble '" + std::string(text) + "'");
}

Sample generate(const Ensemble& ensemble, std::size_t n, const SeedSpec& seed) {
  require_positive_dim(n);
  Rng rng(seed);
  switch (ensemble.kind) {
    case EnsembleKind::ginibre: return random_ginibre(n, rng);
    case EnsembleKind::hermitian: return random_hermitian(n, rng);
    case EnsembleKind::psd: return random_psd(n, rng);
    case EnsembleKind::positive_contraction: return random_positive_contraction(n, rng);
    case EnsembleKind::unitary: return random_unitary(n, rng);
    case EnsembleKind::normal: return random_normal(n, rng);
    case EnsembleKind::orth_proj: return random_orth_projection(n, rng);
    case EnsembleKind::oblique_pair: return random_oblique_pair(n, rng);
    case EnsembleKind::partial_isometry: return random_partial_isometry(n, rng);
    case EnsembleKind::nilpotent_shift: return nilpotent_shift(n);
    case EnsembleKind::density_matrix: return random_density_matrix(n, rng);
    case EnsembleKind::unit_vector: return random_unit_vector(n, rng);
    case EnsembleKind::member_alpha: return random_alpha_member(n, ensemble.param, rng);
    case EnsembleKind::accretive: return random_accretive(n, ensemble.param.real(), rng);
  }
  throw std::invalid_argument("unknown ensemble kind");
}

}  // namespace buzano
