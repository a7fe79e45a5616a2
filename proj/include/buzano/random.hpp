#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "buzano/decompositions.hpp"
#include "buzano/linalg.hpp"

namespace buzano {

/// Addresses one random stream: (master seed, purpose label, index).
struct SeedSpec {
  std::uint64_t master = 0;
  std::string purpose;
  std::uint64_t index = 0;
};

/// Counter-based SplitMix64 stream. Output k of a stream is
/// mix64(key + k * 0x9E3779B97F4A7C15), where the key is a SplitMix64 hash of
/// (master, FNV-1a(purpose), index). Normals use Box-Muller.
class Rng {
 public:
  static constexpr std::string_view algorithm =
      "splitmix64-counter(master,fnv1a64(purpose),index)+box-muller";

  explicit Rng(std::uint64_t key) : key_(key) {}
  explicit Rng(const SeedSpec& seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Typed ensembles. Each draws from the given stream only.
Vector gaussian_vector(std::size_t n, Rng& rng);
Vector random_unit_vector(std::size_t n, Rng& rng);
/// Entries i.i.d. complex Gaussian with variance 1/n (so ||G|| is O(1)).
ComplexMatrix random_ginibre(std::size_t n, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
/// G G* with G of random rank r in [1, n].
ComplexMatrix random_psd(std::size_t n, Rng& rng);
/// Spectrum inside [1e-6, 1 - 1e-6].
ComplexMatrix random_positive_contraction(std::size_t n, Rng& rng);
/// Haar unitary: Gram-Schmidt on a Ginibre matrix (R has positive diagonal).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
/// U diag(lambda) U* with Gaussian eigenvalues.
ComplexMatrix random_normal(std::size_t n, Rng& rng);
Subspace random_subspace(std::size_t n, std::size_t p, Rng& rng);
/// Orthogonal projection of random rank in [1, max(1, n-1)].
ComplexMatrix random_orth_projection(std::size_t n, Rng& rng);
ComplexMatrix random_partial_isometry(std::size_t n, Rng& rng);
ComplexMatrix random_density_matrix(std::size_t n, Rng& rng);
/// Contraction of norm r^(1/4) with r uniform, direction from a Ginibre draw.
ComplexMatrix random_contraction(std::size_t n, Rng& rng);
/// (I + C) / alpha with C a random contraction; always satisfies ||alpha T - I|| <= 1.
ComplexMatrix random_alpha_member(std::size_t n, Complex alpha, Rng& rng);
/// s I + R + i H with R positive semidefinite and H Hermitian.
ComplexMatrix random_accretive(std::size_t n, double s, Rng& rng);
/// Lower shift: e_k -> e_{k+1}, e_n -> 0.
ComplexMatrix nilpotent_shift(std::size_t n);

struct SubspacePair {
  Subspace range;
  Subspace null;
};

/// Complementary pair of dims p and n - p, redrawn until the concatenated
/// basis has minimum modulus >= 0.05.
SubspacePair random_oblique_pair(std::size_t n, Rng& rng);

enum class EnsembleKind {
  ginibre,
  hermitian,
  psd,
  positive_contraction,
  unitary,
  normal,
  orth_proj,
  oblique_pair,
  partial_isometry,
  nilpotent_shift,
  density_matrix,
  unit_vector,
  member_alpha,
  accretive,
};

struct Ensemble {
  EnsembleKind kind = EnsembleKind::ginibre;
  /// alpha for member_alpha, s (real part) for accretive.
  Complex param = 0.0;

  /// Stable name, e.g. "ginibre", "member_alpha(1,1)", "accretive(0.5)".
  std::string name() const;
  /// Inverse of name(); member_alpha accepts "(re)" or "(re,im)".
  static Ensemble parse(std::string_view text);
};

using Sample = std::variant<ComplexMatrix, Vector, SubspacePair>;

/// Draws one sample. Throws std::invalid_argument for bad parameters
/// (n == 0, member_alpha with alpha = 0, accretive with s <= 0, oblique_pair with n < 2).
Sample generate(const Ensemble& ensemble, std::size_t n, const SeedSpec& seed);

}  // namespace buzano
