#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlv/density.hpp"
#include "mlv/errors.hpp"
#include "mlv/forms.hpp"
#include "mlv/variety.hpp"

namespace mlv {

// ---------------------------------------------------------------------------
// External approximation

struct ApproxResult {
  MultilinearMap phi;                  // components psi_j o Phi
  std::vector<FieldVec> functionals;   // the psi_j on the codomain of Phi
  std::uint64_t error_count = 0;       // |{phi = 0} \ {Phi = 0}|
  std::size_t requested_steps = 0;
  // Survivor counts |{x : Phi(x) != 0, psi_1..psi_j vanish at Phi(x)}| for
  // j = 0, 1, ...; the last entry equals error_count.
  std::vector<std::uint64_t> survivors;
  bool containment_checked = false;
};

/// Greedy derandomized selection of s functionals on the codomain of Phi.
///
/// Each step takes the (lexicographically first) nonzero functional leaving
/// the fewest survivors. A fixed nonzero v is killed by all but a 1/p fraction
/// of functionals, so every step divides the survivor count by at least p and
/// error_count <= p^{-s} |G| follows. Selection stops early once no survivor
/// is left, so phi may have fewer than s components. Containment and the
/// error count are re-checked by enumeration before returning.
ApproxResult external_approx(const MultilinearMap& phi, std::size_t s);

// Same contract; each step samples functionals from a seeded stream until one
// cuts the survivors by a factor p, falling back to the greedy choice.
ApproxResult external_approx_sampled(const MultilinearMap& phi, std::size_t s, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Explicit constants

/// Every implicit constant of the inductive construction, written out.
///
/// For an input of arity k+1 and density c, with K = K(k):
///   c'  = 2^{-(2k+1)} p^{-2kK} c^{kK+1}      fiber threshold for the columns
///   r   = floor(K (log_p c^{-1} + 2))        codimension allowed for each W
///   c'' = c'^{2^k} p^{-k(k+1) r}             fiber density after the U cuts
///   eps = c''^{k+1} / 2                      external approximation error
///   budget = ceil(log_p eps^{-1}) + (k+1)^2 r
/// and K(1) = 1. Collecting the coefficients of log_p c^{-1} (slope) and the
/// rest (intercept, with log_p 2 bounded by 1) gives
///   K(k+1) = max(slope, intercept)
/// so that budget <= K(k+1) (log_p c^{-1} + 1) for every p.
struct BoundTracker {
  static std::int64_t K(std::size_t arity);
  // Coefficients of the affine bound on the arity-(k+1) budget.
  static std::int64_t slope(std::size_t arity);
  static std::int64_t intercept(std::size_t arity);

  // All monomials are relative to the density c of the arity-(k+1) input.
  static PowerMonomial c_prime(std::size_t k);
  static std::int64_t r_bound(std::size_t k, const ExactDensity& c);
  static PowerMonomial c_double_prime(std::size_t k, std::int64_t r);
  static PowerMonomial epsilon(std::size_t k, std::int64_t r);
};

// Codimension the construction is allowed for a variety of this arity and
// density. Arity 1 gives exactly ceil(log_p c^{-1}).
std::int64_t codim_budget(std::size_t arity, const ExactDensity& c);

// ---------------------------------------------------------------------------
// Subvariety construction

struct LedgerRecord {
  std::size_t depth = 0;                 // 0 for the top-level call
  std::size_t arity = 0;
  std::optional<std::size_t> direction;  // parent's direction that produced this input
  ExactDensity c;
  std::int64_t r = 0;                    // arity 1: codim; else the largest W codim
  std::int64_t r_bound = 0;
  std::optional<PowerMonomial> c_prime;  // monomials are relative to c
  std::optional<PowerMonomial> c_double_prime;
  std::optional<PowerMonomial> epsilon;
  std::optional<ExactDensity> measured_fiber_density;  // smallest fiber of V~ over the U^(i)
  std::int64_t approx_steps_formula = 0;
  std::int64_t approx_steps_used = 0;
  bool fiber_threshold_clamped = false;  // c' |G_i| < 1 in some direction
  bool epsilon_clamped = false;          // approximation steps capped at sum n_i + 1
  std::int64_t codim_from_approx = 0;
  std::int64_t codim_from_columns = 0;
  std::int64_t codim_contribution = 0;   // codimension of this level's output
  std::int64_t budget = 0;
};

struct VerifyReport {
  bool containment = false;
  bool nonempty = false;
  bool budget = false;
  bool all() const { return containment && nonempty && budget; }
};

struct SubvarietyCertificate {
  Variety input;
  ExactDensity input_density;
  Variety output;
  std::int64_t output_codim = 0;
  std::int64_t budget = 0;
  std::vector<LedgerRecord> ledger;  // child levels first, this level last
  VerifyReport verified;
};

using SubvarietyFinder = std::function<SubvarietyCertificate(const Variety&)>;

struct DenseColumnsResult {
  std::size_t direction = 0;
  Variety w;                 // on the factors other than `direction`, in order
  FieldVec slice_point;      // the chosen x_direction
  std::uint64_t slice_size = 0;
  std::uint64_t bad_size = 0;
  ExactDensity c;
  PowerMonomial c_prime;     // relative to c
  bool threshold_clamped = false;
  ExactDensity min_fiber_density;  // min over x in W of |V_x| / |G_direction|
  std::uint64_t flat_witnesses = 0;
  SubvarietyCertificate inner;
};

/// Finds W on the factors other than `direction`, all of whose fibers of V
/// in that direction are dense.
///
/// Takes the first slice U = V_{x_i} (lexicographic in x_i) with
/// |U| >= (c/2)|G'| and |B| <= 2c^{-1}c'|G'|, where B are the points of U
/// whose fiber has at most c'|G_i| points; runs `finder` on U; then fills
/// every point of W with a convolution witness inside W \ B and checks that
/// the fibers over its corners intersect inside the fiber over the point,
/// with at least c'^{2^k}|G_i| points.
DenseColumnsResult dense_columns(const Variety& v, std::size_t direction, const SubvarietyFinder& finder);
DenseColumnsResult dense_columns(const Variety& v, const SubvarietyFinder& finder);

struct FindOptions {
  // Forces the external approximation to use this many functionals at the
  // top level (that is, eps = p^{-s}) instead of the value derived from c''.
  std::optional<std::int64_t> forced_approx_steps;
};

struct ClaimDiagnostic {
  std::uint64_t point = 0;       // first point of A~ \ V~
  std::uint64_t excess = 0;      // |A~ \ V~|
  std::uint64_t group_size = 0;
  ExactDensity measured_fiber_density;  // c'' observed over the U^(i)
  ExactDensity claim_bound;             // measured c''^{k+1}
  bool bound_observed = false;          // excess / |G| >= claim_bound
};

// A~ differs from V~: the approximation left points outside V~.
class ClaimViolation : public VerificationFailure {
 public:
  ClaimViolation(const std::string& what, ClaimDiagnostic diagnostic)
      : VerificationFailure(what), diagnostic_(std::move(diagnostic)) {}
  const ClaimDiagnostic& diagnostic() const { return diagnostic_; }

 private:
  ClaimDiagnostic diagnostic_;
};

/// Extracts a subvariety of V of codimension at most codim_budget(k, c).
///
/// Arity 1 returns V itself. Arity k+1 runs dense_columns in every direction
/// (recursing on the slices), intersects V with all the resulting forms to
/// get V~, approximates V's full-support forms externally to error below
/// c''^{k+1}/2 and intersects again to get A~. The construction checks
/// A~ == V~ by enumeration and returns A~.
SubvarietyCertificate find_subvariety(const Variety& v, const FindOptions& options = {});

// Independent re-check: output inside v, output nonempty, and the claimed
// codimension equal to the output's form count and within codim_budget.
VerifyReport verify_certificate(const Variety& v, const SubvarietyCertificate& cert);

}  // namespace mlv
