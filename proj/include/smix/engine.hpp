#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smix/decomp.hpp"
#include "smix/refsys.hpp"

namespace smix {

enum class Method { ClosedForm, Search };

const char* method_name(Method m) noexcept;

/// One entropy value. Values are always finite: every finite-dimensional
/// state has a finite extremal decomposition.
struct EntropyReport {
  double alpha = 0.0;
  ReferenceTag reference = ReferenceTag::FullStateSpace;
  double value = 0.0;
  Method method = Method::ClosedForm;
  int decomposition_size = 0;
  bool converged = true;
  std::uint64_t seed = 0;
  /// Best value found by the search pass, when one ran.
  std::optional<double> search_value;
  /// Closed-form candidate (Schatten or sector spectra), when one exists.
  std::optional<double> closed_form_value;
  /// "search" if the reported value came from the search, else "closed_form".
  std::string attained_by = "closed_form";
};

/// (1 - alpha)^-1 log2 Tr rho^alpha; alpha == 0 gives log2 rank. Rejects alpha == 1.
double quantum_renyi(const DensityMatrix& rho, Alpha a);

double von_neumann(const DensityMatrix& rho);

/// quantum_renyi, or von_neumann at alpha == 1.
double quantum_renyi_or_vn(const DensityMatrix& rho, Alpha a);

/// S_alpha^S(phi) for the given reference system. Throws Error(NotInvariant)
/// or Error(NotKMS) when the state is outside the reference set.
EntropyReport smix_renyi(const DensityMatrix& rho, Alpha a, const ReferenceSystem& ref,
                         const SearchBudget& budget);

/// A full instance: algebra, state, optional dynamics and the alpha grid.
struct Instance {
  AlgebraModel algebra;
  DensityMatrix state;
  std::optional<Dynamics> dynamics;
  double beta = 1.0;
  std::vector<double> alphas;
  std::vector<ReferenceTag> references;

  struct Expected {
    ReferenceTag reference;
    double alpha;
    double value;
  };
  /// Optional pinned values checked by verify_theorems (harness self-test).
  std::vector<Expected> expected;
};

enum class VerificationStatus { Pass, Fail, Skip };

const char* status_name(VerificationStatus s) noexcept;

struct VerificationResult {
  std::string theorem_id;
  std::optional<double> alpha;
  VerificationStatus status = VerificationStatus::Skip;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::string context;

  bool passed() const { return status == VerificationStatus::Pass; }
};

/// Entropy rows for every (reference, alpha) of the instance, sorted by
/// reference then alpha. Grid points are evaluated concurrently.
std::vector<EntropyReport> sweep_entropies(const Instance& inst, const SearchBudget& budget);

/// Theorem checks for the instance. Hypotheses that fail produce Skip rows.
std::vector<VerificationResult> verify_theorems(const Instance& inst, const SearchBudget& budget);

}  // namespace smix
