#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smix/decomp.hpp"
#include "smix/states.hpp"

namespace smix {

enum class DynamicsKind { HamiltonianFlow, FiniteGroup };

/// Inner dynamics on an AlgebraModel: either theta_t = Ad exp(itH) for a
/// block-diagonal Hermitian H, or a finite group of block-diagonal unitaries.
class Dynamics {
 public:
  static Dynamics hamiltonian(const CMatrix& h, const AlgebraModel& alg);
  /// Checks unitarity, block structure, presence of the identity and closure
  /// under products (all to 1e-9).
  static Dynamics finite_group(std::vector<CMatrix> unitaries, const AlgebraModel& alg);
  /// The one-element group {I}.
  static Dynamics trivial(const AlgebraModel& alg);

  DynamicsKind kind() const noexcept { return kind_; }
  const AlgebraModel& algebra() const noexcept { return algebra_; }
  /// Only valid for HamiltonianFlow.
  const CMatrix& hamiltonian() const;
  const std::vector<CMatrix>& unitaries() const noexcept { return unitaries_; }
  /// True if every algebra block restriction of H has simple spectrum.
  bool nondegenerate_generator() const;

 private:
  Dynamics(DynamicsKind kind, AlgebraModel alg) : kind_(kind), algebra_(std::move(alg)) {}

  DynamicsKind kind_;
  AlgebraModel algebra_;
  CMatrix h_;
  std::vector<CMatrix> unitaries_;
};

enum class ReferenceTag { FullStateSpace, InvariantStates, KMSStates };

const char* reference_name(ReferenceTag tag) noexcept;
std::optional<ReferenceTag> parse_reference(const std::string& name);

struct ReferenceSystem {
  ReferenceTag tag = ReferenceTag::FullStateSpace;
  std::optional<Dynamics> dynamics;
  double beta = 0.0;

  static ReferenceSystem full() { return {}; }
  static ReferenceSystem invariant(Dynamics dyn);
  /// Requires a HamiltonianFlow and beta > 0.
  static ReferenceSystem kms(Dynamics dyn, double beta);
};

/// One block of the invariant-state structure. Columns of `basis` are indexed
/// (i, a) -> i * irrep_dim + a; invariant states restricted here have the form
/// sigma (x) I / irrep_dim with sigma a multiplicity x multiplicity state.
struct InvariantSector {
  int algebra_block = 0;
  int multiplicity = 1;
  int irrep_dim = 1;
  CMatrix basis;
  /// Energy of the eigenspace for HamiltonianFlow; 0 for groups.
  double energy = 0.0;
};

/// Extreme points of I(theta) are the states (v v^dagger) (x) I / irrep_dim
/// inside a single sector. `representatives` lists the ones built from basis
/// vectors of each multiplicity space.
struct InvariantStructure {
  std::vector<InvariantSector> sectors;
  std::vector<DensityMatrix> representatives;
};

constexpr double kInvarianceTolerance = 1e-9;

bool is_invariant(const DensityMatrix& rho, const Dynamics& dyn);

InvariantStructure extremal_invariant_states(const Dynamics& dyn, const AlgebraModel& alg);

/// Restriction of an invariant state to one sector.
struct SectorPart {
  std::size_t sector = 0;
  double mass = 0.0;
  /// Normalized multiplicity-space state sigma / mass.
  std::optional<DensityMatrix> reduced;
  /// Reduced state has a repeated positive eigenvalue, so the spectral split
  /// inside this sector is not the only orthogonal one.
  bool degenerate = false;
};

struct ErgodicDecomposition {
  Decomposition decomposition;
  InvariantStructure structure;
  std::vector<SectorPart> parts;

  bool has_degenerate_sector() const;
};

/// Decomposition into extremal invariant states, using the spectral split of
/// each sector restriction. Throws Error(NotInvariant).
ErgodicDecomposition ergodic_decompose(const DensityMatrix& rho, const Dynamics& dyn);

/// Embed the sector state (v v^dagger) (x) I / d for multiplicity vector v.
DensityMatrix sector_state(const InvariantSector& sector, const CVector& v,
                           const AlgebraModel& alg);

/// exp(-beta H) / Tr exp(-beta H).
DensityMatrix gibbs_state(const Dynamics& dyn, double beta, const AlgebraModel& alg);

/// One Gibbs state per central block.
std::vector<DensityMatrix> extremal_kms_states(const Dynamics& dyn, double beta,
                                               const AlgebraModel& alg);

constexpr double kKmsTolerance = 1e-8;

/// Every block with mass > 1e-12 restricts (after normalization) to the block
/// Gibbs state within kKmsTolerance.
bool is_kms(const DensityMatrix& rho, const Dynamics& dyn, double beta);

/// Unique decomposition into extremal KMS states; weights are the block
/// masses. Throws Error(NotKMS).
Decomposition kms_decompose(const DensityMatrix& rho, const Dynamics& dyn, double beta);

/// Finite-dimensional GNS data for (alg, rho) with the implementing unitaries
/// of the dynamics. Matrix units e_ij of block b are indexed block by block,
/// row-major inside each block.
struct GnsData {
  AlgebraModel algebra;
  int rep_dim = 0;
  /// pi(e_mu) for every matrix unit.
  std::vector<CMatrix> rep_matrices;
  CVector cyclic_vector;
  /// Projection onto the joint fixed space of the implementing unitaries.
  CMatrix invariant_projection;
  /// Algebra coefficients -> GNS vectors, and a right inverse on the quotient.
  CMatrix to_gns;
  CMatrix from_gns;

  /// pi(a) for an arbitrary algebra element.
  CMatrix represent(const CMatrix& a) const;
};

/// Number of matrix units and their (row, col) positions in the big matrix.
std::vector<std::pair<int, int>> matrix_units(const AlgebraModel& alg);

/// Throws Error(NotInvariant) if rho is not invariant under dyn, since the
/// implementing unitaries are defined only for invariant states.
GnsData gns_construct(const AlgebraModel& alg, const DensityMatrix& rho, const Dynamics& dyn);

/// Max over matrix units of |<x, pi(e) x> - phi(e)|.
double gns_reproduction_error(const GnsData& g, const DensityMatrix& rho);

/// E pi(a) E and E pi(b) E commute (1e-9) for all matrix-unit pairs.
bool is_g_commutative(const GnsData& g, const AlgebraModel& alg);

}  // namespace smix
