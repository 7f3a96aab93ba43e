#include "smix/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

#include "smix/error.hpp"

namespace smix {

namespace {

constexpr double kLimitEps = 1e-3;
constexpr double kLimitSlack = 1e-2;
constexpr double kOrderSlack = 1e-8;
constexpr double kEqualitySlack = 1e-6;
constexpr double kClosedFormSlack = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

EntropyReport full_state_space(const DensityMatrix& rho, Alpha a, const SearchBudget& budget) {
  EntropyReport r;
  const double closed = quantum_renyi_or_vn(rho, a);
  const int rank = schatten(rho).rank();
  r.closed_form_value = closed;
  if (a.value() > 1.0) {
    r.value = closed;
    r.method = Method::ClosedForm;
    r.decomposition_size = rank;
    if (budget.cross_check) {
      const SearchResult s = minimize_weight_functional(rho, a, budget);
      r.search_value = s.value;
      r.converged = s.converged;
    }
    return r;
  }
  // Only "<=" is guaranteed below alpha = 1, so report the better of both.
  const SearchResult s = minimize_weight_functional(rho, a, budget);
  r.method = Method::Search;
  r.search_value = s.value;
  r.converged = s.converged;
  if (s.value < closed) {
    r.value = s.value;
    r.decomposition_size = static_cast<int>(s.decomposition.size());
    r.attained_by = "search";
  } else {
    r.value = closed;
    r.decomposition_size = rank;
  }
  return r;
}

EntropyReport invariant_states(const DensityMatrix& rho, Alpha a, const Dynamics& dyn,
                               const SearchBudget& budget) {
  const ErgodicDecomposition erg = ergodic_decompose(rho, dyn);
  EntropyReport r;
  const double closed = smix_weight_value(erg.decomposition, a);
  r.closed_form_value = closed;
  r.value = closed;
  r.decomposition_size = static_cast<int>(erg.decomposition.size());
  r.method = Method::ClosedForm;
  if (!erg.has_degenerate_sector()) return r;

  // The weight functional is a sum over components, so each degenerate sector
  // can be searched on its own and the weights concatenated.
  r.method = Method::Search;
  std::vector<double> weights;
  for (const SectorPart& part : erg.parts) {
    if (part.degenerate) {
      const SearchResult s = minimize_weight_functional(*part.reduced, a, budget);
      r.converged = r.converged && s.converged;
      for (double w : s.decomposition.weights) weights.push_back(part.mass * w);
    } else {
      const SpectralData spec = schatten(*part.reduced);
      for (int t = 0; t < spec.rank(); ++t) weights.push_back(part.mass * spec.eigenvalues(t));
    }
  }
  const double searched = weight_functional(weights, a);
  r.search_value = searched;
  if (searched < closed) {
    r.value = searched;
    r.decomposition_size = static_cast<int>(weights.size());
    r.attained_by = "search";
  }
  return r;
}

struct Applicability {
  bool invariant = false;
  bool kms = false;
  std::string invariant_reason;
  std::string kms_reason;
};

Applicability applicability(const Instance& inst) {
  Applicability app;
  if (!inst.dynamics) {
    app.invariant_reason = app.kms_reason = "no dynamics given";
    return app;
  }
  app.invariant = is_invariant(inst.state, *inst.dynamics);
  if (!app.invariant) app.invariant_reason = "NotInvariant";
  if (inst.dynamics->kind() != DynamicsKind::HamiltonianFlow) {
    app.kms_reason = "dynamics is not a Hamiltonian flow";
  } else if (!(inst.beta > 0.0)) {
    app.kms_reason = "beta must be > 0";
  } else {
    app.kms = is_kms(inst.state, *inst.dynamics, inst.beta);
    if (!app.kms) app.kms_reason = "NotKMS";
  }
  return app;
}

ReferenceSystem make_reference(const Instance& inst, ReferenceTag tag) {
  switch (tag) {
    case ReferenceTag::FullStateSpace: return ReferenceSystem::full();
    case ReferenceTag::InvariantStates:
      if (!inst.dynamics) throw Error(ErrorKind::InvalidArgument, "invariant reference needs dynamics");
      return ReferenceSystem::invariant(*inst.dynamics);
    case ReferenceTag::KMSStates:
      if (!inst.dynamics) throw Error(ErrorKind::InvalidArgument, "kms reference needs dynamics");
      return ReferenceSystem::kms(*inst.dynamics, inst.beta);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown reference");
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

using ValueTable = std::map<std::pair<ReferenceTag, double>, EntropyReport>;

ValueTable evaluate(const Instance& inst, const std::vector<ReferenceTag>& refs,
                    const std::vector<double>& alphas, const SearchBudget& budget) {
  std::vector<std::pair<std::pair<ReferenceTag, double>, std::future<EntropyReport>>> tasks;
  for (ReferenceTag tag : refs) {
    const ReferenceSystem ref = make_reference(inst, tag);
    for (double alpha : alphas)
      tasks.emplace_back(std::make_pair(tag, alpha),
                         std::async(std::launch::async, [&inst, ref, alpha, &budget] {
                           return smix_renyi(inst.state, Alpha(alpha), ref, budget);
                         }));
  }
  ValueTable out;
  for (auto& [key, fut] : tasks) out.emplace(key, fut.get());
  return out;
}

VerificationResult make(std::string id, std::optional<double> alpha, bool ok, double lhs,
                        double rhs, double slack, std::string context) {
  return {std::move(id), alpha, ok ? VerificationStatus::Pass : VerificationStatus::Fail,
          lhs, rhs, slack, std::move(context)};
}

VerificationResult skip(std::string id, std::string reason) {
  VerificationResult r;
  r.theorem_id = std::move(id);
  r.status = VerificationStatus::Skip;
  r.context = std::move(reason);
  return r;
}

}  // namespace

const char* method_name(Method m) noexcept {
  return m == Method::ClosedForm ? "closed_form" : "search";
}

const char* status_name(VerificationStatus s) noexcept {
  switch (s) {
    case VerificationStatus::Pass: return "pass";
    case VerificationStatus::Fail: return "fail";
    case VerificationStatus::Skip: return "skip";
  }
  return "unknown";
}

double quantum_renyi(const DensityMatrix& rho, Alpha a) {
  if (a.is_shannon())
    throw Error(ErrorKind::InvalidArgument, "alpha = 1 is the von Neumann limit; use von_neumann()");
  return weight_functional(schatten(rho).eigenvalue_vector(), a);
}

double von_neumann(const DensityMatrix& rho) {
  return weight_functional(schatten(rho).eigenvalue_vector(), Alpha(1.0));
}

double quantum_renyi_or_vn(const DensityMatrix& rho, Alpha a) {
  return a.is_shannon() ? von_neumann(rho) : quantum_renyi(rho, a);
}

EntropyReport smix_renyi(const DensityMatrix& rho, Alpha a, const ReferenceSystem& ref,
                         const SearchBudget& budget) {
  EntropyReport r;
  switch (ref.tag) {
    case ReferenceTag::FullStateSpace:
      r = full_state_space(rho, a, budget);
      break;
    case ReferenceTag::InvariantStates:
      if (!ref.dynamics) throw Error(ErrorKind::InvalidArgument, "invariant reference needs dynamics");
      r = invariant_states(rho, a, *ref.dynamics, budget);
      break;
    case ReferenceTag::KMSStates: {
      if (!ref.dynamics) throw Error(ErrorKind::InvalidArgument, "kms reference needs dynamics");
      const Decomposition d = kms_decompose(rho, *ref.dynamics, ref.beta);
      r.value = smix_weight_value(d, a);
      r.closed_form_value = r.value;
      r.decomposition_size = static_cast<int>(d.size());
      r.method = Method::ClosedForm;
      break;
    }
  }
  r.alpha = a.value();
  r.reference = ref.tag;
  r.seed = budget.seed;
  return r;
}

std::vector<EntropyReport> sweep_entropies(const Instance& inst, const SearchBudget& budget) {
  std::vector<ReferenceTag> refs = inst.references;
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  const ValueTable table = evaluate(inst, refs, sorted_unique(inst.alphas), budget);
  std::vector<EntropyReport> rows;
  for (const auto& [key, report] : table) rows.push_back(report);
  return rows;
}

std::vector<VerificationResult> verify_theorems(const Instance& inst, const SearchBudget& budget) {
  const Applicability app = applicability(inst);
  const std::vector<double> grid = sorted_unique(inst.alphas);
  std::vector<double> all_alphas = grid;
  for (double x : {1.0 - kLimitEps, 1.0, 1.0 + kLimitEps}) all_alphas.push_back(x);
  all_alphas = sorted_unique(all_alphas);

  std::vector<ReferenceTag> refs{ReferenceTag::FullStateSpace};
  if (app.invariant) refs.push_back(ReferenceTag::InvariantStates);
  if (app.kms) refs.push_back(ReferenceTag::KMSStates);
  const ValueTable v = evaluate(inst, refs, all_alphas, budget);
  auto value = [&](ReferenceTag t, double a) { return v.at({t, a}).value; };

  std::vector<VerificationResult> out;

  for (ReferenceTag t : {ReferenceTag::FullStateSpace, ReferenceTag::InvariantStates,
                         ReferenceTag::KMSStates}) {
    const std::string ref = reference_name(t);
    if (std::find(refs.begin(), refs.end(), t) == refs.end()) {
      const std::string reason = t == ReferenceTag::InvariantStates ? app.invariant_reason
                                                                    : app.kms_reason;
      out.push_back(skip("monotone_in_alpha[" + ref + "]", reason));
      out.push_back(skip("limit_alpha_to_1[" + ref + "]", reason));
      continue;
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double lo = value(t, grid[i]), hi = value(t, grid[i + 1]);
      out.push_back(make("monotone_in_alpha[" + ref + "]", grid[i], lo >= hi - kOrderSlack, lo, hi,
                         kOrderSlack, "S(" + fmt(grid[i]) + ") >= S(" + fmt(grid[i + 1]) + ")"));
    }
    const double below = value(t, 1.0 - kLimitEps), at = value(t, 1.0),
                 above = value(t, 1.0 + kLimitEps);
    const double dev = std::max(std::abs(below - at), std::abs(above - at));
    const bool ordered = below >= at - kOrderSlack && at >= above - kOrderSlack;
    out.push_back(make("limit_alpha_to_1[" + ref + "]", 1.0, dev <= kLimitSlack && ordered, dev,
                       0.0, kLimitSlack,
                       "S(1-eps)=" + fmt(below) + " S(1)=" + fmt(at) + " S(1+eps)=" + fmt(above)));
  }

  for (double a : grid) {
    if (a == 1.0) continue;
    const EntropyReport& full = v.at({ReferenceTag::FullStateSpace, a});
    const double quantum = quantum_renyi(inst.state, Alpha(a));
    if (a > 1.0) {
      const double searched = full.search_value.value_or(full.value);
      out.push_back(make("full_equals_quantum_alpha_gt_1", a,
                         std::abs(searched - quantum) <= kEqualitySlack, searched, quantum,
                         kEqualitySlack,
                         full.search_value ? "search value vs Tr rho^alpha"
                                           : "cross-check disabled, closed form only"));
    } else {
      out.push_back(make("full_le_quantum_alpha_lt_1", a, full.value <= quantum + kOrderSlack,
                         full.value, quantum, kOrderSlack,
                         "search_minus_closed=" +
                             fmt(full.search_value.value_or(full.value) - quantum) +
                             " attained_by=" + full.attained_by));
    }
  }

  // Invariant-reference equality: faithful invariant state with simple spectrum.
  {
    const SpectralData spec = schatten(inst.state);
    const bool faithful = spec.rank() == inst.state.dim();
    const bool simple =
        eigen_clusters(spec.eigenvalues, 1e-10).size() == static_cast<std::size_t>(spec.rank());
    const bool nondeg_h = inst.dynamics && inst.dynamics->nondegenerate_generator();
    if (!app.invariant) {
      out.push_back(skip("invariant_equals_full", app.invariant_reason));
    } else if (!faithful) {
      out.push_back(skip("invariant_equals_full", "state is not faithful"));
    } else if (!simple && !nondeg_h) {
      out.push_back(skip("invariant_equals_full", "degenerate spectrum and degenerate generator"));
    } else {
      for (double a : grid) {
        const double lhs = value(ReferenceTag::InvariantStates, a);
        const double rhs = value(ReferenceTag::FullStateSpace, a);
        out.push_back(make("invariant_equals_full", a, std::abs(lhs - rhs) <= kEqualitySlack, lhs,
                           rhs, kEqualitySlack, "S^I vs S"));
      }
    }
  }

  if (!app.kms) {
    for (const char* id : {"kms_zero_single_block", "kms_le_invariant", "kms_le_full",
                           "kms_equals_block_weight_renyi", "chain_full_ge_invariant",
                           "chain_invariant_ge_kms"})
      out.push_back(skip(id, app.kms_reason));
  } else {
    const ProbDist masses = block_weights(inst.state);
    for (double a : grid) {
      const double k = value(ReferenceTag::KMSStates, a);
      if (inst.algebra.num_blocks() == 1)
        out.push_back(make("kms_zero_single_block", a, k == 0.0, k, 0.0, 0.0, "unique KMS state"));
      out.push_back(make("kms_le_invariant", a,
                         value(ReferenceTag::InvariantStates, a) >= k - kOrderSlack,
                         value(ReferenceTag::InvariantStates, a), k, kOrderSlack, "S^I >= S^K"));
      out.push_back(make("kms_le_full", a, value(ReferenceTag::FullStateSpace, a) >= k - kOrderSlack,
                         value(ReferenceTag::FullStateSpace, a), k, kOrderSlack, "S >= S^K"));
      const double classical = renyi_or_shannon(masses, Alpha(a));
      out.push_back(make("kms_equals_block_weight_renyi", a,
                         std::abs(k - classical) <= kClosedFormSlack, k, classical,
                         kClosedFormSlack, "S^K vs Renyi of block masses"));
    }
    if (inst.algebra.num_blocks() != 1)
      out.push_back(skip("kms_zero_single_block", "algebra has several central blocks"));

    const GnsData gns = gns_construct(inst.algebra, inst.state, *inst.dynamics);
    if (!is_g_commutative(gns, inst.algebra)) {
      out.push_back(skip("chain_full_ge_invariant", "not G-commutative"));
      out.push_back(skip("chain_invariant_ge_kms", "not G-commutative"));
    } else {
      for (double a : grid) {
        const double s = value(ReferenceTag::FullStateSpace, a);
        const double i = value(ReferenceTag::InvariantStates, a);
        const double k = value(ReferenceTag::KMSStates, a);
        out.push_back(make("chain_full_ge_invariant", a, s >= i - kOrderSlack, s, i, kOrderSlack,
                           "G-commutative"));
        out.push_back(make("chain_invariant_ge_kms", a, i >= k - kOrderSlack, i, k, kOrderSlack,
                           "G-commutative"));
      }
    }
  }

  for (const Instance::Expected& e : inst.expected) {
    const std::string id = std::string("expected_value[") + reference_name(e.reference) + "]";
    const bool have = std::find(refs.begin(), refs.end(), e.reference) != refs.end();
    if (!have) {
      out.push_back(skip(id, "reference not applicable"));
      continue;
    }
    const EntropyReport r = smix_renyi(inst.state, Alpha(e.alpha), make_reference(inst, e.reference),
                                       budget);
    out.push_back(make(id, e.alpha, std::abs(r.value - e.value) <= kClosedFormSlack, r.value,
                       e.value, kClosedFormSlack, "pinned value from problem file"));
  }
  return out;
}

}  // namespace smix
