#include "smix/problem.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "smix/error.hpp"

namespace smix {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(path.empty() ? key : path + "." + key, "missing field");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path, "expected an integer");
  return j.get<int>();
}

cplx complex_entry(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError(path, "expected [re, im] or a number");
}

CMatrix complex_matrix(const json& j, const std::string& path, int n) {
  if (!j.is_array()) throw InputError(path, "expected an array of rows");
  if (static_cast<int>(j.size()) != n)
    throw InputError(path, "expected " + std::to_string(n) + " rows, got " +
                               std::to_string(j.size()) + " (matrix must be square of the algebra size)");
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw InputError(path, "row " + std::to_string(i) + " must have " + std::to_string(n) +
                                 " entries (matrix must be square)");
    for (int k = 0; k < n; ++k)
      m(i, k) = complex_entry(row[static_cast<std::size_t>(k)], row_path + "[" + std::to_string(k) + "]");
  }
  return m;
}

ReferenceTag reference(const json& j, const std::string& path) {
  if (!j.is_string()) throw InputError(path, "expected a reference name");
  const auto tag = parse_reference(j.get<std::string>());
  if (!tag) throw InputError(path, "unknown reference '" + j.get<std::string>() +
                                       "' (use full, invariant or kms)");
  return *tag;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("<root>", "expected an object");

  const json& dims_json = require(require(root, "algebra", ""), "block_dims", "algebra");
  if (!dims_json.is_array() || dims_json.empty())
    throw InputError("algebra.block_dims", "expected a non-empty integer list");
  std::vector<int> dims;
  for (std::size_t i = 0; i < dims_json.size(); ++i)
    dims.push_back(integer(dims_json[i], "algebra.block_dims[" + std::to_string(i) + "]"));
  std::optional<AlgebraModel> alg;
  try {
    alg.emplace(dims);
  } catch (const Error& e) {
    throw InputError("algebra.block_dims", e.what());
  }
  const int n = alg->total_dim();

  const CMatrix rho_m =
      complex_matrix(require(require(root, "state", ""), "matrix", "state"), "state.matrix", n);
  std::optional<DensityMatrix> rho;
  try {
    rho.emplace(validate_state(rho_m, *alg));
  } catch (const Error& e) {
    throw InputError("state.matrix", e.what());
  }

  std::optional<Dynamics> dyn;
  if (root.contains("dynamics") && !root["dynamics"].is_null()) {
    const json& d = root["dynamics"];
    const json& kind = require(d, "kind", "dynamics");
    if (!kind.is_string()) throw InputError("dynamics.kind", "expected a string");
    try {
      if (kind == "hamiltonian") {
        dyn.emplace(Dynamics::hamiltonian(
            complex_matrix(require(d, "hamiltonian", "dynamics"), "dynamics.hamiltonian", n), *alg));
      } else if (kind == "group") {
        const json& us = require(d, "unitaries", "dynamics");
        if (!us.is_array() || us.empty())
          throw InputError("dynamics.unitaries", "expected a non-empty list of matrices");
        std::vector<CMatrix> mats;
        for (std::size_t g = 0; g < us.size(); ++g)
          mats.push_back(
              complex_matrix(us[g], "dynamics.unitaries[" + std::to_string(g) + "]", n));
        dyn.emplace(Dynamics::finite_group(std::move(mats), *alg));
      } else {
        throw InputError("dynamics.kind", "expected 'hamiltonian' or 'group'");
      }
    } catch (const Error& e) {
      throw InputError(kind == "group" ? "dynamics.unitaries" : "dynamics.hamiltonian", e.what());
    }
  }

  double beta = 1.0;
  if (root.contains("beta")) {
    beta = number(root["beta"], "beta");
    if (!(beta > 0.0)) throw InputError("beta", "must be > 0");
  }

  const json& alphas_json = require(root, "alphas", "");
  if (!alphas_json.is_array() || alphas_json.empty())
    throw InputError("alphas", "expected a non-empty list");
  std::vector<double> alphas;
  for (std::size_t i = 0; i < alphas_json.size(); ++i) {
    const std::string path = "alphas[" + std::to_string(i) + "]";
    const double a = number(alphas_json[i], path);
    if (!(a >= 0.0) || !std::isfinite(a)) throw InputError(path, "alpha must be finite and >= 0");
    alphas.push_back(a);
  }

  std::vector<ReferenceTag> refs{ReferenceTag::FullStateSpace};
  if (root.contains("references")) {
    const json& r = root["references"];
    if (!r.is_array() || r.empty()) throw InputError("references", "expected a non-empty list");
    refs.clear();
    for (std::size_t i = 0; i < r.size(); ++i)
      refs.push_back(reference(r[i], "references[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < refs.size(); ++i)
    if (refs[i] != ReferenceTag::FullStateSpace && !dyn)
      throw InputError("references[" + std::to_string(i) + "]", "reference needs dynamics");

  SearchBudget budget;
  if (root.contains("search")) {
    const json& s = root["search"];
    if (!s.is_object()) throw InputError("search", "expected an object");
    if (s.contains("restarts")) budget.restarts = integer(s["restarts"], "search.restarts");
    if (s.contains("iterations")) budget.iterations = integer(s["iterations"], "search.iterations");
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) throw InputError("search.seed", "expected a nonnegative integer");
      budget.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("m_cap")) budget.m_cap = integer(s["m_cap"], "search.m_cap");
    if (s.contains("cross_check")) {
      if (!s["cross_check"].is_boolean()) throw InputError("search.cross_check", "expected true or false");
      budget.cross_check = s["cross_check"].get<bool>();
    }
    if (budget.restarts < 1) throw InputError("search.restarts", "must be >= 1");
    if (budget.iterations < 1) throw InputError("search.iterations", "must be >= 1");
    if (budget.m_cap < 0) throw InputError("search.m_cap", "must be >= 0");
  }

  std::vector<Instance::Expected> expected;
  if (root.contains("expected")) {
    const json& e = root["expected"];
    if (!e.is_array()) throw InputError("expected", "expected a list");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string path = "expected[" + std::to_string(i) + "]";
      expected.push_back({reference(require(e[i], "reference", path), path + ".reference"),
                          number(require(e[i], "alpha", path), path + ".alpha"),
                          number(require(e[i], "value", path), path + ".value")});
    }
  }

  return Problem{Instance{*alg, *rho, dyn, beta, std::move(alphas), std::move(refs),
                          std::move(expected)},
                 budget};
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("<file>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace smix
