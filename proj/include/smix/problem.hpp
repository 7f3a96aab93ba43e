#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "smix/engine.hpp"

namespace smix {

/// Problem-file error carrying the JSON field path it refers to.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct Problem {
  Instance instance;
  SearchBudget budget;
};

/// Parse a problem from JSON text. Complex entries are [re, im] pairs; plain
/// numbers are read as real entries. Throws InputError.
Problem parse_problem(const std::string& text);

Problem load_problem(const std::filesystem::path& path);

}  // namespace smix
