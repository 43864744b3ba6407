#pragma once

#include "prtt/checker.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace prtt::cli {

struct SuiteOptions {
  std::filesystem::path corpus;
  unsigned grid = 6;
  std::uint64_t seed = 42;
  std::size_t samples = 50;  // generated terms and programs per sweep
  std::uint64_t step_budget = 0;
  std::uint64_t pr_budget = 0;
  CheckerOptions checker;
  bool json = false;
};

// Runs every property over the corpus; returns the number of failures.
std::size_t run_suite(const SuiteOptions& options, std::ostream& out, std::ostream& err);

}  // namespace prtt::cli
