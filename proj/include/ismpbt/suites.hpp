#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ismpbt/rational.hpp"
#include "ismpbt/runner.hpp"

namespace ismpbt {

// Seed used when neither the caller nor the environment picks one; runs are
// reproducible by default.
inline constexpr std::uint64_t kDefaultSeed = 20240527;

// One exact probability reported by a property's oracle, with an optional
// label distinguishing modelling variants.
struct OracleValue {
  std::string label;
  Rational value;
};

struct PropertyEntry {
  std::string name;
  std::size_t default_bound = 1;  // trace length the property is checked at
  std::function<QcResult(std::uint64_t seed, int tests, std::size_t bound)> run;
  // Exact probability that the property holds on one random trace of the
  // given depth; absent for properties without a declared transition kernel.
  std::function<std::vector<OracleValue>(int depth)> oracle;
};

struct SuiteSpec {
  std::string name;
  std::vector<PropertyEntry> properties;
};

const std::vector<SuiteSpec>& suite_registry();

// nullptr when the name is unknown.
const SuiteSpec* find_suite(const std::string& name);
const PropertyEntry* find_property(const SuiteSpec& suite, const std::string& name);

struct RunOptions {
  std::string suite;  // empty: every suite
  std::string prop;   // empty: every property in scope
  std::uint64_t seed = kDefaultSeed;
  int tests = 100;
  bool json = false;
  bool allow_exhaust = false;  // exhausted counts as success for the exit code
};

// Runs the selected properties, writing text blocks or a JSON array to out.
// Returns 0 when everything passed, 1 when anything was falsified (or
// exhausted without allow_exhaust), 2 on a selection error.
int cmd_run(std::ostream& out, const RunOptions& opts);

struct OracleOptions {
  std::string suite;
  std::string prop;
  std::optional<int> depth;  // defaults to the property's bound
};

// Prints the exact and decimal probability that the property holds on one
// random trace.  Returns 0 on success, 2 when the selection is unknown or
// the property has no oracle.
int cmd_oracle(std::ostream& out, const OracleOptions& opts);

}  // namespace ismpbt
