#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "ismpbt/gen.hpp"
#include "ismpbt/prng.hpp"

namespace ismpbt {

// Judgement of a single generated input.
enum class Outcome { Pass, Fail, Discard };

enum class Verdict { Passed, Falsified, Exhausted };

struct QcConfig {
  int max_tests = 100;
  int max_discards = 1000;
  int size = kDefaultSize;
  std::uint64_t seed = 0;
};

template <typename T>
struct Property {
  Generator<T> input;
  std::function<Outcome(const T&)> judge;
  std::function<std::string(const T&)> render;
};

// Property from a boolean predicate; never discards.
template <typename T, typename P, typename R>
Property<T> for_all(Generator<T> input, P predicate, R render) {
  return Property<T>{
      std::move(input),
      [predicate = std::move(predicate)](const T& x) {
        return predicate(x) ? Outcome::Pass : Outcome::Fail;
      },
      std::move(render),
  };
}

// Property from a three-way judge (supports Discard).
template <typename T, typename J, typename R>
Property<T> property_of(Generator<T> input, J judge, R render) {
  return Property<T>{std::move(input), std::move(judge), std::move(render)};
}

struct QcResult {
  Verdict verdict = Verdict::Passed;
  int tests_run = 0;
  std::string log;
};

// RngState consumed by 1-based attempt index under the given root seed: the
// chain walks left splits, each attempt takes the right branch.  For a
// property that never discards, attempt index equals the reported test index,
// so a Falsified (seed, tests_run) pair regenerates the counterexample.
inline RngState rng_for_test(std::uint64_t seed, int index) {
  if (index < 1) throw std::invalid_argument("rng_for_test: index must be >= 1");
  RngState chain = rng_new(seed);
  for (int i = 1; i < index; ++i) chain = rng_split(chain).first;
  return rng_split(chain).second;
}

template <typename T>
QcResult quick_check(const QcConfig& cfg, const Property<T>& prop) {
  if (cfg.max_tests < 1) throw std::invalid_argument("quick_check: max_tests must be >= 1");
  if (cfg.max_discards < 0) throw std::invalid_argument("quick_check: max_discards must be >= 0");
  RngState chain = rng_new(cfg.seed);
  int passed = 0;
  int discards = 0;
  while (passed < cfg.max_tests) {
    auto [reserved, attempt] = rng_split(chain);
    chain = reserved;
    const T input = prop.input.run(cfg.size, attempt);
    switch (prop.judge(input)) {
      case Outcome::Pass:
        ++passed;
        break;
      case Outcome::Fail:
        return QcResult{Verdict::Falsified, passed + 1,
                        "Falsifiable, after " + std::to_string(passed + 1) +
                            " tests:\n" + prop.render(input)};
      case Outcome::Discard:
        if (++discards > cfg.max_discards) {
          return QcResult{Verdict::Exhausted, passed,
                          "Arguments exhausted after " + std::to_string(passed) +
                              " tests"};
        }
        break;
    }
  }
  return QcResult{Verdict::Passed, passed,
                  "OK, passed " + std::to_string(passed) + " tests"};
}

// Collapses a result to a boolean; exhaustion counts as the caller chooses.
inline bool check_bool(bool allow_exhaust, const QcResult& r) {
  switch (r.verdict) {
    case Verdict::Passed:
      return true;
    case Verdict::Falsified:
      return false;
    case Verdict::Exhausted:
      return allow_exhaust;
  }
  return false;
}

}  // namespace ismpbt
