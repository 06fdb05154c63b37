#include "ismpbt/suites.hpp"

#include <chrono>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "ismpbt/ism.hpp"
#include "ismpbt/models/arq.hpp"
#include "ismpbt/models/atm.hpp"
#include "ismpbt/oracle.hpp"

namespace ismpbt {

namespace {

template <IsmModel M>
PropertyEntry trace_entry(std::string name, std::size_t bound, typename M::State init,
                          std::function<bool(const Trace<M>&)> prop,
                          std::function<std::vector<OracleValue>(int)> oracle) {
  PropertyEntry e;
  e.name = std::move(name);
  e.default_bound = bound;
  e.run = [init, prop = std::move(prop)](std::uint64_t seed, int tests,
                                         std::size_t run_bound) {
    QcConfig cfg;
    cfg.seed = seed;
    cfg.max_tests = tests;
    return quick_check(cfg, for_all(gen_trace<M>(init, run_bound), prop,
                                    [](const Trace<M>& t) { return render_trace(t); }));
  };
  e.oracle = std::move(oracle);
  return e;
}

std::vector<OracleValue> atm_buggy_eventually_ready_oracle(int depth) {
  using S = atm::AtmBuggy::State;
  const TransitionKernel<S> kernel = [](const S& s) { return atm::transition_kernel(s); };
  const auto view = markov_view<S>(kernel, S::Ready, depth);
  const Rational p = visit_probability<S>(
      view, S::Ready, [](const S& s) { return s == S::Ready; }, depth);
  return {{"", p}};
}

std::vector<OracleValue> atm_fixed_eventually_ready_oracle(int depth) {
  using S = atm::FixedState;
  const TransitionKernel<S> kernel = [](const S& s) { return atm::transition_kernel(s); };
  const auto view = markov_view<S>(kernel, S::ready(), depth);
  const Rational p = visit_probability<S>(
      view, S::ready(), [](const S& s) { return s.kind == S::Kind::Ready; }, depth);
  return {{"", p}};
}

std::vector<OracleValue> arq_send_three_ok_oracle(int depth) {
  using arq::ArqState;
  std::vector<OracleValue> out;
  const std::pair<std::string, arq::AckDomain> variants[] = {
      {"ack range 0..100", arq::AckDomain::Range0To100},
      {"ack domain unbounded", arq::AckDomain::Unbounded},
  };
  for (const auto& [label, domain] : variants) {
    const TransitionKernel<ArqState> kernel = [domain](const ArqState& s) {
      return arq::transition_kernel(s, domain);
    };
    const auto view = markov_view<ArqState>(kernel, ArqState::ready(0), depth);
    const Rational p = visit_probability<ArqState>(
        view, ArqState::ready(0),
        [](const ArqState& s) { return s == ArqState::ready(3); }, depth);
    out.push_back({label, p});
  }
  return out;
}

std::vector<SuiteSpec> build_registry() {
  using BuggyTrace = Trace<atm::AtmBuggy>;
  using FixedTrace = Trace<atm::AtmFixed>;
  using ArqTrace = Trace<arq::ArqModel>;

  std::vector<SuiteSpec> suites;

  suites.push_back(SuiteSpec{
      "atm-buggy",
      {
          trace_entry<atm::AtmBuggy>(
              "ready-insert", 1, atm::AtmBuggy::State::Ready,
              [](const BuggyTrace& t) { return atm::prop_ready_insert(t); }, nullptr),
          trace_entry<atm::AtmBuggy>(
              "eventually-ready", 10, atm::AtmBuggy::State::Ready,
              [](const BuggyTrace& t) { return atm::prop_eventually_ready(t); },
              atm_buggy_eventually_ready_oracle),
      }});

  suites.push_back(SuiteSpec{
      "atm-fixed",
      {
          trace_entry<atm::AtmFixed>(
              "ready-insert", 1, atm::FixedState::ready(),
              [](const FixedTrace& t) { return atm::prop_ready_insert(t); }, nullptr),
          trace_entry<atm::AtmFixed>(
              "eventually-ready", 10, atm::FixedState::ready(),
              [](const FixedTrace& t) { return atm::prop_eventually_ready(t); },
              atm_fixed_eventually_ready_oracle),
      }});

  suites.push_back(SuiteSpec{
      "arq",
      {
          trace_entry<arq::ArqModel>(
              "send-three-ok", 20, arq::ArqState::ready(0),
              [](const ArqTrace& t) { return arq::prop_send_three_ok(t); },
              arq_send_three_ok_oracle),
      }});

  return suites;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Passed:
      return "passed";
    case Verdict::Falsified:
      return "falsified";
    case Verdict::Exhausted:
      return "exhausted";
  }
  return "unknown";
}

}  // namespace

const std::vector<SuiteSpec>& suite_registry() {
  static const std::vector<SuiteSpec> suites = build_registry();
  return suites;
}

const SuiteSpec* find_suite(const std::string& name) {
  for (const SuiteSpec& s : suite_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const PropertyEntry* find_property(const SuiteSpec& suite, const std::string& name) {
  for (const PropertyEntry& p : suite.properties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

int cmd_run(std::ostream& out, const RunOptions& opts) {
  std::vector<std::pair<const SuiteSpec*, const PropertyEntry*>> selected;
  std::vector<const SuiteSpec*> suites;
  if (opts.suite.empty()) {
    for (const SuiteSpec& s : suite_registry()) suites.push_back(&s);
  } else {
    const SuiteSpec* s = find_suite(opts.suite);
    if (!s) {
      out << "unknown suite '" << opts.suite << "'\n";
      return 2;
    }
    suites.push_back(s);
  }
  for (const SuiteSpec* s : suites) {
    if (opts.prop.empty()) {
      for (const PropertyEntry& p : s->properties) selected.emplace_back(s, &p);
    } else if (const PropertyEntry* p = find_property(*s, opts.prop)) {
      selected.emplace_back(s, p);
    }
  }
  if (selected.empty()) {
    out << "no property named '" << opts.prop << "' in scope\n";
    return 2;
  }

  bool any_falsified = false;
  bool any_exhausted = false;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& [suite, entry] : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    const QcResult res = entry->run(opts.seed, opts.tests, entry->default_bound);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    if (res.verdict == Verdict::Falsified) any_falsified = true;
    if (res.verdict == Verdict::Exhausted) any_exhausted = true;
    if (opts.json) {
      nlohmann::json item = {
          {"suite", suite->name},       {"property", entry->name},
          {"seed", opts.seed},          {"tests", res.tests_run},
          {"verdict", verdict_name(res.verdict)},
          {"elapsed_ms", elapsed_ms},
      };
      if (res.verdict == Verdict::Falsified) {
        item["counterexample"] = res.log.substr(res.log.find('\n') + 1);
      }
      report.push_back(std::move(item));
    } else {
      out << "=== " << suite->name << " :: " << entry->name << " (seed=" << opts.seed
          << ", tests=" << opts.tests << ", bound=" << entry->default_bound
          << ") ===\n"
          << res.log << "\n\n";
    }
  }
  if (opts.json) out << report.dump(2) << "\n";
  if (any_falsified) return 1;
  if (any_exhausted && !opts.allow_exhaust) return 1;
  return 0;
}

int cmd_oracle(std::ostream& out, const OracleOptions& opts) {
  const SuiteSpec* suite = find_suite(opts.suite);
  if (!suite) {
    out << "unknown suite '" << opts.suite << "'\n";
    return 2;
  }
  const PropertyEntry* entry = find_property(*suite, opts.prop);
  if (!entry) {
    out << "unknown property '" << opts.prop << "' in suite '" << suite->name << "'\n";
    return 2;
  }
  if (!entry->oracle) {
    out << "property '" << entry->name << "' has no probability oracle\n";
    return 2;
  }
  const int depth = opts.depth.value_or(static_cast<int>(entry->default_bound));
  if (depth < 0) {
    out << "depth must be >= 0\n";
    return 2;
  }
  out << "oracle " << suite->name << " :: " << entry->name << " (depth=" << depth
      << ")\n";
  for (const OracleValue& v : entry->oracle(depth)) {
    out << "P(holds)";
    if (!v.label.empty()) out << " [" << v.label << "]";
    out << " = " << rational_to_string(v.value) << " ~ " << rational_to_decimal(v.value)
        << "\n";
  }
  return 0;
}

}  // namespace ismpbt
