#pragma once

#include <concepts>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ismpbt/gen.hpp"

namespace ismpbt {

// An operation instance: the descriptor, the state it is declared to start
// from, and the next-state function stored alongside the descriptor (total on
// the op's possible results).
template <typename M>
struct OpSpec {
  typename M::Op op;
  typename M::State from_state;
  std::function<typename M::State(const typename M::Result&)> next_state;
};

// An operation paired with the result it produced.
template <typename M>
struct OpRes {
  OpSpec<M> spec;
  typename M::Result result;
};

// A model supplies the state/op/result types, a weighted options generator
// and text renders.  fixed_result names the results of self-resolving ops
// (those whose only result is unit); same_op_kind compares op constructors.
template <typename M>
concept IsmModel = requires(const typename M::State& s, const typename M::Op& op,
                            const typename M::Result& res) {
  { M::options(s) } -> std::same_as<Generator<OpRes<M>>>;
  { M::render_state(s) } -> std::convertible_to<std::string>;
  { M::render_op(op) } -> std::convertible_to<std::string>;
  { M::render_result(res) } -> std::convertible_to<std::string>;
  { M::fixed_result(op) } -> std::convertible_to<std::optional<typename M::Result>>;
  { M::same_op_kind(op, op) } -> std::convertible_to<bool>;
  { M::op_type_name() } -> std::convertible_to<std::string>;
  requires std::equality_comparable<typename M::State>;
  requires std::equality_comparable<typename M::Op>;
};

template <typename M>
struct TraceStep {
  OpRes<M> op_res;
  typename M::State result_state;  // always op_res.spec.next_state(op_res.result)
};

// Builds a step, computing the result state from the op's next-state function.
template <typename M>
TraceStep<M> make_step(OpRes<M> op_res) {
  auto state = op_res.spec.next_state(op_res.result);
  return TraceStep<M>{std::move(op_res), std::move(state)};
}

// Validating form: rejects a claimed result state that disagrees with the
// op's next-state function.
template <typename M>
TraceStep<M> make_step(OpRes<M> op_res, typename M::State result_state) {
  if (!(op_res.spec.next_state(op_res.result) == result_state)) {
    throw std::invalid_argument(
        "make_step: result state disagrees with the op's next-state function");
  }
  return TraceStep<M>{std::move(op_res), std::move(result_state)};
}

template <typename M>
struct Trace {
  typename M::State init_state;
  std::vector<TraceStep<M>> steps;

  std::size_t bound() const { return steps.size(); }
};

// Validates the chaining invariant: the first op starts at init, every later
// op starts at the previous step's result state.
template <typename M>
Trace<M> make_trace(typename M::State init, std::vector<TraceStep<M>> steps) {
  const typename M::State* current = &init;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const TraceStep<M>& s = steps[i];
    if (!(s.op_res.spec.from_state == *current)) {
      throw std::invalid_argument("make_trace: step " + std::to_string(i) +
                                  " does not chain from the previous state");
    }
    if (!(s.op_res.spec.next_state(s.op_res.result) == s.result_state)) {
      throw std::invalid_argument("make_trace: step " + std::to_string(i) +
                                  " result state disagrees with the next-state function");
    }
    current = &s.result_state;
  }
  return Trace<M>{std::move(init), std::move(steps)};
}

// Generates a trace of exactly `bound` chained steps from init.  Each step
// samples the model's options for the current state on a fresh split; an op
// declared from any other state is a model-definition error.
template <IsmModel M>
Generator<Trace<M>> gen_trace(typename M::State init, std::size_t bound) {
  return Generator<Trace<M>>([init, bound](int size, RngState r) {
    std::vector<TraceStep<M>> steps;
    steps.reserve(bound);
    typename M::State current = init;
    for (std::size_t i = 0; i < bound; ++i) {
      auto [r_step, r_rest] = rng_split(r);
      r = r_rest;
      OpRes<M> op_res = M::options(current).run(size, r_step);
      if (!(op_res.spec.from_state == current)) {
        throw std::logic_error("gen_trace: options(" + M::render_state(current) +
                               ") produced an op declared from " +
                               M::render_state(op_res.spec.from_state));
      }
      TraceStep<M> step = make_step(std::move(op_res));
      current = step.result_state;
      steps.push_back(std::move(step));
    }
    return Trace<M>{init, std::move(steps)};
  });
}

// Result states in step order (the init state is not included).
template <typename M>
std::vector<typename M::State> trace_states(const Trace<M>& t) {
  std::vector<typename M::State> out;
  out.reserve(t.steps.size());
  for (const TraceStep<M>& s : t.steps) out.push_back(s.result_state);
  return out;
}

template <IsmModel M>
std::string render_trace(const Trace<M>& t) {
  std::string out = "Starting @ " + M::render_state(t.init_state) + ":\n";
  if (t.steps.empty()) return out + "[]";
  bool first = true;
  for (const TraceStep<M>& s : t.steps) {
    out += first ? "[ (" : ", (";
    first = false;
    out += "<" + M::op_type_name() + " '" + M::render_op(s.op_res.spec.op) + " ~ " +
           M::render_result(s.op_res.result) + "'>, " +
           M::render_state(s.result_state) + ")\n";
  }
  return out + "]";
}

// Renders a state mismatch the way a unifier reports one: when both renders
// share the same head constructor token, only the differing tails are shown
// ("Ready 1" vs "Ready 0" reports "1 and 0"); otherwise the full renders.
inline std::string mismatch_message(const std::string& expected, const std::string& actual) {
  const auto tokens = [](const std::string& s) {
    std::vector<std::string> ts;
    std::istringstream in(s);
    std::string w;
    while (in >> w) ts.push_back(w);
    return ts;
  };
  const auto join = [](const std::vector<std::string>& v, std::size_t from) {
    std::string s;
    for (std::size_t j = from; j < v.size(); ++j) {
      if (j > from) s += ' ';
      s += v[j];
    }
    return s;
  };
  const std::vector<std::string> e = tokens(expected);
  const std::vector<std::string> a = tokens(actual);
  std::string lhs = expected;
  std::string rhs = actual;
  if (!e.empty() && !a.empty() && e.front() == a.front()) {
    std::size_t i = 0;
    while (i < e.size() && i < a.size() && e[i] == a[i]) ++i;
    if (i < e.size() && i < a.size()) {
      lhs = join(e, i);
      rhs = join(a, i);
    }
  }
  return "Mismatch between: " + lhs + " and " + rhs;
}

// ---- sequential programs over a model ----

template <typename M, typename V>
struct ProgramNode;

// Emits an op; the handler maps the op's result to the continuation.  The
// handler is total on the op's result type: constructing it from one lambda
// per result constructor (see the model helpers) leaves no result unhandled.
template <typename M, typename V>
struct ProgramEmit {
  OpSpec<M> op;
  std::function<ProgramNode<M, V>(const typename M::Result&)> handler;
};

template <typename M, typename V>
struct ProgramDone {
  V value;
};

template <typename M, typename V>
struct ProgramNode {
  std::variant<ProgramEmit<M, V>, ProgramDone<M, V>> node;
};

// A finite script plus its declared start state and declared final-state
// function.  Loops are expressed by handlers that rebuild a program's node
// lazily; execution is fuel-bounded.
template <typename M, typename V>
struct Program {
  typename M::State start_state;
  std::function<typename M::State(const V&)> final_state_fn;
  ProgramNode<M, V> root;
};

template <typename M, typename V>
ProgramNode<M, V> node_done(V value) {
  return ProgramNode<M, V>{ProgramDone<M, V>{std::move(value)}};
}

template <typename M, typename V>
ProgramNode<M, V> node_emit(
    OpSpec<M> op, std::function<ProgramNode<M, V>(const typename M::Result&)> handler) {
  return ProgramNode<M, V>{ProgramEmit<M, V>{std::move(op), std::move(handler)}};
}

// Splices b in place of every leaf of a (a's return value is dropped).
template <typename M, typename V, typename W>
ProgramNode<M, W> node_then(const ProgramNode<M, V>& a, const ProgramNode<M, W>& b) {
  if (std::holds_alternative<ProgramDone<M, V>>(a.node)) return b;
  const auto& emit = std::get<ProgramEmit<M, V>>(a.node);
  return node_emit<M, W>(
      emit.op, [handler = emit.handler, b](const typename M::Result& res) {
        return node_then<M, V, W>(handler(res), b);
      });
}

// Runs a to completion, then b; declared start comes from a, declared final
// state from b.
template <typename M, typename V, typename W>
Program<M, W> prog_then(const Program<M, V>& a, const Program<M, W>& b) {
  return Program<M, W>{a.start_state, b.final_state_fn,
                       node_then<M, V, W>(a.root, b.root)};
}

// Re-declares a program's start state and final-state function.
template <typename M, typename V>
Program<M, V> prog_declare(typename M::State start,
                           std::function<typename M::State(const V&)> final_state_fn,
                           Program<M, V> p) {
  return Program<M, V>{std::move(start), std::move(final_state_fn), std::move(p.root)};
}

// Resolves an emitted op to a result value of that op's result type.
template <typename M>
using Env = std::function<typename M::Result(const typename M::State&,
                                             const typename M::Op&)>;

// Environment fed by a fixed result sequence.  Self-resolving ops do not
// consume the script; a dry script is a scripting error.
template <IsmModel M>
Env<M> scripted_env(std::vector<typename M::Result> script) {
  auto queue =
      std::make_shared<std::deque<typename M::Result>>(script.begin(), script.end());
  return [queue](const typename M::State&, const typename M::Op& op) ->
         typename M::Result {
    if (auto fixed = M::fixed_result(op)) return *fixed;
    if (queue->empty()) throw std::runtime_error("scripted_env: script exhausted");
    typename M::Result r = queue->front();
    queue->pop_front();
    return r;
  };
}

// Environment that answers every op constant-result regardless of state;
// useful for driving loops (e.g. a PIN pad that is always wrong).
template <IsmModel M>
Env<M> constant_env(typename M::Result result) {
  return [result](const typename M::State&, const typename M::Op& op) ->
         typename M::Result {
    if (auto fixed = M::fixed_result(op)) return *fixed;
    return result;
  };
}

// Environment sampling results from the model's own option weights at the
// current state, restricted to the emitted op's constructor.
template <IsmModel M>
Env<M> model_env(std::uint64_t seed) {
  auto rng = std::make_shared<RngState>(rng_new(seed));
  return [rng](const typename M::State& st, const typename M::Op& op) ->
         typename M::Result {
    if (auto fixed = M::fixed_result(op)) return *fixed;
    for (int attempt = 0; attempt < 100000; ++attempt) {
      auto [rest, draw] = rng_split(*rng);
      *rng = rest;
      OpRes<M> sampled = M::options(st).run(kDefaultSize, draw);
      if (M::same_op_kind(sampled.spec.op, op)) return sampled.result;
    }
    throw std::runtime_error("model_env: options(" + M::render_state(st) +
                             ") never produce op " + M::render_op(op));
  };
}

enum class RunStatus { Success, TransitionMismatch, FuelExhausted };

template <typename M, typename V>
struct RunOutcome {
  RunStatus status = RunStatus::Success;
  std::optional<V> value;            // present on Success
  typename M::State state;           // final state on Success, last state otherwise
  std::vector<TraceStep<M>> executed;
  std::string message;               // mismatch rendering, empty otherwise
};

inline constexpr int kDefaultFuel = 10000;

// Executes a program from its declared start state.  Before each op the op's
// declared from-state must equal the current state; on Done the declared
// final state must equal the current state.  Fuel bounds the number of ops.
template <IsmModel M, typename V>
RunOutcome<M, V> run_program(const Program<M, V>& prog, const Env<M>& env,
                             int fuel = kDefaultFuel) {
  typename M::State current = prog.start_state;
  std::vector<TraceStep<M>> executed;
  ProgramNode<M, V> owned = prog.root;
  int used = 0;
  for (;;) {
    if (const auto* done = std::get_if<ProgramDone<M, V>>(&owned.node)) {
      const typename M::State declared = prog.final_state_fn(done->value);
      if (!(declared == current)) {
        return RunOutcome<M, V>{
            RunStatus::TransitionMismatch, std::nullopt, current, std::move(executed),
            mismatch_message(M::render_state(declared), M::render_state(current))};
      }
      return RunOutcome<M, V>{RunStatus::Success, done->value, current,
                              std::move(executed), ""};
    }
    if (used == fuel) {
      return RunOutcome<M, V>{RunStatus::FuelExhausted, std::nullopt, current,
                              std::move(executed), ""};
    }
    const auto& emit = std::get<ProgramEmit<M, V>>(owned.node);
    if (!(emit.op.from_state == current)) {
      return RunOutcome<M, V>{
          RunStatus::TransitionMismatch, std::nullopt, current, std::move(executed),
          mismatch_message(M::render_state(emit.op.from_state),
                           M::render_state(current))};
    }
    const typename M::Result result = env(current, emit.op.op);
    TraceStep<M> step = make_step(OpRes<M>{emit.op, result});
    current = step.result_state;
    executed.push_back(std::move(step));
    ++used;
    ProgramNode<M, V> next = emit.handler(result);
    owned = std::move(next);
  }
}

}  // namespace ismpbt
