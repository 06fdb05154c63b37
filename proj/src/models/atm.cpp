#include "ismpbt/models/atm.hpp"

#include <stdexcept>

namespace ismpbt::atm {

AtmOp AtmOp::dispense(std::int64_t amount) {
  if (amount < 0) throw std::invalid_argument("AtmOp::dispense: negative amount");
  return {Kind::Dispense, 0, amount};
}

std::string render_atm_op(const AtmOp& op) {
  switch (op.kind) {
    case AtmOp::Kind::Insert:
      return "Insert";
    case AtmOp::Kind::CheckPin:
      return "CheckPIN " + std::to_string(op.pin);
    case AtmOp::Kind::Dispense:
      return "Dispense " + std::to_string(op.amount);
    case AtmOp::Kind::Eject:
      return "Eject";
  }
  throw std::logic_error("render_atm_op: unknown op kind");
}

std::string render_atm_result(const AtmResult& r) {
  if (std::holds_alternative<Unit>(r)) return "()";
  return std::get<PinOk>(r) == PinOk::Correct ? "Correct" : "Incorrect";
}

std::optional<AtmResult> atm_fixed_result(const AtmOp& op) {
  if (op.kind == AtmOp::Kind::CheckPin) return std::nullopt;
  return AtmResult{Unit{}};
}

PinOk expect_pin_result(const AtmResult& r) {
  if (const auto* ok = std::get_if<PinOk>(&r)) return *ok;
  throw std::runtime_error("expect_pin_result: CheckPIN produced a unit result");
}

// ---- AtmBuggy ----

AtmBuggy::State chk_pin_buggy(PinOk r) {
  return r == PinOk::Correct ? AtmBuggy::State::Session : AtmBuggy::State::CardInserted;
}

OpSpec<AtmBuggy> insert_op_buggy() {
  return {AtmOp::insert(), AtmBuggy::State::Ready,
          [](const AtmResult&) { return AtmBuggy::State::CardInserted; }};
}

OpSpec<AtmBuggy> check_pin_op_buggy(std::int64_t pin) {
  return {AtmOp::check_pin(pin), AtmBuggy::State::CardInserted,
          [](const AtmResult& r) { return chk_pin_buggy(expect_pin_result(r)); }};
}

OpSpec<AtmBuggy> dispense_op_buggy(std::int64_t amount) {
  return {AtmOp::dispense(amount), AtmBuggy::State::Session,
          [](const AtmResult&) { return AtmBuggy::State::Session; }};
}

OpSpec<AtmBuggy> eject_op_buggy(AtmBuggy::State from) {
  return {AtmOp::eject(), from,
          [](const AtmResult&) { return AtmBuggy::State::Ready; }};
}

Generator<OpRes<AtmBuggy>> AtmBuggy::options(const State& s) {
  using R = OpRes<AtmBuggy>;
  switch (s) {
    case State::Ready:
      return pure(R{insert_op_buggy(), Unit{}});
    case State::CardInserted:
      // A random PIN attempt is right one time in five.
      return frequency<R>({
          {1, pure(R{check_pin_op_buggy(kValidPin), PinOk::Correct})},
          {4, pure(R{check_pin_op_buggy(kValidPin), PinOk::Incorrect})},
          {1, pure(R{eject_op_buggy(State::CardInserted), Unit{}})},
      });
    case State::Session:
      return bind(arbitrary_nat(), [](std::int64_t amount) {
        return one_of<R>({
            pure(R{dispense_op_buggy(amount), Unit{}}),
            pure(R{eject_op_buggy(State::Session), Unit{}}),
        });
      });
  }
  throw std::logic_error("AtmBuggy::options: unknown state");
}

std::string AtmBuggy::render_state(const State& s) {
  switch (s) {
    case State::Ready:
      return "Ready";
    case State::CardInserted:
      return "CardInserted";
    case State::Session:
      return "Session";
  }
  throw std::logic_error("AtmBuggy::render_state: unknown state");
}

// ---- AtmFixed ----

FixedState FixedState::card_inserted(std::int64_t retries) {
  if (retries < 0 || retries > kMaxRetries) {
    throw std::invalid_argument("FixedState::card_inserted: retries out of range");
  }
  return {Kind::CardInserted, retries};
}

FixedState chk_pin_fixed(std::int64_t retries, PinOk r) {
  if (r == PinOk::Correct) return FixedState::session();
  return retries > 0 ? FixedState::card_inserted(retries - 1) : FixedState::ready();
}

OpSpec<AtmFixed> insert_op_fixed() {
  return {AtmOp::insert(), FixedState::ready(),
          [](const AtmResult&) { return FixedState::card_inserted(kMaxRetries); }};
}

OpSpec<AtmFixed> check_pin_op_fixed(std::int64_t retries, std::int64_t pin) {
  return {AtmOp::check_pin(pin), FixedState::card_inserted(retries),
          [retries](const AtmResult& r) {
            return chk_pin_fixed(retries, expect_pin_result(r));
          }};
}

OpSpec<AtmFixed> dispense_op_fixed(std::int64_t amount) {
  return {AtmOp::dispense(amount), FixedState::session(),
          [](const AtmResult&) { return FixedState::session(); }};
}

OpSpec<AtmFixed> eject_op_fixed(FixedState from) {
  return {AtmOp::eject(), std::move(from),
          [](const AtmResult&) { return FixedState::ready(); }};
}

Generator<OpRes<AtmFixed>> AtmFixed::options(const State& s) {
  using R = OpRes<AtmFixed>;
  switch (s.kind) {
    case FixedState::Kind::Ready:
      return pure(R{insert_op_fixed(), Unit{}});
    case FixedState::Kind::CardInserted:
      return frequency<R>({
          {1, pure(R{check_pin_op_fixed(s.retries, kValidPin), PinOk::Correct})},
          {4, pure(R{check_pin_op_fixed(s.retries, kValidPin), PinOk::Incorrect})},
          {1, pure(R{eject_op_fixed(s), Unit{}})},
      });
    case FixedState::Kind::Session:
      return bind(arbitrary_nat(), [](std::int64_t amount) {
        return one_of<R>({
            pure(R{dispense_op_fixed(amount), Unit{}}),
            pure(R{eject_op_fixed(FixedState::session()), Unit{}}),
        });
      });
  }
  throw std::logic_error("AtmFixed::options: unknown state");
}

std::string AtmFixed::render_state(const State& s) {
  switch (s.kind) {
    case FixedState::Kind::Ready:
      return "Ready";
    case FixedState::Kind::CardInserted:
      return "CardInserted " + std::to_string(s.retries);
    case FixedState::Kind::Session:
      return "Session";
  }
  throw std::logic_error("AtmFixed::render_state: unknown state");
}

// ---- properties ----

bool prop_ready_insert(const Trace<AtmBuggy>& t) {
  const AtmBuggy::State* current = &t.init_state;
  for (const TraceStep<AtmBuggy>& s : t.steps) {
    if (*current == AtmBuggy::State::Ready) {
      if (!(s.op_res.spec.op == AtmOp::insert())) return false;
      if (s.result_state != AtmBuggy::State::CardInserted) return false;
    }
    current = &s.result_state;
  }
  return true;
}

bool prop_ready_insert(const Trace<AtmFixed>& t) {
  const FixedState* current = &t.init_state;
  for (const TraceStep<AtmFixed>& s : t.steps) {
    if (current->kind == FixedState::Kind::Ready) {
      if (!(s.op_res.spec.op == AtmOp::insert())) return false;
      if (s.result_state.kind != FixedState::Kind::CardInserted) return false;
    }
    current = &s.result_state;
  }
  return true;
}

bool prop_eventually_ready(const Trace<AtmBuggy>& t) {
  for (const TraceStep<AtmBuggy>& s : t.steps) {
    if (s.result_state == AtmBuggy::State::Ready) return true;
  }
  return false;
}

bool prop_eventually_ready(const Trace<AtmFixed>& t) {
  for (const TraceStep<AtmFixed>& s : t.steps) {
    if (s.result_state.kind == FixedState::Kind::Ready) return true;
  }
  return false;
}

// ---- declared transition weights ----

std::vector<std::pair<Rational, AtmBuggy::State>> transition_kernel(
    const AtmBuggy::State& s) {
  using S = AtmBuggy::State;
  switch (s) {
    case S::Ready:
      return {{1, S::CardInserted}};
    case S::CardInserted:
      // CheckPIN splits 1:4 over Correct/Incorrect; Eject carries weight 1.
      return {{Rational(1, 6), S::Session},
              {Rational(4, 6), S::CardInserted},
              {Rational(1, 6), S::Ready}};
    case S::Session:
      return {{Rational(1, 2), S::Session}, {Rational(1, 2), S::Ready}};
  }
  throw std::logic_error("transition_kernel: unknown state");
}

std::vector<std::pair<Rational, FixedState>> transition_kernel(const FixedState& s) {
  switch (s.kind) {
    case FixedState::Kind::Ready:
      return {{1, FixedState::card_inserted(kMaxRetries)}};
    case FixedState::Kind::CardInserted:
      return {{Rational(1, 6), FixedState::session()},
              {Rational(4, 6), chk_pin_fixed(s.retries, PinOk::Incorrect)},
              {Rational(1, 6), FixedState::ready()}};
    case FixedState::Kind::Session:
      return {{Rational(1, 2), FixedState::session()},
              {Rational(1, 2), FixedState::ready()}};
  }
  throw std::logic_error("transition_kernel: unknown state");
}

// ---- scripted programs ----

namespace {

using BuggyNode = ProgramNode<AtmBuggy, Unit>;

BuggyNode eject_then_done(AtmBuggy::State from) {
  return node_emit<AtmBuggy, Unit>(
      eject_op_buggy(from),
      [](const AtmResult&) { return node_done<AtmBuggy, Unit>(Unit{}); });
}

BuggyNode keep_retrying() {
  return node_emit<AtmBuggy, Unit>(
      check_pin_op_buggy(4321), [](const AtmResult& r) {
        if (expect_pin_result(r) == PinOk::Incorrect) return keep_retrying();
        return eject_then_done(AtmBuggy::State::Session);
      });
}

std::function<AtmBuggy::State(const Unit&)> ends_ready_buggy() {
  return [](const Unit&) { return AtmBuggy::State::Ready; };
}

using FixedNode = ProgramNode<AtmFixed, Unit>;

FixedNode fixed_pin_attempt(std::int64_t retries) {
  return node_emit<AtmFixed, Unit>(
      check_pin_op_fixed(retries, 4231), [retries](const AtmResult& r) {
        if (expect_pin_result(r) == PinOk::Correct) {
          return node_emit<AtmFixed, Unit>(
              eject_op_fixed(FixedState::session()),
              [](const AtmResult&) { return node_done<AtmFixed, Unit>(Unit{}); });
        }
        // Blindly schedules another attempt with one retry fewer, even past
        // the budget; the machine rejects the over-budget attempt.
        std::int64_t next = retries > 0 ? retries - 1 : kMaxRetries;
        return fixed_pin_attempt(next);
      });
}

}  // namespace

Program<AtmBuggy, Unit> sample_withdrawal_prog() {
  BuggyNode root = node_emit<AtmBuggy, Unit>(
      insert_op_buggy(), [](const AtmResult&) {
        return node_emit<AtmBuggy, Unit>(
            check_pin_op_buggy(1234), [](const AtmResult& r) {
              if (expect_pin_result(r) == PinOk::Correct) {
                return node_emit<AtmBuggy, Unit>(
                    dispense_op_buggy(42), [](const AtmResult&) {
                      return eject_then_done(AtmBuggy::State::Session);
                    });
              }
              return eject_then_done(AtmBuggy::State::CardInserted);
            });
      });
  return {AtmBuggy::State::Ready, ends_ready_buggy(), std::move(root)};
}

Program<AtmBuggy, Unit> invalid_dispense_prog() {
  BuggyNode root = node_emit<AtmBuggy, Unit>(
      insert_op_buggy(), [](const AtmResult&) {
        // No session was opened, so this op's declared source state is wrong.
        return node_emit<AtmBuggy, Unit>(
            dispense_op_buggy(42), [](const AtmResult&) {
              return eject_then_done(AtmBuggy::State::Session);
            });
      });
  return {AtmBuggy::State::Ready, ends_ready_buggy(), std::move(root)};
}

Program<AtmBuggy, Unit> endless_retry_prog() {
  BuggyNode root = node_emit<AtmBuggy, Unit>(
      insert_op_buggy(), [](const AtmResult&) { return keep_retrying(); });
  return {AtmBuggy::State::Ready, ends_ready_buggy(), std::move(root)};
}

Program<AtmFixed, Unit> retry_limit_prog() {
  FixedNode root = node_emit<AtmFixed, Unit>(
      insert_op_fixed(),
      [](const AtmResult&) { return fixed_pin_attempt(kMaxRetries); });
  return {FixedState::ready(), [](const Unit&) { return FixedState::ready(); },
          std::move(root)};
}

}  // namespace ismpbt::atm
