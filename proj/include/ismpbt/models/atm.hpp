#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ismpbt/gen.hpp"
#include "ismpbt/ism.hpp"
#include "ismpbt/rational.hpp"

namespace ismpbt::atm {

enum class PinOk { Correct, Incorrect };

// PIN the option generator always tries.
inline constexpr std::int64_t kValidPin = 0;

// Retry budget granted on card insertion in the fixed model.
inline constexpr std::int64_t kMaxRetries = 2;

struct AtmOp {
  enum class Kind { Insert, CheckPin, Dispense, Eject };
  Kind kind = Kind::Insert;
  std::int64_t pin = 0;     // CheckPin payload
  std::int64_t amount = 0;  // Dispense payload

  static AtmOp insert() { return {Kind::Insert, 0, 0}; }
  static AtmOp check_pin(std::int64_t pin) { return {Kind::CheckPin, pin, 0}; }
  static AtmOp dispense(std::int64_t amount);
  static AtmOp eject() { return {Kind::Eject, 0, 0}; }

  friend bool operator==(const AtmOp&, const AtmOp&) = default;
};

using AtmResult = std::variant<Unit, PinOk>;

std::string render_atm_op(const AtmOp& op);
std::string render_atm_result(const AtmResult& r);
std::optional<AtmResult> atm_fixed_result(const AtmOp& op);

// The result a CheckPIN op must produce; anything else is an env error.
PinOk expect_pin_result(const AtmResult& r);

// ---- machine that never limits PIN retries ----

struct AtmBuggy {
  enum class State { Ready, CardInserted, Session };
  using Op = AtmOp;
  using Result = AtmResult;

  static Generator<OpRes<AtmBuggy>> options(const State& s);
  static std::string render_state(const State& s);
  static std::string render_op(const Op& op) { return render_atm_op(op); }
  static std::string render_result(const Result& r) { return render_atm_result(r); }
  static std::optional<Result> fixed_result(const Op& op) { return atm_fixed_result(op); }
  static bool same_op_kind(const Op& a, const Op& b) { return a.kind == b.kind; }
  static std::string op_type_name() { return "ATMOp"; }
};

// State reached after a PIN check: a wrong PIN leaves the card in the slot,
// no matter how many attempts came before.
AtmBuggy::State chk_pin_buggy(PinOk r);

OpSpec<AtmBuggy> insert_op_buggy();
OpSpec<AtmBuggy> check_pin_op_buggy(std::int64_t pin);
OpSpec<AtmBuggy> dispense_op_buggy(std::int64_t amount);
OpSpec<AtmBuggy> eject_op_buggy(AtmBuggy::State from);

// ---- machine with a bounded retry budget ----

struct FixedState {
  enum class Kind { Ready, CardInserted, Session };
  Kind kind = Kind::Ready;
  std::int64_t retries = 0;  // meaningful only when kind == CardInserted

  static FixedState ready() { return {Kind::Ready, 0}; }
  static FixedState card_inserted(std::int64_t retries);
  static FixedState session() { return {Kind::Session, 0}; }

  friend bool operator==(const FixedState&, const FixedState&) = default;
};

struct AtmFixed {
  using State = FixedState;
  using Op = AtmOp;
  using Result = AtmResult;

  static Generator<OpRes<AtmFixed>> options(const State& s);
  static std::string render_state(const State& s);
  static std::string render_op(const Op& op) { return render_atm_op(op); }
  static std::string render_result(const Result& r) { return render_atm_result(r); }
  static std::optional<Result> fixed_result(const Op& op) { return atm_fixed_result(op); }
  static bool same_op_kind(const Op& a, const Op& b) { return a.kind == b.kind; }
  static std::string op_type_name() { return "ATMOp"; }
};

// State reached after a PIN check with `retries` attempts left: a wrong PIN
// burns one retry, and the card is returned once the budget is exhausted.
FixedState chk_pin_fixed(std::int64_t retries, PinOk r);

OpSpec<AtmFixed> insert_op_fixed();
OpSpec<AtmFixed> check_pin_op_fixed(std::int64_t retries, std::int64_t pin);
OpSpec<AtmFixed> dispense_op_fixed(std::int64_t amount);
OpSpec<AtmFixed> eject_op_fixed(FixedState from);

// ---- properties ----

// The only op generated from Ready is Insert, which must land in
// CardInserted (any remaining-retries value); demands a one-step trace.
bool prop_ready_insert(const Trace<AtmBuggy>& t);
bool prop_ready_insert(const Trace<AtmFixed>& t);

// Some step of the trace lands back in Ready.
bool prop_eventually_ready(const Trace<AtmBuggy>& t);
bool prop_eventually_ready(const Trace<AtmFixed>& t);

// ---- declared transition weights (feeds the probability oracle) ----

std::vector<std::pair<Rational, AtmBuggy::State>> transition_kernel(
    const AtmBuggy::State& s);
std::vector<std::pair<Rational, FixedState>> transition_kernel(const FixedState& s);

// ---- scripted programs ----

// Insert, check a PIN, withdraw on success, eject: ends in Ready.
Program<AtmBuggy, Unit> sample_withdrawal_prog();

// Tries to dispense straight after inserting the card; rejected at the
// Dispense op because the machine is not in Session.
Program<AtmBuggy, Unit> invalid_dispense_prog();

// Re-checks the PIN forever while it is wrong; only fuel stops it.
Program<AtmBuggy, Unit> endless_retry_prog();

// Four PIN attempts against a budget of three: the fourth CheckPIN is
// rejected because the machine has already returned to Ready.
Program<AtmFixed, Unit> retry_limit_prog();

}  // namespace ismpbt::atm
