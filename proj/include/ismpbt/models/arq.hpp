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

namespace ismpbt::arq {

// Every sent frame carries the same payload byte; only the sequence number
// varies, which is what the protocol logic is about.
inline constexpr std::int64_t kPayload = 255;

struct Pkt {
  std::int64_t payload = kPayload;
  std::int64_t seq = 0;

  friend bool operator==(const Pkt&, const Pkt&) = default;
};

// Result of a Wait op: either an acknowledgement number or a timeout.
struct WaitRes {
  bool is_ack = false;
  std::int64_t ack_num = 0;  // meaningful only when is_ack

  static WaitRes ack(std::int64_t n);
  static WaitRes timeout() { return {false, 0}; }

  friend bool operator==(const WaitRes&, const WaitRes&) = default;
};

// Sender states, each indexed by the sequence number in flight.  Acked also
// records the acknowledgement number received, matching or not.
struct ArqState {
  enum class Kind { Ready, Waiting, Acked };
  Kind kind = Kind::Ready;
  std::int64_t seq = 0;
  std::int64_t ack = 0;  // meaningful only when kind == Acked

  static ArqState ready(std::int64_t seq);
  static ArqState waiting(std::int64_t seq);
  static ArqState acked(std::int64_t seq, std::int64_t ack);

  friend bool operator==(const ArqState&, const ArqState&) = default;
};

struct ArqOp {
  enum class Kind { Send, Wait, Proceed, Retry };
  Kind kind = Kind::Send;
  Pkt pkt;  // Send payload

  static ArqOp send(Pkt p) { return {Kind::Send, p}; }
  static ArqOp wait() { return {Kind::Wait, {}}; }
  static ArqOp proceed() { return {Kind::Proceed, {}}; }
  static ArqOp retry() { return {Kind::Retry, {}}; }

  friend bool operator==(const ArqOp&, const ArqOp&) = default;
};

using ArqResult = std::variant<Unit, WaitRes>;

std::string render_arq_op(const ArqOp& op);
std::string render_arq_result(const ArqResult& r);

// The result a Wait op must produce; anything else is an env error.
WaitRes expect_wait_result(const ArqResult& r);

// State after waiting on sequence number `seq`: a timeout retransmits, an
// acknowledgement is recorded verbatim for the guard ops to inspect.
ArqState wait_next(std::int64_t seq, const WaitRes& r);

struct ArqModel {
  using State = ArqState;
  using Op = ArqOp;
  using Result = ArqResult;

  static Generator<OpRes<ArqModel>> options(const State& s);
  static std::string render_state(const State& s);
  static std::string render_op(const Op& op) { return render_arq_op(op); }
  static std::string render_result(const Result& r) { return render_arq_result(r); }
  static std::optional<Result> fixed_result(const Op& op);
  static bool same_op_kind(const Op& a, const Op& b) { return a.kind == b.kind; }
  static std::string op_type_name() { return "ARQOp"; }
};

OpSpec<ArqModel> send_op(std::int64_t seq);
OpSpec<ArqModel> wait_op(std::int64_t seq);

// Guarded ops: Proceed demands a matching acknowledgement, Retry a
// non-matching one; building the wrong one throws.
OpSpec<ArqModel> proceed_op(std::int64_t seq, std::int64_t ack);
OpSpec<ArqModel> retry_op(std::int64_t seq, std::int64_t ack);

// The trace reaches the state where three packets have been delivered.
bool prop_send_three_ok(const Trace<ArqModel>& t);

// How the declared transition weights treat the arbitrary-ack draw: confined
// to 0..100 (it can collide with the sequence number in flight) or unbounded
// (a blind draw never matches).
enum class AckDomain { Range0To100, Unbounded };

std::vector<std::pair<Rational, ArqState>> transition_kernel(const ArqState& s,
                                                             AckDomain domain);

// Sends packet `seq` until it is acknowledged; ends at Ready (seq+1).
Program<ArqModel, Unit> send_packet_prog(std::int64_t seq);

// Three deliveries in sequence: Ready 0 through Ready 3.
Program<ArqModel, Unit> send_three_prog();

}  // namespace ismpbt::arq
