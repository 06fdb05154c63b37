#include "ismpbt/models/arq.hpp"

#include <stdexcept>

namespace ismpbt::arq {

WaitRes WaitRes::ack(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("WaitRes::ack: negative ack number");
  return {true, n};
}

ArqState ArqState::ready(std::int64_t seq) {
  if (seq < 0) throw std::invalid_argument("ArqState::ready: negative seq");
  return {Kind::Ready, seq, 0};
}

ArqState ArqState::waiting(std::int64_t seq) {
  if (seq < 0) throw std::invalid_argument("ArqState::waiting: negative seq");
  return {Kind::Waiting, seq, 0};
}

ArqState ArqState::acked(std::int64_t seq, std::int64_t ack) {
  if (seq < 0 || ack < 0) {
    throw std::invalid_argument("ArqState::acked: negative seq or ack");
  }
  return {Kind::Acked, seq, ack};
}

std::string render_arq_op(const ArqOp& op) {
  switch (op.kind) {
    case ArqOp::Kind::Send:
      return "Send (Pkt " + std::to_string(op.pkt.payload) + " " +
             std::to_string(op.pkt.seq) + ")";
    case ArqOp::Kind::Wait:
      return "Wait";
    case ArqOp::Kind::Proceed:
      return "Proceed";
    case ArqOp::Kind::Retry:
      return "Retry";
  }
  throw std::logic_error("render_arq_op: unknown op kind");
}

std::string render_arq_result(const ArqResult& r) {
  if (std::holds_alternative<Unit>(r)) return "()";
  const WaitRes& w = std::get<WaitRes>(r);
  return w.is_ack ? "Ack " + std::to_string(w.ack_num) : "Timeout";
}

WaitRes expect_wait_result(const ArqResult& r) {
  if (const auto* w = std::get_if<WaitRes>(&r)) return *w;
  throw std::runtime_error("expect_wait_result: Wait produced a unit result");
}

ArqState wait_next(std::int64_t seq, const WaitRes& r) {
  return r.is_ack ? ArqState::acked(seq, r.ack_num) : ArqState::ready(seq);
}

std::optional<ArqResult> ArqModel::fixed_result(const Op& op) {
  if (op.kind == ArqOp::Kind::Wait) return std::nullopt;
  return ArqResult{Unit{}};
}

OpSpec<ArqModel> send_op(std::int64_t seq) {
  return {ArqOp::send(Pkt{kPayload, seq}), ArqState::ready(seq),
          [seq](const ArqResult&) { return ArqState::waiting(seq); }};
}

OpSpec<ArqModel> wait_op(std::int64_t seq) {
  return {ArqOp::wait(), ArqState::waiting(seq), [seq](const ArqResult& r) {
            return wait_next(seq, expect_wait_result(r));
          }};
}

OpSpec<ArqModel> proceed_op(std::int64_t seq, std::int64_t ack) {
  if (ack != seq) {
    throw std::invalid_argument("proceed_op: ack does not match the seq in flight");
  }
  return {ArqOp::proceed(), ArqState::acked(seq, ack),
          [seq](const ArqResult&) { return ArqState::ready(seq + 1); }};
}

OpSpec<ArqModel> retry_op(std::int64_t seq, std::int64_t ack) {
  if (ack == seq) {
    throw std::invalid_argument("retry_op: ack matches the seq in flight");
  }
  return {ArqOp::retry(), ArqState::acked(seq, ack),
          [seq](const ArqResult&) { return ArqState::ready(seq); }};
}

Generator<OpRes<ArqModel>> ArqModel::options(const State& s) {
  using R = OpRes<ArqModel>;
  switch (s.kind) {
    case ArqState::Kind::Ready:
      return pure(R{send_op(s.seq), Unit{}});
    case ArqState::Kind::Waiting: {
      const std::int64_t seq = s.seq;
      // The channel mostly echoes the right ack; sometimes it times out, and
      // now and then it delivers a stray ack drawn at random.
      return frequency<R>({
          {4, pure(R{wait_op(seq), ArqResult{WaitRes::timeout()}})},
          {1, bind(arbitrary_nat(),
                   [seq](std::int64_t a) {
                     return pure(R{wait_op(seq), ArqResult{WaitRes::ack(a)}});
                   })},
          {15, pure(R{wait_op(seq), ArqResult{WaitRes::ack(seq)}})},
      });
    }
    case ArqState::Kind::Acked:
      if (s.ack == s.seq) return pure(R{proceed_op(s.seq, s.ack), Unit{}});
      return pure(R{retry_op(s.seq, s.ack), Unit{}});
  }
  throw std::logic_error("ArqModel::options: unknown state");
}

std::string ArqModel::render_state(const State& s) {
  switch (s.kind) {
    case ArqState::Kind::Ready:
      return "Ready " + std::to_string(s.seq);
    case ArqState::Kind::Waiting:
      return "Waiting " + std::to_string(s.seq);
    case ArqState::Kind::Acked:
      return "Acked " + std::to_string(s.seq) + " " + std::to_string(s.ack);
  }
  throw std::logic_error("ArqModel::render_state: unknown state");
}

bool prop_send_three_ok(const Trace<ArqModel>& t) {
  for (const TraceStep<ArqModel>& s : t.steps) {
    if (s.result_state == ArqState::ready(3)) return true;
  }
  return false;
}

std::vector<std::pair<Rational, ArqState>> transition_kernel(const ArqState& s,
                                                             AckDomain domain) {
  switch (s.kind) {
    case ArqState::Kind::Ready:
      return {{1, ArqState::waiting(s.seq)}};
    case ArqState::Kind::Waiting: {
      // The random-ack draw matches the seq in flight with probability 1/101
      // when confined to 0..100 (and the seq is inside the range); a blind
      // unbounded draw never matches.  Non-matching acks all drive the same
      // Retry path, so they are pooled on one representative Acked state.
      const bool can_collide =
          domain == AckDomain::Range0To100 && s.seq <= 100;
      const Rational p_match_arb =
          can_collide ? Rational(1, 101) : Rational(0);
      const Rational p_match = Rational(15, 20) + Rational(1, 20) * p_match_arb;
      const Rational p_mismatch = Rational(1, 20) * (Rational(1) - p_match_arb);
      std::vector<std::pair<Rational, ArqState>> rows = {
          {Rational(4, 20), ArqState::ready(s.seq)},
          {p_match, ArqState::acked(s.seq, s.seq)},
      };
      if (p_mismatch != 0) {
        rows.emplace_back(p_mismatch, ArqState::acked(s.seq, s.seq + 1));
      }
      return rows;
    }
    case ArqState::Kind::Acked:
      if (s.ack == s.seq) return {{1, ArqState::ready(s.seq + 1)}};
      return {{1, ArqState::ready(s.seq)}};
  }
  throw std::logic_error("transition_kernel: unknown state");
}

namespace {

using ArqNode = ProgramNode<ArqModel, Unit>;

ArqNode send_node(std::int64_t seq);

ArqNode await_node(std::int64_t seq) {
  return node_emit<ArqModel, Unit>(wait_op(seq), [seq](const ArqResult& r) {
    const WaitRes w = expect_wait_result(r);
    if (!w.is_ack) return send_node(seq);  // timed out: retransmit
    if (w.ack_num == seq) {
      return node_emit<ArqModel, Unit>(
          proceed_op(seq, w.ack_num),
          [](const ArqResult&) { return node_done<ArqModel, Unit>(Unit{}); });
    }
    return node_emit<ArqModel, Unit>(
        retry_op(seq, w.ack_num),
        [seq](const ArqResult&) { return send_node(seq); });
  });
}

ArqNode send_node(std::int64_t seq) {
  return node_emit<ArqModel, Unit>(
      send_op(seq), [seq](const ArqResult&) { return await_node(seq); });
}

}  // namespace

Program<ArqModel, Unit> send_packet_prog(std::int64_t seq) {
  return {ArqState::ready(seq),
          [seq](const Unit&) { return ArqState::ready(seq + 1); },
          send_node(seq)};
}

Program<ArqModel, Unit> send_three_prog() {
  return prog_then(send_packet_prog(0),
                   prog_then(send_packet_prog(1), send_packet_prog(2)));
}

}  // namespace ismpbt::arq
