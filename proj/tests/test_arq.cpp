#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "ismpbt/models/arq.hpp"
#include "ismpbt/runner.hpp"
#include "sample.hpp"

using namespace ismpbt;
using namespace ismpbt::arq;
using ismpbt_test::sample_n;

TEST_CASE("waiting resolves to a retransmit or a recorded ack") {
  CHECK(wait_next(3, WaitRes::timeout()) == ArqState::ready(3));
  CHECK(wait_next(3, WaitRes::ack(3)) == ArqState::acked(3, 3));
  CHECK(wait_next(3, WaitRes::ack(7)) == ArqState::acked(3, 7));
}

TEST_CASE("constructors and guard ops validate their payloads") {
  CHECK_THROWS_AS(WaitRes::ack(-1), std::invalid_argument);
  CHECK_THROWS_AS(ArqState::ready(-1), std::invalid_argument);
  CHECK_THROWS_AS(ArqState::waiting(-2), std::invalid_argument);
  CHECK_THROWS_AS(ArqState::acked(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(proceed_op(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(retry_op(2, 2), std::invalid_argument);
  CHECK(proceed_op(2, 2).from_state == ArqState::acked(2, 2));
  CHECK(retry_op(2, 5).from_state == ArqState::acked(2, 5));
}

TEST_CASE("states, ops, and results render in constructor form") {
  CHECK(ArqModel::render_state(ArqState::ready(0)) == "Ready 0");
  CHECK(ArqModel::render_state(ArqState::waiting(2)) == "Waiting 2");
  CHECK(ArqModel::render_state(ArqState::acked(1, 1)) == "Acked 1 1");
  CHECK(render_arq_op(ArqOp::send(Pkt{kPayload, 0})) == "Send (Pkt 255 0)");
  CHECK(render_arq_op(ArqOp::wait()) == "Wait");
  CHECK(render_arq_op(ArqOp::proceed()) == "Proceed");
  CHECK(render_arq_op(ArqOp::retry()) == "Retry");
  CHECK(render_arq_result(ArqResult{WaitRes::ack(3)}) == "Ack 3");
  CHECK(render_arq_result(ArqResult{WaitRes::timeout()}) == "Timeout");
  CHECK(render_arq_result(ArqResult{Unit{}}) == "()");
}

TEST_CASE("only Wait needs an environment result") {
  CHECK_FALSE(ArqModel::fixed_result(ArqOp::wait()).has_value());
  CHECK(ArqModel::fixed_result(ArqOp::send(Pkt{})) == ArqResult{Unit{}});
  CHECK(ArqModel::fixed_result(ArqOp::proceed()) == ArqResult{Unit{}});
  CHECK(ArqModel::fixed_result(ArqOp::retry()) == ArqResult{Unit{}});
  CHECK(expect_wait_result(ArqResult{WaitRes::timeout()}) == WaitRes::timeout());
  CHECK_THROWS_AS(expect_wait_result(ArqResult{Unit{}}), std::runtime_error);
}

TEST_CASE("Ready always sends the packet carrying its sequence number") {
  for (const auto& d : sample_n(ArqModel::options(ArqState::ready(4)), 50, 301)) {
    CHECK(d.spec.op == ArqOp::send(Pkt{kPayload, 4}));
    CHECK(d.spec.next_state(d.result) == ArqState::waiting(4));
  }
}

TEST_CASE("the waiting channel mixes echoes, strays, and timeouts 15:1:4") {
  const auto draws = sample_n(ArqModel::options(ArqState::waiting(2)), 10000, 302);
  long timeout = 0;
  long echo = 0;
  long stray = 0;
  for (const auto& d : draws) {
    REQUIRE(d.spec.op == ArqOp::wait());
    const WaitRes w = expect_wait_result(d.result);
    if (!w.is_ack) {
      ++timeout;
    } else if (w.ack_num == 2) {
      ++echo;
    } else {
      ++stray;
      CHECK(w.ack_num >= 0);
      CHECK(w.ack_num <= kNatHi);
    }
  }
  // 3-sigma binomial bounds: p = 4/20, 15/20 + (1/20)(1/101), (1/20)(100/101)
  CHECK(std::abs(timeout - 2000.0) <= 120.0);
  CHECK(std::abs(echo - 7504.95) <= 129.8);
  CHECK(std::abs(stray - 495.05) <= 65.1);
}

TEST_CASE("Acked offers exactly the guard op its ack allows") {
  const auto matched = sample_n(ArqModel::options(ArqState::acked(1, 1)), 20, 303);
  for (const auto& d : matched) {
    CHECK(d.spec.op == ArqOp::proceed());
    CHECK(d.spec.next_state(d.result) == ArqState::ready(2));
  }
  const auto mismatched = sample_n(ArqModel::options(ArqState::acked(1, 9)), 20, 304);
  for (const auto& d : mismatched) {
    CHECK(d.spec.op == ArqOp::retry());
    CHECK(d.spec.next_state(d.result) == ArqState::ready(1));
  }
}

TEST_CASE("generated traces respect guards, chaining, and sequence moves") {
  const auto traces = sample_n(gen_trace<ArqModel>(ArqState::ready(0), 20), 2000, 305);
  for (const auto& t : traces) {
    ArqState current = t.init_state;
    for (const auto& s : t.steps) {
      CHECK(s.op_res.spec.from_state == current);
      const ArqState next = s.op_res.spec.next_state(s.op_res.result);
      CHECK(next == s.result_state);
      switch (s.op_res.spec.op.kind) {
        case ArqOp::Kind::Send:
          CHECK(current.kind == ArqState::Kind::Ready);
          CHECK(s.op_res.spec.op.pkt == Pkt{kPayload, current.seq});
          break;
        case ArqOp::Kind::Wait:
          CHECK(next == wait_next(current.seq, expect_wait_result(s.op_res.result)));
          break;
        case ArqOp::Kind::Proceed:
          CHECK(current.kind == ArqState::Kind::Acked);
          CHECK(current.ack == current.seq);
          CHECK(next == ArqState::ready(current.seq + 1));
          break;
        case ArqOp::Kind::Retry:
          CHECK(current.kind == ArqState::Kind::Acked);
          CHECK(current.ack != current.seq);
          CHECK(next == ArqState::ready(current.seq));
          break;
      }
      CHECK(next.seq >= current.seq);  // the window never moves backwards
      current = next;
    }
  }
}

TEST_CASE("a packet is sent until the channel acknowledges it") {
  const auto prog = send_packet_prog(0);

  const auto clean = run_program(prog, scripted_env<ArqModel>({ArqResult{WaitRes::ack(0)}}));
  CHECK(clean.status == RunStatus::Success);
  CHECK(clean.state == ArqState::ready(1));
  CHECK(clean.executed.size() == 3);  // send, wait, proceed

  const auto after_timeout = run_program(
      prog, scripted_env<ArqModel>(
                {ArqResult{WaitRes::timeout()}, ArqResult{WaitRes::ack(0)}}));
  CHECK(after_timeout.status == RunStatus::Success);
  CHECK(after_timeout.executed.size() == 5);  // send, wait, send, wait, proceed

  const auto after_stray = run_program(
      prog, scripted_env<ArqModel>({ArqResult{WaitRes::ack(7)}, ArqResult{WaitRes::ack(0)}}));
  CHECK(after_stray.status == RunStatus::Success);
  REQUIRE(after_stray.executed.size() == 6);  // send, wait, retry, send, wait, proceed
  CHECK(after_stray.executed[2].op_res.spec.op == ArqOp::retry());
}

TEST_CASE("three deliveries chain through Ready 0..3") {
  const auto prog = send_three_prog();
  CHECK(prog.start_state == ArqState::ready(0));
  const auto out = run_program(
      prog, scripted_env<ArqModel>({ArqResult{WaitRes::ack(0)}, ArqResult{WaitRes::ack(1)},
                                    ArqResult{WaitRes::ack(2)}}));
  CHECK(out.status == RunStatus::Success);
  CHECK(out.state == ArqState::ready(3));
  REQUIRE(out.executed.size() == 9);
  const auto as_trace = make_trace<ArqModel>(ArqState::ready(0), out.executed);
  CHECK(prop_send_three_ok(as_trace));
  CHECK(render_trace(as_trace).find("Ready 3") != std::string::npos);

  // driven by the model's own channel it still terminates at a pinned seed
  const auto noisy = run_program(prog, model_env<ArqModel>(99));
  CHECK(noisy.status == RunStatus::Success);
  CHECK(noisy.state == ArqState::ready(3));
}

TEST_CASE("a misdeclared final state is reported tail-only") {
  const Program<ArqModel, Unit> empty{
      ArqState::ready(0), [](const Unit&) { return ArqState::ready(1); },
      node_done<ArqModel, Unit>(Unit{})};
  const auto out = run_program(empty, constant_env<ArqModel>(ArqResult{Unit{}}));
  CHECK(out.status == RunStatus::TransitionMismatch);
  CHECK(out.message == "Mismatch between: 1 and 0");
}

TEST_CASE("send-three holds exactly when some step reaches Ready 3") {
  std::vector<TraceStep<ArqModel>> stalls;
  ArqState cur = ArqState::ready(0);
  for (int i = 0; i < 10; ++i) {
    if (cur.kind == ArqState::Kind::Ready) {
      stalls.push_back(make_step(OpRes<ArqModel>{send_op(cur.seq), ArqResult{Unit{}}}));
    } else {
      stalls.push_back(
          make_step(OpRes<ArqModel>{wait_op(cur.seq), ArqResult{WaitRes::timeout()}}));
    }
    cur = stalls.back().result_state;
  }
  CHECK_FALSE(prop_send_three_ok(make_trace<ArqModel>(ArqState::ready(0), stalls)));
}

TEST_CASE("declared transition weights match the channel exactly") {
  const auto ready_row = transition_kernel(ArqState::ready(5), AckDomain::Range0To100);
  REQUIRE(ready_row.size() == 1);
  CHECK(ready_row[0] == std::pair{Rational(1), ArqState::waiting(5)});

  const auto ranged = transition_kernel(ArqState::waiting(2), AckDomain::Range0To100);
  REQUIRE(ranged.size() == 3);
  CHECK(ranged[0] == std::pair{Rational(1, 5), ArqState::ready(2)});
  CHECK(ranged[1] == std::pair{Rational(379, 505), ArqState::acked(2, 2)});
  CHECK(ranged[2] == std::pair{Rational(5, 101), ArqState::acked(2, 3)});

  const auto unbounded = transition_kernel(ArqState::waiting(2), AckDomain::Unbounded);
  REQUIRE(unbounded.size() == 3);
  CHECK(unbounded[0] == std::pair{Rational(1, 5), ArqState::ready(2)});
  CHECK(unbounded[1] == std::pair{Rational(3, 4), ArqState::acked(2, 2)});
  CHECK(unbounded[2] == std::pair{Rational(1, 20), ArqState::acked(2, 3)});

  // a sequence number beyond the ack range can never collide
  const auto high = transition_kernel(ArqState::waiting(200), AckDomain::Range0To100);
  CHECK(high[1] == std::pair{Rational(3, 4), ArqState::acked(200, 200)});

  CHECK(transition_kernel(ArqState::acked(1, 1), AckDomain::Unbounded) ==
        std::vector{std::pair{Rational(1), ArqState::ready(2)}});
  CHECK(transition_kernel(ArqState::acked(1, 5), AckDomain::Unbounded) ==
        std::vector{std::pair{Rational(1), ArqState::ready(1)}});
}
