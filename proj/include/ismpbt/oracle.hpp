#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ismpbt/rational.hpp"

namespace ismpbt {

// Exact transition distribution of one state, declared by a model.
template <typename State>
using TransitionKernel =
    std::function<std::vector<std::pair<Rational, State>>(const State&)>;

// Finite view of the chain reachable from init: every state discovered
// within `depth` steps carries its exact outgoing row; the frontier's
// successors are listed without rows (the DP never expands them).
template <typename State>
struct MarkovView {
  std::vector<State> states;
  std::vector<std::optional<std::vector<std::pair<Rational, std::size_t>>>> rows;
  std::size_t init_index = 0;
  int depth = 0;

  std::optional<std::size_t> index_of(const State& s) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == s) return i;
    }
    return std::nullopt;
  }
};

// Enumerates the reachable chain breadth-first.  Duplicate targets within a
// row are merged; zero-probability entries are dropped; every row must sum
// to exactly one.
template <typename State>
MarkovView<State> markov_view(const TransitionKernel<State>& kernel, const State& init,
                              int depth) {
  if (depth < 0) throw std::invalid_argument("markov_view: negative depth");
  MarkovView<State> mv;
  mv.depth = depth;
  mv.states.push_back(init);
  mv.rows.emplace_back(std::nullopt);
  std::deque<std::pair<std::size_t, int>> queue{{0, 0}};  // (state index, level)
  while (!queue.empty()) {
    const auto [i, level] = queue.front();
    queue.pop_front();
    if (level >= depth || mv.rows[i].has_value()) continue;
    std::vector<std::pair<Rational, std::size_t>> row;
    Rational total = 0;
    for (const auto& [p, target] : kernel(mv.states[i])) {
      if (p < 0) throw std::invalid_argument("markov_view: negative probability");
      if (p == 0) continue;
      total += p;
      std::size_t j;
      if (auto found = mv.index_of(target)) {
        j = *found;
      } else {
        j = mv.states.size();
        mv.states.push_back(target);
        mv.rows.emplace_back(std::nullopt);
      }
      bool merged = false;
      for (auto& [q, k] : row) {
        if (k == j) {
          q += p;
          merged = true;
          break;
        }
      }
      if (!merged) row.emplace_back(p, j);
      queue.emplace_back(j, level + 1);
    }
    if (total != 1) {
      throw std::invalid_argument("markov_view: row probabilities do not sum to 1");
    }
    mv.rows[i] = std::move(row);
  }
  return mv;
}

// Exact probability that a depth-step trajectory from init enters a target
// state at some step.  Only step results count: the init state itself never
// counts as a visit, so depth 0 is always 0.
template <typename State>
Rational visit_probability(const MarkovView<State>& mv, const State& init,
                           const std::function<bool(const State&)>& target, int depth) {
  if (depth < 0) throw std::invalid_argument("visit_probability: negative depth");
  if (depth > mv.depth) {
    throw std::invalid_argument("visit_probability: depth exceeds the view horizon");
  }
  const auto start = mv.index_of(init);
  if (!start) throw std::invalid_argument("visit_probability: init not in the view");
  std::vector<std::vector<std::optional<Rational>>> memo(
      static_cast<std::size_t>(depth) + 1,
      std::vector<std::optional<Rational>>(mv.states.size()));
  const std::function<Rational(std::size_t, int)> rec = [&](std::size_t i,
                                                            int d) -> Rational {
    if (d == 0) return Rational(0);
    auto& slot = memo[static_cast<std::size_t>(d)][i];
    if (slot) return *slot;
    if (!mv.rows[i]) {
      throw std::logic_error("visit_probability: reached an unexpanded state");
    }
    Rational acc = 0;
    for (const auto& [p, j] : *mv.rows[i]) {
      acc += p * (target(mv.states[j]) ? Rational(1) : rec(j, d - 1));
    }
    slot = acc;
    return acc;
  };
  return rec(*start, depth);
}

}  // namespace ismpbt
