#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ismpbt/prng.hpp"

namespace ismpbt {

// Size parameter threaded to every generator (state-machine generators ignore it).
inline constexpr int kDefaultSize = 30;

// Ranges for the stock integer generators.
inline constexpr std::int64_t kIntLo = -100;
inline constexpr std::int64_t kIntHi = 100;
inline constexpr std::int64_t kNatHi = 100;

struct Unit {
  friend constexpr bool operator==(Unit, Unit) noexcept { return true; }
};

// A generator is a pure function of (size, rng): equal arguments always
// produce equal values.  All randomness flows through the explicit RngState.
template <typename T>
class Generator {
 public:
  using value_type = T;

  Generator() = default;
  explicit Generator(std::function<T(int, RngState)> run) : run_(std::move(run)) {}

  T run(int size, RngState rng) const { return run_(size, rng); }

 private:
  std::function<T(int, RngState)> run_;
};

template <typename T>
Generator<std::decay_t<T>> pure(T&& x) {
  using V = std::decay_t<T>;
  return Generator<V>([x = std::forward<T>(x)](int, RngState) { return x; });
}

// Monadic bind: the head generator consumes the left split branch, the
// continuation the right, so neither sees the other's draws.
template <typename T, typename K>
auto bind(Generator<T> g, K k) {
  using GU = std::invoke_result_t<K, T>;
  using U = typename GU::value_type;
  return Generator<U>([g = std::move(g), k = std::move(k)](int size, RngState r0) {
    auto [r1, r2] = rng_split(r0);
    return k(g.run(size, r1)).run(size, r2);
  });
}

// Pure post-processing of a generator's value; consumes no extra randomness.
template <typename T, typename F>
auto map(Generator<T> g, F f) {
  using U = std::invoke_result_t<F, T>;
  return Generator<U>([g = std::move(g), f = std::move(f)](int size, RngState r) {
    return f(g.run(size, r));
  });
}

// Uniform integer from the inclusive range [lo, hi].
inline Generator<std::int64_t> choose(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("choose: lo > hi");
  return Generator<std::int64_t>(
      [lo, hi](int, RngState r) { return rng_range(r, lo, hi).second; });
}

// Picks one generator uniformly, then runs it on a fresh split.
template <typename T>
Generator<T> one_of(std::vector<Generator<T>> gs) {
  if (gs.empty()) throw std::invalid_argument("one_of: empty choice list");
  return Generator<T>([gs = std::move(gs)](int size, RngState r0) {
    auto [r1, r2] = rng_split(r0);
    auto hi = static_cast<std::int64_t>(gs.size()) - 1;
    auto idx = static_cast<std::size_t>(rng_range(r1, 0, hi).second);
    return gs[idx].run(size, r2);
  });
}

// Picks a generator with probability proportional to its positive integer
// weight, then runs it on a fresh split.
template <typename T>
Generator<T> frequency(std::vector<std::pair<int, Generator<T>>> weighted) {
  if (weighted.empty()) throw std::invalid_argument("frequency: empty choice list");
  std::int64_t total = 0;
  for (const auto& [w, g] : weighted) {
    if (w < 1) throw std::invalid_argument("frequency: weights must be >= 1");
    total += w;
  }
  return Generator<T>([weighted = std::move(weighted), total](int size, RngState r0) {
    auto [r1, r2] = rng_split(r0);
    std::int64_t pick = rng_range(r1, 1, total).second;
    for (const auto& [w, g] : weighted) {
      if (pick <= w) return g.run(size, r2);
      pick -= w;
    }
    throw std::logic_error("frequency: cumulative walk overran the total");
  });
}

// Exactly n elements, each drawn on its own split, in generation order.
template <typename T>
Generator<std::vector<T>> vector_of(std::size_t n, Generator<T> g) {
  return Generator<std::vector<T>>([n, g = std::move(g)](int size, RngState r) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [r_elem, r_rest] = rng_split(r);
      out.push_back(g.run(size, r_elem));
      r = r_rest;
    }
    return out;
  });
}

// Declared length paired with the elements; the pair is validated so the two
// can never disagree, mirroring a length-indexed vector.
template <typename T>
struct SizedVector {
  std::size_t size = 0;
  std::vector<T> items;
};

template <typename T>
SizedVector<T> make_sized_vector(std::size_t n, std::vector<T> items) {
  if (items.size() != n) {
    throw std::invalid_argument("make_sized_vector: Mismatch between: " +
                                std::to_string(items.size()) + " and " +
                                std::to_string(n));
  }
  return SizedVector<T>{n, std::move(items)};
}

// Draws a length from len_gen, then that many elements from elem.
template <typename T>
Generator<SizedVector<T>> sized_vector_of(Generator<std::int64_t> len_gen,
                                          Generator<T> elem) {
  return bind(std::move(len_gen), [elem](std::int64_t n) {
    if (n < 0) throw std::invalid_argument("sized_vector_of: negative length");
    auto count = static_cast<std::size_t>(n);
    return map(vector_of(count, elem), [count](std::vector<T> items) {
      return make_sized_vector(count, std::move(items));
    });
  });
}

// Re-keys a generator's RNG path: one split branch per binary digit of key
// (least significant first) plus a terminal split, so distinct keys reach
// distinct states before g runs.
template <typename B>
Generator<B> variant(std::uint64_t key, Generator<B> g) {
  return Generator<B>([key, g = std::move(g)](int size, RngState r) {
    std::uint64_t k = key;
    while (k != 0) {
      auto [left, right] = rng_split(r);
      r = (k & 1) ? right : left;
      k >>= 1;
    }
    r = rng_split(r).second;
    return g.run(size, r);
  });
}

// Perturbs the codomain generator by an observed argument value, so that
// generated functions map unequal arguments through unequal RNG paths.
template <typename B>
Generator<B> coarbitrary(std::int64_t x, Generator<B> g) {
  // zigzag keeps negative arguments distinct from positive ones
  const auto key = (static_cast<std::uint64_t>(x) << 1) ^
                   static_cast<std::uint64_t>(x >> 63);
  return variant(key, std::move(g));
}

template <typename B>
Generator<B> coarbitrary(bool x, Generator<B> g) {
  return variant(x ? 1 : 0, std::move(g));
}

template <typename B>
Generator<B> coarbitrary(Unit, Generator<B> g) {
  return variant(0, std::move(g));
}

template <typename A1, typename A2, typename B>
Generator<B> coarbitrary(const std::pair<A1, A2>& p, Generator<B> g) {
  return coarbitrary(p.first, coarbitrary(p.second, std::move(g)));
}

// A pure total function produced by a generator.  The perturbation scheme,
// codomain generator, size and RngState it was built from are retained, so
// every application is reproducible.
template <typename A, typename B>
class GeneratedFn {
 public:
  using Perturb = std::function<Generator<B>(const A&, const Generator<B>&)>;

  GeneratedFn(Perturb perturb, Generator<B> codomain, int size, RngState rng)
      : perturb_(std::move(perturb)),
        codomain_(std::move(codomain)),
        size_(size),
        rng_(rng) {}

  B operator()(const A& x) const { return perturb_(x, codomain_).run(size_, rng_); }

  int origin_size() const { return size_; }
  RngState origin_rng() const { return rng_; }

 private:
  Perturb perturb_;
  Generator<B> codomain_;
  int size_ = kDefaultSize;
  RngState rng_;
};

// Promotes a perturbation scheme plus codomain generator to a generator of
// pure functions A -> B; the produced function captures the (size, rng) it
// was generated at.
template <typename A, typename B>
Generator<GeneratedFn<A, B>> function_of(typename GeneratedFn<A, B>::Perturb perturb,
                                         Generator<B> g) {
  return Generator<GeneratedFn<A, B>>(
      [perturb = std::move(perturb), g = std::move(g)](int size, RngState r) {
        return GeneratedFn<A, B>(perturb, g, size, r);
      });
}

inline Generator<std::int64_t> arbitrary_int() { return choose(kIntLo, kIntHi); }

inline Generator<std::int64_t> arbitrary_nat() { return choose(0, kNatHi); }

inline Generator<std::uint8_t> arbitrary_byte() {
  return map(choose(0, 255),
             [](std::int64_t v) { return static_cast<std::uint8_t>(v); });
}

inline Generator<bool> arbitrary_bool() {
  return map(choose(0, 1), [](std::int64_t v) { return v == 1; });
}

inline Generator<Unit> arbitrary_unit() { return pure(Unit{}); }

}  // namespace ismpbt
