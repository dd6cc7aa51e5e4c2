#pragma once

// Macro library. Every macro expects the heads it touches on cell 0 and
// leaves them there, and keeps tape contents contiguous (no blank before the
// last symbol). Exact step costs are given next to each macro in `cost`.

#include <string_view>

#include "sopt/program.hpp"

namespace sopt::macros {

using namespace sopt::ops;

/// Head back to cell 0. From head position h: 2h + 1 steps.
inline Block rewind(std::size_t t) { return {while_not_start(t, {left(t)})}; }

/// Blank out the content and rewind. Content length n: 5n + 2 steps.
inline Block erase(std::size_t t) {
  return seq(Block{while_sym(t, symset::kBit, {write(t, Sym::Blank), right(t)})}, rewind(t));
}

/// Writes `bits` onto an empty tape. 4k + 1 steps for k bits.
inline Block write_literal(std::size_t t, std::string_view bits) {
  Block b;
  for (char c : bits) {
    b.push_back(write(t, c == '1' ? Sym::One : Sym::Zero));
    b.push_back(right(t));
  }
  return seq(b, rewind(t));
}

/// dst := src. |src| = n, |dst| = d beforehand: 5d + 9n + 5 steps.
inline Block copy(std::size_t src, std::size_t dst) {
  return seq(erase(dst),
             Block{while_sym(src, symset::kBit,
                             {if_sym(src, symset::kZero, {write(dst, Sym::Zero)}, {write(dst, Sym::One)}), right(src),
                              right(dst)})},
             rewind(src), rewind(dst));
}

/// dst := s^{|src|} for a fixed symbol s. 5d + 8n + 5 steps.
inline Block copy_as(std::size_t src, std::size_t dst, Sym s) {
  return seq(erase(dst), Block{while_sym(src, symset::kBit, {write(dst, s), right(src), right(dst)})}, rewind(src),
             rewind(dst));
}

/// Least-significant-first binary increment ("111" -> "0001").
/// j trailing ones at the low end: 5j + 3 steps.
inline Block increment(std::size_t t) {
  return seq(Block{while_sym(t, symset::kOne, {write(t, Sym::Zero), right(t)}), write(t, Sym::One)}, rewind(t));
}

/// Least-significant-first binary decrement, saturating at zero.
/// j low zeros followed by a one: 5j + 4 steps.
inline Block decrement(std::size_t t) {
  return {while_sym(t, symset::kZero, {write(t, Sym::One), right(t)}),
          if_sym(t, symset::kOne, seq(Block{write(t, Sym::Zero)}, rewind(t)),
                 // Ran off the end: the value was zero, undo the borrow.
                 {if_start(t, {}, {left(t), loop({write(t, Sym::Zero), if_start(t, {brk()}, {left(t)})})})})};
}

/// Branch on |a| vs |b|; heads are rewound before the chosen block runs.
/// min(|a|,|b|) = k: 8k + 4 steps plus the block.
inline Block length_compare(std::size_t a, std::size_t b, Block less, Block equal, Block greater) {
  return {compare(a, b, std::move(less), std::move(equal), std::move(greater))};
}

/// Runs `body` |c| times (unary count). The body must not touch tape c.
/// n iterations: n * (cost(body) + 2) + 2n + 2 steps.
inline Block repeat_n(std::size_t c, Block body) {
  body.push_back(right(c));
  return seq(Block{while_sym(c, symset::kBit, std::move(body))}, rewind(c));
}

/// Next string in shortlex order with the low bit first: flip the ones to
/// zeros, then the first zero (or the blank past the end) becomes one/zero.
/// Enumerates eps, 0, 1, 00, 10, 01, 11, 000, ...
inline Block next_string(std::size_t t) {
  return seq(Block{while_sym(t, symset::kOne, {write(t, Sym::Zero), right(t)}),
                   if_sym(t, symset::kZero, {write(t, Sym::One)}, {write(t, Sym::Zero)})},
             rewind(t));
}

/// Drops the last symbol of a non-empty content.
inline Block drop_last(std::size_t t) {
  return seq(Block{while_sym(t, symset::kBit, {right(t)}), left(t), write(t, Sym::Blank)}, rewind(t));
}

/// Appends |src| copies of `s` at dst's current head, leaving dst's head at
/// the new end; src is rewound.
inline Block append_as(std::size_t src, std::size_t dst, Sym s) {
  return seq(Block{while_sym(src, symset::kBit, {write(dst, s), right(src), right(dst)})}, rewind(src));
}

/// Moves dst's head right once per symbol of src (unary head restore).
inline Block advance_by(std::size_t src, std::size_t dst) {
  return seq(Block{while_sym(src, symset::kBit, {right(src), right(dst)})}, rewind(src));
}

/// Rewinds t while recording its head position in unary on `counter`
/// (assumed empty); counter is left rewound.
inline Block rewind_counting(std::size_t t, std::size_t counter) {
  return seq(Block{while_not_start(t, {left(t), write(counter, Sym::One), right(counter)})}, rewind(counter));
}

}  // namespace sopt::macros

namespace sopt::cost {

inline Natural rewind(Natural h) { return 2 * h + 1; }
inline Natural erase(Natural n) { return 5 * n + 2; }
inline Natural write_literal(Natural k) { return 4 * k + 1; }
inline Natural copy(Natural n, Natural d) { return 5 * d + 9 * n + 5; }
inline Natural copy_as(Natural n, Natural d) { return 5 * d + 8 * n + 5; }
inline Natural increment(Natural low_ones) { return 5 * low_ones + 3; }
inline Natural decrement(Natural low_zeros) { return 5 * low_zeros + 4; }
inline Natural length_compare(Natural shorter) { return 8 * shorter + 4; }

}  // namespace sopt::cost
