#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "qfslice/farey.hpp"
#include "qfslice/mobius.hpp"
#include "qfslice/repr.hpp"

namespace qfslice {

// Traces aligned with the vertices of a Farey triangle.
struct MarkovState {
  FareyTriple triple;
  std::array<Complex, 3> traces;
};

struct BqParams {
  // Edges are crossed only when one endpoint trace has modulus <= cutoff.
  double explore_cutoff = 2.0 + 1e-6;
  std::size_t node_cap = 20000;
  // Relative width of the band around the real axis treated as real.
  double real_band_eps = 1e-7;
  double saturation = 1e150;
  // A simple closed curve with |trace| below this cannot occur in a discrete
  // faithful group (Jorgensen's inequality against the puncture parabolic
  // gives |tr| >= 1/2). Zero disables the check.
  double jorgensen_bound = 0.5;

  bool is_valid() const;
};

enum class VerdictKind : std::uint8_t { NotQF = 0, QF = 1, Unknown = 2 };
enum class ViolationReason : std::uint8_t { None, RealInterval, EllipticTrace, SmallTrace };

struct BqVerdict {
  VerdictKind kind = VerdictKind::Unknown;
  // Set for NotQF: a slope whose trace lies in the forbidden real band, or
  // (SmallTrace) below the Jorgensen bound.
  Slope witness;
  ViolationReason reason = ViolationReason::None;
  Complex witness_trace;
  std::size_t nodes = 0;
};

std::string_view to_string(VerdictKind k);
std::string_view to_string(ViolationReason r);

// Base triangle (1/0, 0/1, 1/1) with traces psi_fn(pt).
MarkovState initial_state(const FNPoint& pt);

// Flips the vertex and replaces its trace by (product of the others) - old.
MarkovState flip_state(const MarkovState& s, std::size_t index);

// Follows decreasing flips (a flip whose new trace is strictly smaller in
// modulus than the one it replaces, largest decrease first) until none
// remains or max_steps flips were made.
MarkovState descend_to_sink(const MarkovState& s, std::size_t max_steps);

// Bowditch-condition search over the Farey tree starting from the sink of
// initial_state(pt). Deterministic for fixed inputs.
BqVerdict bq_test(const FNPoint& pt, const BqParams& params = {});

}  // namespace qfslice
