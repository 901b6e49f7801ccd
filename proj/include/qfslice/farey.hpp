#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qfslice {

// Slope p/q of an essential simple closed curve, canonical: gcd(|p|, q) = 1,
// q >= 0, and 1/0 is the only slope with q = 0.
class Slope {
 public:
  static constexpr std::int64_t kMaxMagnitude = std::int64_t{1} << 60;

  constexpr Slope() = default;
  // Canonicalizes (p, q) and (-p, -q) to the same slope. Throws
  // std::invalid_argument for (0, 0), SlopeOverflow beyond 2^60.
  Slope(std::int64_t p, std::int64_t q);

  static constexpr Slope infinity() { return Slope{}; }
  static Slope parse(std::string_view text);

  constexpr std::int64_t p() const { return p_; }
  constexpr std::int64_t q() const { return q_; }
  constexpr bool is_infinity() const { return q_ == 0; }
  std::string str() const;

  friend constexpr bool operator==(const Slope&, const Slope&) = default;
  // Order on Q u {inf}, with 1/0 as the largest element.
  friend bool operator<(const Slope& lhs, const Slope& rhs);

 private:
  std::int64_t p_ = 1;
  std::int64_t q_ = 0;
};

bool is_neighbor(const Slope& u, const Slope& v);

// (p+r)/(q+s) and (p-r)/(q-s) on homology vectors, canonicalized.
Slope mediant_sum(const Slope& u, const Slope& v);
Slope mediant_difference(const Slope& u, const Slope& v);

struct FareyTriple {
  std::array<Slope, 3> v;

  bool is_valid() const;
  const Slope& operator[](std::size_t i) const { return v[i]; }
  friend bool operator==(const FareyTriple&, const FareyTriple&) = default;
};

// Replaces vertex `index` by the other triangle across the opposite edge.
FareyTriple flip(const FareyTriple& t, std::size_t index);

// Triangles {left, right, mediant} with mediant = left (+) right.
struct SternBrocotStep {
  Slope left, right, mediant;
  FareyTriple triple() const { return {{left, right, mediant}}; }
  friend bool operator==(const SternBrocotStep&, const SternBrocotStep&) = default;
};

// Path of mediant refinements ending at the triangle whose mediant is `s`.
// Starts at {n/1, 1/0, (n+1)/1}; integers need no refinement. Requires q >= 1.
std::vector<SternBrocotStep> stern_brocot_path(const Slope& s);

enum class Letter : std::uint8_t { a, A, b, B };  // A = a^-1, B = b^-1

using Word = std::vector<Letter>;

Letter inverse(Letter x);
Word free_reduce(const Word& w);
std::string to_string(const Word& w);

// g_{1/0} = a, g_{n/1} = a^{-n} b, g_{mediant} = g_{right} g_{left}.
Word special_word(const Slope& s);

struct IntMat2 {
  std::int64_t a, b, c, d;
};

inline constexpr IntMat2 kTwist10{1, 1, 0, 1};   // right Dehn twist along 1/0
inline constexpr IntMat2 kTwist01{1, 0, -1, 1};  // right Dehn twist along 0/1

// Image of the homology class (p, q) under m. Requires det m = 1.
Slope twist_slope(const IntMat2& m, const Slope& s);

}  // namespace qfslice
