#include "qfslice/farey.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "qfslice/errors.hpp"

namespace qfslice {

namespace {

std::int64_t checked(std::int64_t v) {
  if (v > Slope::kMaxMagnitude || v < -Slope::kMaxMagnitude) {
    throw SlopeOverflow("slope component exceeds 2^60: " + std::to_string(v));
  }
  return v;
}

}  // namespace

Slope::Slope(std::int64_t p, std::int64_t q) {
  checked(p);
  checked(q);
  if (p == 0 && q == 0) throw std::invalid_argument("slope 0/0 is undefined");
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  p_ = p / g;
  q_ = q / g;
}

Slope Slope::parse(std::string_view text) {
  const auto bad = [&] { return ParseError("malformed slope '" + std::string(text) + "'"); };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw bad();
  std::int64_t p = 0;
  std::int64_t q = 0;
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
  auto r2 = std::from_chars(den.data(), den.data() + den.size(), q);
  if (r1.ec != std::errc{} || r1.ptr != num.data() + num.size() || r2.ec != std::errc{} ||
      r2.ptr != den.data() + den.size() || (p == 0 && q == 0)) {
    throw bad();
  }
  return Slope{p, q};
}

std::string Slope::str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

bool operator<(const Slope& lhs, const Slope& rhs) {
  if (lhs.is_infinity()) return false;
  if (rhs.is_infinity()) return true;
  return static_cast<__int128>(lhs.p_) * rhs.q_ < static_cast<__int128>(rhs.p_) * lhs.q_;
}

bool is_neighbor(const Slope& u, const Slope& v) {
  const __int128 d = static_cast<__int128>(u.p()) * v.q() - static_cast<__int128>(u.q()) * v.p();
  return d == 1 || d == -1;
}

Slope mediant_sum(const Slope& u, const Slope& v) {
  return Slope{checked(u.p() + v.p()), checked(u.q() + v.q())};
}

Slope mediant_difference(const Slope& u, const Slope& v) {
  return Slope{checked(u.p() - v.p()), checked(u.q() - v.q())};
}

bool FareyTriple::is_valid() const {
  return is_neighbor(v[0], v[1]) && is_neighbor(v[1], v[2]) && is_neighbor(v[0], v[2]);
}

FareyTriple flip(const FareyTriple& t, std::size_t index) {
  const Slope& u = t.v[(index + 1) % 3];
  const Slope& w = t.v[(index + 2) % 3];
  FareyTriple out = t;
  const Slope sum = mediant_sum(u, w);
  out.v[index] = (sum == t.v[index]) ? mediant_difference(u, w) : sum;
  return out;
}

std::vector<SternBrocotStep> stern_brocot_path(const Slope& s) {
  if (s.q() < 1) throw std::invalid_argument("stern_brocot_path needs q >= 1, got " + s.str());
  // floor(p/q) for q > 0
  std::int64_t n = s.p() / s.q();
  if (s.p() % s.q() != 0 && s.p() < 0) --n;
  if (s.q() == 1) {
    return {{Slope{n - 1, 1}, Slope::infinity(), s}};
  }
  std::vector<SternBrocotStep> path{{Slope{n, 1}, Slope::infinity(), Slope{n + 1, 1}}};
  Slope left{n, 1};
  Slope right{n + 1, 1};
  for (;;) {
    const Slope m = mediant_sum(left, right);
    path.push_back({left, right, m});
    if (m == s) break;
    if (s < m) {
      right = m;
    } else {
      left = m;
    }
  }
  return path;
}

Letter inverse(Letter x) {
  switch (x) {
    case Letter::a: return Letter::A;
    case Letter::A: return Letter::a;
    case Letter::b: return Letter::B;
    case Letter::B: return Letter::b;
  }
  return x;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == inverse(x)) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

std::string to_string(const Word& w) {
  std::string out;
  for (Letter x : w) {
    switch (x) {
      case Letter::a: out += 'a'; break;
      case Letter::A: out += 'A'; break;
      case Letter::b: out += 'b'; break;
      case Letter::B: out += 'B'; break;
    }
  }
  return out;
}

namespace {

Word integer_word(std::int64_t n) {
  Word w(static_cast<std::size_t>(n < 0 ? -n : n), n > 0 ? Letter::A : Letter::a);
  w.push_back(Letter::b);
  return w;
}

Word concat(const Word& x, const Word& y) {
  Word out = x;
  out.insert(out.end(), y.begin(), y.end());
  return free_reduce(out);
}

}  // namespace

Word special_word(const Slope& s) {
  if (s.is_infinity()) return {Letter::a};
  if (s.q() == 1) return integer_word(s.p());
  const auto path = stern_brocot_path(s);
  Word left = integer_word(path[1].left.p());
  Word right = integer_word(path[1].right.p());
  Word mediant;
  for (std::size_t i = 1; i < path.size(); ++i) {
    mediant = concat(right, left);
    if (i + 1 < path.size()) {
      if (path[i + 1].left == path[i].left) {
        right = mediant;
      } else {
        left = mediant;
      }
    }
  }
  return mediant;
}

Slope twist_slope(const IntMat2& m, const Slope& s) {
  if (m.a * m.d - m.b * m.c != 1) throw std::invalid_argument("twist matrix must have det 1");
  const __int128 p = static_cast<__int128>(m.a) * s.p() + static_cast<__int128>(m.b) * s.q();
  const __int128 q = static_cast<__int128>(m.c) * s.p() + static_cast<__int128>(m.d) * s.q();
  const __int128 lim = Slope::kMaxMagnitude;
  if (p > lim || p < -lim || q > lim || q < -lim) throw SlopeOverflow("twisted slope overflow");
  return Slope{static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)};
}

}  // namespace qfslice
