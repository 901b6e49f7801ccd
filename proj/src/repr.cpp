#include "qfslice/repr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qfslice/errors.hpp"

namespace qfslice {

bool FNPoint::lambda_in_domain() const {
  constexpr double pi = std::numbers::pi;
  return lambda.real() > 0.0 && lambda.imag() > -pi && lambda.imag() < pi;
}

bool FNPoint::in_domain() const {
  constexpr double pi = std::numbers::pi;
  return lambda_in_domain() && tau.imag() >= -pi && tau.imag() < pi;
}

CharPoint psi_fn(const FNPoint& pt) {
  const Complex half = pt.lambda / 2.0;
  const Complex inv_tanh = 1.0 / std::tanh(half);
  return {2.0 * std::cosh(half), 2.0 * std::cosh(pt.tau / 2.0) * inv_tanh,
          2.0 * std::cosh((pt.tau + pt.lambda) / 2.0) * inv_tanh};
}

RepPair matrices(const FNPoint& pt) {
  const Complex e1 = std::exp(pt.lambda / 2.0);
  const Complex e1sq = e1 * e1;
  if (std::abs(e1sq - 1.0) <= 1e-12 || std::abs(e1sq + 1.0) <= 1e-12 || std::abs(e1) <= 1e-12) {
    throw DegenerateLength("e^{lambda/2} is degenerate at lambda = " + format_complex(pt.lambda));
  }
  const Complex t1 = std::exp(pt.tau);
  const Complex scale = 1.0 / (std::sqrt(t1) * (e1sq - 1.0));
  RepPair rep;
  rep.a = {e1, 2.0 / e1, Complex{0.0}, 1.0 / e1};
  rep.b = {scale * ((e1sq + 1.0) * t1 + 2.0), scale * (-2.0 * (t1 + 1.0)), scale * (1.0 - e1sq),
           scale * (e1sq - 1.0)};
  return rep;
}

Complex markov_residual(const CharPoint& c) {
  return c.x * c.x + c.y * c.y + c.z * c.z - c.x * c.y * c.z;
}

CharPoint h1_action(SignClass sign, const CharPoint& c) {
  CharPoint out = c;
  if (sign.flip_a) {
    out.x = -out.x;
    out.z = -out.z;
  }
  if (sign.flip_b) {
    out.y = -out.y;
    out.z = -out.z;
  }
  return out;
}

Mat2C evaluate_word(const Word& w, const RepPair& rep) {
  const Mat2C a_inv = rep.a.inverse();
  const Mat2C b_inv = rep.b.inverse();
  Mat2C out = Mat2C::identity();
  for (Letter x : w) {
    switch (x) {
      case Letter::a: out = out * rep.a; break;
      case Letter::A: out = out * a_inv; break;
      case Letter::b: out = out * rep.b; break;
      case Letter::B: out = out * b_inv; break;
    }
  }
  return out;
}

namespace {

// One signed real term, optionally followed by 'i'. Returns false on failure.
bool parse_term(std::string_view s, Complex& out) {
  if (s.empty()) return false;
  bool imag = false;
  if (s.back() == 'i' || s.back() == 'j') {
    imag = true;
    s.remove_suffix(1);
  }
  double sign = 1.0;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    sign = s.front() == '-' ? -1.0 : 1.0;
    s.remove_prefix(1);
  }
  double v = 1.0;
  if (s.empty()) {
    if (!imag) return false;
  } else {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return false;
  }
  out = imag ? Complex{0.0, sign * v} : Complex{sign * v, 0.0};
  return true;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const auto fail = [&] { return ParseError("malformed complex number '" + std::string(text) + "'"); };
  // Spaces are allowed at the ends and next to the sign between the parts.
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      s += ch;
      continue;
    }
    const auto prev = text.find_last_not_of(" \t", i);
    const auto next = text.find_first_not_of(" \t", i);
    const bool at_end = prev == std::string_view::npos || next == std::string_view::npos;
    const bool by_sign = (prev != std::string_view::npos && (text[prev] == '+' || text[prev] == '-')) ||
                         (next != std::string_view::npos && (text[next] == '+' || text[next] == '-'));
    if (!at_end && !by_sign) throw fail();
  }
  if (s.empty()) throw fail();
  // Split at a sign that is not the leading one and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }
  Complex total{0.0};
  if (split == std::string::npos) {
    if (!parse_term(s, total)) throw fail();
    return total;
  }
  Complex re_part;
  Complex im_part;
  const std::string_view sv(s);
  if (!parse_term(sv.substr(0, split), re_part) || !parse_term(sv.substr(split), im_part) ||
      re_part.imag() != 0.0 || im_part.real() != 0.0) {
    throw fail();
  }
  return re_part + im_part;
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace qfslice
