#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qdl {

struct GaussianRational {
  mpq_class re, im;

  GaussianRational() = default;
  GaussianRational(long a) : re(a), im(0) {}
  GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  std::string str() const;
};

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
// Throws Validation on division by zero.
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
bool operator==(const GaussianRational& a, const GaussianRational& b);

// Per-triangle ratio coordinates (x1, x2), both nonzero.
struct RatioPoint {
  GaussianRational x1, x2;
  void validate() const;
};
bool operator==(const RatioPoint& a, const RatioPoint& b);

// x' = x.y = (x1 y1, x1 y2 + x2), y' = x*y = (y1 x2 / d, y2 / d), d = x1 y2 + x2.
// DegenerateFlip when d = 0.
std::pair<RatioPoint, RatioPoint> flip(const RatioPoint& x, const RatioPoint& y);
// (x2/x1, 1/x1)
RatioPoint corner_change(const RatioPoint& x);
// (ac + bd)/lambda; DegenerateQuad when ac + bd = 0.
GaussianRational ptolemy(const GaussianRational& a, const GaussianRational& b, const GaussianRational& c,
                         const GaussianRational& d, const GaussianRational& lambda);

// Quadrilateral L, B, T, R (counterclockwise from the left) with diagonal BT.
// Sides alpha = LB, beta = BR, gamma = RT, delta = TL, e = BT.
// x: triangle LBT with corner L, y: triangle BRT with corner B.
// At a corner the coordinates are (incoming side, outgoing side) over the
// opposite side, sides traversed counterclockwise.
//
//        T                 T
//       /|\               / \
//      / | \             / x'\
//     L x|y R    -->    L-----R
//      \ | /             \ y'/
//       \|/               \ /
//        B                 B
struct Quad {
  GaussianRational alpha, beta, gamma, delta, e;
  RatioPoint x() const;
  RatioPoint y() const;
  // after the flip to diagonal LR with f = ptolemy(...)
  RatioPoint x_flipped() const;
  RatioPoint y_flipped() const;
};

struct GroupoidCheck {
  std::string name;
  int samples = 0;
  int skipped = 0;  // degenerate intermediate denominators
  bool pass = true;
  std::optional<std::string> witness;
};

struct GroupoidReport {
  std::vector<GroupoidCheck> checks;
  bool pass() const;
};

GaussianRational random_gaussian_rational(unsigned long long& state);

// All shipped checks; negative control passes when the wrong flip is rejected.
GroupoidReport check_groupoid(unsigned seed, int samples = 100);

}  // namespace qdl
