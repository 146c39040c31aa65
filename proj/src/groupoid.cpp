#include "qdl/groupoid.hpp"

#include <functional>
#include <map>
#include <random>

#include "qdl/errors.hpp"

namespace qdl {

std::string GaussianRational::str() const { return re.get_str() + (sgn(im) < 0 ? "" : "+") + im.get_str() + "i"; }

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) { return {a.re + b.re, a.im + b.im}; }
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) { return {a.re - b.re, a.im - b.im}; }
GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  mpq_class n = b.re * b.re + b.im * b.im;
  if (sgn(n) == 0) throw Error(ErrorKind::Validation, "division by zero");
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

void RatioPoint::validate() const {
  if (x1.is_zero() || x2.is_zero()) throw Error(ErrorKind::Validation, "ratio coordinates must be nonzero");
}
bool operator==(const RatioPoint& a, const RatioPoint& b) { return a.x1 == b.x1 && a.x2 == b.x2; }

std::pair<RatioPoint, RatioPoint> flip(const RatioPoint& x, const RatioPoint& y) {
  GaussianRational d = x.x1 * y.x2 + x.x2;
  if (d.is_zero()) throw Error(ErrorKind::DegenerateFlip, "x1 y2 + x2 = 0");
  return {{x.x1 * y.x1, d}, {y.x1 * x.x2 / d, y.x2 / d}};
}

RatioPoint corner_change(const RatioPoint& x) {
  x.validate();
  return {x.x2 / x.x1, GaussianRational(1) / x.x1};
}

GaussianRational ptolemy(const GaussianRational& a, const GaussianRational& b, const GaussianRational& c,
                         const GaussianRational& d, const GaussianRational& lambda) {
  if (lambda.is_zero()) throw Error(ErrorKind::Validation, "lambda must be nonzero");
  GaussianRational s = a * c + b * d;
  if (s.is_zero()) throw Error(ErrorKind::DegenerateQuad, "ac + bd = 0");
  return s / lambda;
}

RatioPoint Quad::x() const { return {delta / e, alpha / e}; }
RatioPoint Quad::y() const { return {e / gamma, beta / gamma}; }
RatioPoint Quad::x_flipped() const {
  GaussianRational f = ptolemy(alpha, beta, gamma, delta, e);
  return {delta / gamma, f / gamma};
}
RatioPoint Quad::y_flipped() const {
  GaussianRational f = ptolemy(alpha, beta, gamma, delta, e);
  return {alpha / f, beta / f};
}

bool GroupoidReport::pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return true;
}

GaussianRational random_gaussian_rational(unsigned long long& state) {
  std::mt19937_64 rng(state);
  state = rng();
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  for (;;) {
    GaussianRational g{mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng))};
    g.re.canonicalize();
    g.im.canonicalize();
    if (!g.is_zero()) return g;
  }
}

namespace {

using State = std::map<char, RatioPoint>;
using FlipFn = std::function<std::pair<RatioPoint, RatioPoint>(const RatioPoint&, const RatioPoint&)>;

State W(State s, char i, char j, const FlipFn& fl) {
  auto [a, b] = fl(s.at(i), s.at(j));
  s[i] = a;
  s[j] = b;
  return s;
}
State R(State s, char i) {
  s[i] = corner_change(s.at(i));
  return s;
}
State P(State s, char i, char j) {
  std::swap(s.at(i), s.at(j));
  return s;
}

std::string show(const State& s) {
  std::string out;
  for (auto& [k, v] : s) out += std::string(1, k) + "=(" + v.x1.str() + "," + v.x2.str() + ") ";
  return out;
}

RatioPoint random_point(unsigned long long& st) { return {random_gaussian_rational(st), random_gaussian_rational(st)}; }

// Forward-mode first-order dual numbers over Gaussian rationals.
struct Dual {
  GaussianRational v;
  std::array<GaussianRational, 4> d;
};
Dual operator+(const Dual& a, const Dual& b) {
  Dual r{a.v + b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r{a.v * b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual operator/(const Dual& a, const Dual& b) {
  Dual r{a.v / b.v, {}};
  GaussianRational b2 = b.v * b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / b2;
  return r;
}
Dual var(const GaussianRational& v, int i) {
  Dual r{v, {0, 0, 0, 0}};
  r.d[i] = 1;
  return r;
}
Dual constant(long c) { return {GaussianRational(c), {0, 0, 0, 0}}; }

// coefficient of dlog a ^ dlog b, pulled back to the 4 input directions
using Form = std::array<std::array<GaussianRational, 4>, 4>;
Form wedge_dlog(const Dual& a, const Dual& b) {
  Form f;
  GaussianRational s = GaussianRational(1) / (a.v * b.v);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) f[p][q] = s * (a.d[p] * b.d[q] - a.d[q] * b.d[p]);
  return f;
}
Form operator+(const Form& a, const Form& b) {
  Form f;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) f[p][q] = a[p][q] + b[p][q];
  return f;
}
bool operator==(const Form& a, const Form& b) {
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (!(a[p][q] == b[p][q])) return false;
  return true;
}

template <class Body>
GroupoidCheck run(const std::string& name, int n, unsigned long long st, Body body) {
  GroupoidCheck c;
  c.name = name;
  for (int s = 0; s < n; ++s) {
    try {
      if (!body(st, c)) {
        c.pass = false;
        return c;
      }
      ++c.samples;
    } catch (const Error& e) {
      if (e.kind != ErrorKind::DegenerateFlip && e.kind != ErrorKind::DegenerateQuad && e.kind != ErrorKind::Validation) throw;
      ++c.skipped;
    }
  }
  return c;
}

}  // namespace

GroupoidReport check_groupoid(unsigned seed, int samples) {
  GroupoidReport rep;
  const FlipFn good = [](const RatioPoint& x, const RatioPoint& y) { return flip(x, y); };
  const FlipFn bad = [](const RatioPoint& x, const RatioPoint& y) {
    auto r = flip(x, y);
    r.first.x1 = -r.first.x1;
    return r;
  };
  unsigned long long base = seed;
  auto tri = [](unsigned long long& st) {
    return State{{'i', random_point(st)}, {'j', random_point(st)}, {'k', random_point(st)}};
  };

  rep.checks.push_back(run("cubic", samples, base + 1, [&](unsigned long long& st, GroupoidCheck& c) {
    RatioPoint x = random_point(st);
    if (corner_change(corner_change(corner_change(x))) == x) return true;
    c.witness = "(" + x.x1.str() + "," + x.x2.str() + ")";
    return false;
  }));
  rep.checks.push_back(run("pentagon", samples, base + 2, [&](unsigned long long& st, GroupoidCheck& c) {
    State s = tri(st);
    State l = W(W(W(s, 'i', 'j', good), 'i', 'k', good), 'j', 'k', good);
    State r = W(W(s, 'j', 'k', good), 'i', 'j', good);
    if (l == r) return true;
    c.witness = show(s);
    return false;
  }));
  rep.checks.push_back(run("inversion", samples, base + 3, [&](unsigned long long& st, GroupoidCheck& c) {
    State s = tri(st);
    State l = W(R(W(s, 'i', 'j', good), 'i'), 'j', 'i', good);
    State r = R(R(P(s, 'i', 'j'), 'j'), 'i');
    if (l == r) return true;
    c.witness = show(s);
    return false;
  }));
  rep.checks.push_back(run("ptolemy_flip", std::max(20, samples / 5), base + 4, [&](unsigned long long& st, GroupoidCheck& c) {
    Quad q{random_gaussian_rational(st), random_gaussian_rational(st), random_gaussian_rational(st),
           random_gaussian_rational(st), random_gaussian_rational(st)};
    auto [a, b] = flip(q.x(), q.y());
    if (a == q.x_flipped() && b == q.y_flipped()) return true;
    c.witness = "alpha=" + q.alpha.str() + " e=" + q.e.str();
    return false;
  }));
  rep.checks.push_back(run("form_flip", std::max(50, samples / 2), base + 5, [&](unsigned long long& st, GroupoidCheck& c) {
    RatioPoint x = random_point(st), y = random_point(st);
    Dual x1 = var(x.x1, 0), x2 = var(x.x2, 1), y1 = var(y.x1, 2), y2 = var(y.x2, 3);
    Dual d = x1 * y2 + x2;
    if (d.v.is_zero()) throw Error(ErrorKind::DegenerateFlip, "x1 y2 + x2 = 0");
    Dual a1 = x1 * y1, a2 = d, b1 = y1 * x2 / d, b2 = y2 / d;
    if (wedge_dlog(a1, a2) + wedge_dlog(b1, b2) == wedge_dlog(x1, x2) + wedge_dlog(y1, y2)) return true;
    c.witness = "x=(" + x.x1.str() + "," + x.x2.str() + ")";
    return false;
  }));
  rep.checks.push_back(run("form_corner_change", std::max(50, samples / 2), base + 6, [&](unsigned long long& st, GroupoidCheck& c) {
    RatioPoint x = random_point(st);
    Dual x1 = var(x.x1, 0), x2 = var(x.x2, 1);
    if (wedge_dlog(x2 / x1, constant(1) / x1) == wedge_dlog(x1, x2)) return true;
    c.witness = "x=(" + x.x1.str() + "," + x.x2.str() + ")";
    return false;
  }));
  // negative control: the sign-flipped map must be rejected on the first usable sample
  GroupoidCheck neg = run("negative_control", 1, base + 7, [&](unsigned long long& st, GroupoidCheck& c) {
    State s = tri(st);
    State l = W(W(W(s, 'i', 'j', bad), 'i', 'k', bad), 'j', 'k', bad);
    State r = W(W(s, 'j', 'k', bad), 'i', 'j', bad);
    if (!(l == r)) c.witness = "rejected at " + show(s);
    return true;
  });
  neg.pass = neg.witness.has_value();
  rep.checks.push_back(neg);
  return rep;
}

}  // namespace qdl
