#include "doctest.h"
#include "qdl/errors.hpp"
#include "qdl/groupoid.hpp"

using namespace qdl;

namespace {
GaussianRational q(long n, long d = 1) { return {mpq_class(n, d), 0}; }
}  // namespace

TEST_CASE("flip values") {
  auto [x, y] = flip({q(1), q(1)}, {q(1), q(1)});
  CHECK(x == RatioPoint{q(1), q(2)});
  CHECK(y == RatioPoint{q(1, 2), q(1, 2)});
  try {
    flip({q(1), q(-1)}, {q(1), q(1)});
    FAIL("expected DegenerateFlip");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::DegenerateFlip);
  }
  CHECK_THROWS_AS((RatioPoint{q(1), q(0)}.validate()), Error);
}

TEST_CASE("corner change") {
  RatioPoint one{q(1), q(1)};
  CHECK(corner_change(one) == one);
  RatioPoint x{q(2), q(3)};
  RatioPoint a = corner_change(x), b = corner_change(a), c = corner_change(b);
  CHECK(a == RatioPoint{q(3, 2), q(1, 2)});
  CHECK(b == RatioPoint{q(1, 3), q(2, 3)});
  CHECK(c == x);
  RatioPoint z{{mpq_class(1, 2), mpq_class(3)}, {mpq_class(-2), mpq_class(1, 5)}};
  RatioPoint zc{z.x1.conj(), z.x2.conj()};
  RatioPoint w = corner_change(z);
  CHECK(corner_change(zc) == RatioPoint{w.x1.conj(), w.x2.conj()});
}

TEST_CASE("ptolemy") {
  CHECK(ptolemy(q(1), q(1), q(1), q(1), q(1)) == q(2));
  try {
    ptolemy(q(1), q(1), q(1), q(-1), q(1));
    FAIL("expected DegenerateQuad");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::DegenerateQuad);
  }
}

TEST_CASE("relations over gaussian rationals") {
  GroupoidReport r = check_groupoid(2024, 100);
  for (auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    if (c.name != "negative_control") CHECK(c.samples >= (c.name == "ptolemy_flip" ? 20 : 50));
  }
  CHECK(r.pass());
}

TEST_CASE("arithmetic is exact") {
  GaussianRational a{mpq_class(1, 3), mpq_class(-2, 7)}, b{mpq_class(5, 2), mpq_class(1, 9)};
  CHECK((a * b) / b == a);
  CHECK((a + b) - b == a);
  CHECK_THROWS_AS(a / GaussianRational(0), Error);
}
