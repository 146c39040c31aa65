#include "qdl/triangulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include "json.hpp"
#include <numeric>
#include <set>

namespace qdl {

using json = nlohmann::json;

int edge_index(int u, int v) {
  if (u > v) std::swap(u, v);
  for (int e = 0; e < 6; ++e)
    if (kTetEdges[e][0] == u && kTetEdges[e][1] == v) return e;
  throw Error(ErrorKind::Validation, "not a tetrahedron edge");
}

std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> r{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) r[k++] = v;
  return r;
}

double ShapedTet::angle_at(int e) const {
  switch (e) {
    case 0: case 5: return angles.a;
    case 1: case 4: return angles.b;
    default: return angles.c;
  }
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

std::string where(int t, int f) { return "tet " + std::to_string(t) + " face " + std::to_string(f); }

}  // namespace

void ShapedTriangulation::finalize() {
  check_modulus(N);
  Theta::from_arg(theta_arg);
  const int T = static_cast<int>(tets.size());
  for (int t = 0; t < T; ++t) {
    if (tets[t].sign != 1 && tets[t].sign != -1)
      throw Error(ErrorKind::Validation, "tet " + std::to_string(t) + ": sign must be 1 or -1");
    try {
      tets[t].angles.validate(1e-9);
    } catch (const Error& e) {
      throw Error(e.kind, "tet " + std::to_string(t) + ": " + e.what());
    }
  }
  std::set<std::pair<int, int>> used;
  for (const auto& g : gluings) {
    for (auto [t, f] : {std::pair{g.from_tet, g.from_face}, std::pair{g.to_tet, g.to_face}}) {
      if (t < 0 || t >= T || f < 0 || f > 3) throw Error(ErrorKind::Validation, "gluing refers to missing " + where(t, f));
      if (!used.insert({t, f}).second) throw Error(ErrorKind::Validation, where(t, f) + " glued more than once");
    }
    auto fv = face_vertices(g.to_face);
    auto img = g.vertex_map;
    std::sort(img.begin(), img.end());
    if (img != fv) throw Error(ErrorKind::Validation, where(g.from_tet, g.from_face) + ": vertex_map is not a bijection onto the target face");
  }
  UnionFind uf(6 * T);
  for (const auto& g : gluings) {
    auto A = face_vertices(g.from_face);
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l)
        uf.unite(6 * g.from_tet + edge_index(A[k], A[l]), 6 * g.to_tet + edge_index(g.vertex_map[k], g.vertex_map[l]));
  }
  std::map<int, int> label;
  edge_class.assign(T, {});
  for (int t = 0; t < T; ++t)
    for (int e = 0; e < 6; ++e) {
      int r = uf.find(6 * t + e);
      auto it = label.emplace(r, static_cast<int>(label.size())).first;
      edge_class[t][e] = it->second;
    }
  num_edges = static_cast<int>(label.size());
  edge_boundary.assign(num_edges, false);
  edge_angle_sum.assign(num_edges, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (used.count({t, f})) continue;
      auto A = face_vertices(f);
      for (int k = 0; k < 3; ++k)
        for (int l = k + 1; l < 3; ++l) edge_boundary[edge_class[t][edge_index(A[k], A[l])]] = true;
    }
    for (int e = 0; e < 6; ++e) edge_angle_sum[edge_class[t][e]] += tets[t].angle_at(e);
  }
}

std::vector<int> ShapedTriangulation::edge_valence() const {
  std::vector<int> v(num_edges, 0);
  for (const auto& row : edge_class)
    for (int c : row) ++v[c];
  return v;
}

bool ShapedTriangulation::closed() const { return gluings.size() * 2 == tets.size() * 4; }

double ShapedTriangulation::balance_defect() const {
  double d = 0.0;
  for (int e = 0; e < num_edges; ++e)
    if (!edge_boundary[e]) d = std::max(d, std::abs(edge_angle_sum[e] - 2.0));
  return d;
}

namespace {

template <class T>
T get_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw Error(ErrorKind::Schema, ctx + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Schema, ctx + ": field '" + key + "' has the wrong type");
  }
}

void only_fields(const json& j, std::initializer_list<const char*> keys, const std::string& ctx) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw Error(ErrorKind::Schema, ctx + ": unknown field '" + it.key() + "'");
  }
}

}  // namespace

ShapedTriangulation parse_triangulation(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
  }
  only_fields(j, {"N", "theta_arg_over_pi", "tets", "gluings"}, "document");
  ShapedTriangulation X;
  X.N = get_field<int>(j, "N", "document");
  X.theta_arg = get_field<double>(j, "theta_arg_over_pi", "document");
  auto tets = get_field<json>(j, "tets", "document");
  auto gls = get_field<json>(j, "gluings", "document");
  if (!tets.is_array() || !gls.is_array()) throw Error(ErrorKind::Schema, "document: tets and gluings must be arrays");
  for (std::size_t i = 0; i < tets.size(); ++i) {
    std::string ctx = "tet " + std::to_string(i);
    only_fields(tets[i], {"sign", "angles"}, ctx);
    ShapedTet t;
    t.sign = get_field<int>(tets[i], "sign", ctx);
    auto a = get_field<std::vector<double>>(tets[i], "angles", ctx);
    if (a.size() != 3) throw Error(ErrorKind::Schema, ctx + ": angles must have 3 entries");
    t.angles = {a[0], a[1], a[2]};
    X.tets.push_back(t);
  }
  for (std::size_t i = 0; i < gls.size(); ++i) {
    std::string ctx = "gluing " + std::to_string(i);
    only_fields(gls[i], {"from", "to", "vertex_map"}, ctx);
    auto from = get_field<std::vector<int>>(gls[i], "from", ctx);
    auto to = get_field<std::vector<int>>(gls[i], "to", ctx);
    auto vm = get_field<std::vector<int>>(gls[i], "vertex_map", ctx);
    if (from.size() != 2 || to.size() != 2 || vm.size() != 3) throw Error(ErrorKind::Schema, ctx + ": bad array length");
    X.gluings.push_back({from[0], from[1], to[0], to[1], {vm[0], vm[1], vm[2]}});
  }
  X.finalize();
  return X;
}

std::string serialize_triangulation(const ShapedTriangulation& X) {
  json j;
  j["N"] = X.N;
  j["theta_arg_over_pi"] = X.theta_arg;
  j["tets"] = json::array();
  for (const auto& t : X.tets) j["tets"].push_back({{"sign", t.sign}, {"angles", {t.angles.a, t.angles.b, t.angles.c}}});
  j["gluings"] = json::array();
  for (const auto& g : X.gluings)
    j["gluings"].push_back({{"from", {g.from_tet, g.from_face}},
                            {"to", {g.to_tet, g.to_face}},
                            {"vertex_map", {g.vertex_map[0], g.vertex_map[1], g.vertex_map[2]}}});
  return j.dump(2);
}

namespace {

// One tetrahedron of the 5-vertex simplex: omit position k of the order.
struct SubTet {
  int omit;
  std::array<int, 4> pos;  // positions in the 5-order, ascending
};

SubTet sub_tet(int k) {
  SubTet s{k, {}};
  int m = 0;
  for (int q = 0; q < 5; ++q)
    if (q != k) s.pos[m++] = q;
  return s;
}

int local_of(const SubTet& s, int q) {
  for (int m = 0; m < 4; ++m)
    if (s.pos[m] == q) return m;
  return -1;
}

// angle of a 5-simplex edge {q, r} in a tet given as positions
double angle_on(const SubTet& s, const ChargeTriple& a, int q, int r) {
  ShapedTet t{1, a};
  return t.angle_at(edge_index(local_of(s, q), local_of(s, r)));
}

// A gluing side pointing into a replaced tet gets rewritten through this.
struct SideMap {
  // old (tet, face) -> new (tet, face), and old local vertex -> new local vertex per face
  std::map<std::pair<int, int>, std::pair<int, int>> face;
  std::map<std::pair<int, int>, std::array<int, 4>> relabel;  // (old tet, old face) -> local relabel
};

std::vector<FaceGluing> rewire(const std::vector<FaceGluing>& old, const std::set<int>& drop, const SideMap& sm,
                               const std::vector<int>& tet_index) {
  std::vector<FaceGluing> out;
  for (std::size_t gi = 0; gi < old.size(); ++gi) {
    if (drop.count(static_cast<int>(gi))) continue;
    FaceGluing g = old[gi];
    auto fk = std::pair{g.from_tet, g.from_face};
    auto tk = std::pair{g.to_tet, g.to_face};
    FaceGluing n = g;
    if (auto it = sm.face.find(fk); it != sm.face.end()) {
      n.from_tet = it->second.first;
      n.from_face = it->second.second;
    } else {
      n.from_tet = tet_index[g.from_tet];
    }
    if (auto it = sm.face.find(tk); it != sm.face.end()) {
      n.to_tet = it->second.first;
      n.to_face = it->second.second;
      const auto& rl = sm.relabel.at(tk);
      for (int k = 0; k < 3; ++k) n.vertex_map[k] = rl[g.vertex_map[k]];
    } else {
      n.to_tet = tet_index[g.to_tet];
    }
    // from-side vertices stay ascending under monotone relabeling
    out.push_back(n);
  }
  return out;
}

struct AngleSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd r;
};

Eigen::VectorXd pick_in_family(const AngleSystem& sys, double t) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.A);
  Eigen::VectorXd u0 = lu.solve(sys.r);
  if ((sys.A * u0 - sys.r).norm() > 1e-10) throw Error(ErrorKind::Infeasible, "charge transfer equations are inconsistent");
  Eigen::MatrixXd K = lu.kernel();
  if (K.cols() == 1 && K.norm() == 0.0) return u0;  // unique
  if (K.cols() != 1) throw Error(ErrorKind::Infeasible, "charge transfer family is not one-dimensional");
  Eigen::VectorXd n = K.col(0) / K.col(0).norm();
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u0.size(); ++i) {
    if (std::abs(n(i)) < 1e-14) {
      if (!(u0(i) > 0)) throw Error(ErrorKind::Infeasible, "charge transfer forces a nonpositive angle");
      continue;
    }
    double s = -u0(i) / n(i);
    if (n(i) > 0) lo = std::max(lo, s);
    else hi = std::min(hi, s);
  }
  if (!(lo < hi)) throw Error(ErrorKind::Infeasible, "charge transfer has no positive solution");
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::Infeasible, "free charge parameter must lie in (0, 1)");
  return u0 + (lo + t * (hi - lo)) * n;
}

ChargeTriple triple_at(const Eigen::VectorXd& u, int k) {
  ChargeTriple c{u(3 * k), u(3 * k + 1), u(3 * k + 2)};
  // restore the exact sum lost to elimination
  c.b = 1.0 - c.a - c.c;
  return c;
}

}  // namespace

ShapedTriangulation pachner_23(const ShapedTriangulation& X, int gi, double tfree) {
  if (gi < 0 || gi >= static_cast<int>(X.gluings.size())) throw Error(ErrorKind::Topology, "no such gluing");
  const FaceGluing& g = X.gluings[gi];
  const int T0 = g.from_tet, T1 = g.to_tet;
  if (T0 == T1) throw Error(ErrorKind::Topology, "shared face must join two distinct tets");
  if (g.vertex_map != face_vertices(g.to_face))
    throw Error(ErrorKind::Topology, "2-3 move needs an order-preserving gluing on the shared face");
  // abstract vertices: 0 apex of T0, 1 apex of T1, 2..4 shared
  const int f0 = g.from_face, f1 = g.to_face;
  std::vector<int> ord = {2, 3, 4};
  ord.insert(ord.begin() + f1, 1);
  int gap0 = f0;  // apex of T0 goes before shared vertex f0
  auto at = std::find(ord.begin(), ord.end(), gap0 < 3 ? 2 + gap0 : -1);
  if (gap0 == 3) at = ord.end();
  ord.insert(at, 0);
  std::array<int, 5> pos{};
  for (int q = 0; q < 5; ++q) pos[ord[q]] = q;
  const int i = pos[1], j = pos[0];  // T0 omits apex of T1
  const int s0 = X.tets[T0].sign, s1 = X.tets[T1].sign;
  auto par = [](int k) { return (k % 2) ? -1 : 1; };
  if (s0 * par(i) != s1 * par(j)) throw Error(ErrorKind::Topology, "orientations across the shared face are inconsistent");
  const int eps = -s0 * par(i);
  // old local vertex -> position
  auto old_pos = [&](int which, int v) {
    int f = which == 0 ? f0 : f1;
    if (v == f) return pos[which];
    return pos[2 + (v < f ? v : v - 1)];
  };
  std::vector<int> ks;
  for (int k = 0; k < 5; ++k)
    if (k != i && k != j) ks.push_back(k);
  // new tet indices
  const int T = static_cast<int>(X.tets.size());
  std::vector<int> tet_index(T, -1);
  std::vector<int> newidx(3);
  newidx[0] = std::min(T0, T1);
  newidx[1] = std::max(T0, T1);
  newidx[2] = T;
  for (int t = 0; t < T; ++t) tet_index[t] = t;
  ShapedTriangulation Y;
  Y.N = X.N;
  Y.theta_arg = X.theta_arg;
  Y.tets = X.tets;
  Y.tets.resize(T + 1);
  std::array<SubTet, 3> st{sub_tet(ks[0]), sub_tet(ks[1]), sub_tet(ks[2])};
  std::array<SubTet, 2> ot{sub_tet(i), sub_tet(j)};
  // charges
  AngleSystem sys{Eigen::MatrixXd::Zero(13, 9), Eigen::VectorXd::Zero(13)};
  int row = 0;
  for (int m = 0; m < 3; ++m, ++row) {
    sys.A.block(row, 3 * m, 1, 3).setOnes();
    sys.r(row) = 1.0;
  }
  for (int q = 0; q < 5; ++q)
    for (int r = q + 1; r < 5; ++r, ++row) {
      for (int m = 0; m < 3; ++m) {
        if (st[m].omit == q || st[m].omit == r) continue;
        int e = edge_index(local_of(st[m], q), local_of(st[m], r));
        int slot = (e == 0 || e == 5) ? 0 : (e == 1 || e == 4) ? 1 : 2;
        sys.A(row, 3 * m + slot) += 1.0;
      }
      if ((q == i && r == j) || (q == j && r == i)) {
        sys.r(row) = 2.0;
        continue;
      }
      double old = 0.0;
      if (ot[0].omit != q && ot[0].omit != r) old += angle_on(ot[0], X.tets[T0].angles, q, r);
      if (ot[1].omit != q && ot[1].omit != r) old += angle_on(ot[1], X.tets[T1].angles, q, r);
      sys.r(row) = old;
    }
  Eigen::VectorXd u = pick_in_family(sys, tfree);
  for (int m = 0; m < 3; ++m) Y.tets[newidx[m]] = {eps * par(ks[m]), triple_at(u, m)};
  // outer faces
  SideMap sm;
  for (int which = 0; which < 2; ++which) {
    int tOld = which == 0 ? T0 : T1;
    int apexOther = which == 0 ? pos[1] : pos[0];
    for (int v = 0; v < 4; ++v) {
      if (v == (which == 0 ? f0 : f1)) continue;
      int q = old_pos(which, v);
      int m = static_cast<int>(std::find(ks.begin(), ks.end(), q) - ks.begin());
      sm.face[{tOld, v}] = {newidx[m], local_of(st[m], apexOther)};
      std::array<int, 4> rl{};
      for (int u2 = 0; u2 < 4; ++u2) rl[u2] = local_of(st[m], old_pos(which, u2));
      sm.relabel[{tOld, v}] = rl;
    }
  }
  Y.gluings = rewire(X.gluings, {gi}, sm, tet_index);
  for (int m = 0; m < 3; ++m)
    for (int l = m + 1; l < 3; ++l) {
      FaceGluing n;
      n.from_tet = newidx[m];
      n.from_face = local_of(st[m], ks[l]);
      n.to_tet = newidx[l];
      n.to_face = local_of(st[l], ks[m]);
      auto fv = face_vertices(n.from_face);
      for (int k = 0; k < 3; ++k) n.vertex_map[k] = local_of(st[l], st[m].pos[fv[k]]);
      Y.gluings.push_back(n);
    }
  Y.finalize();
  return Y;
}

ShapedTriangulation pachner_32(const ShapedTriangulation& X, int edge) {
  if (edge < 0 || edge >= X.num_edges) throw Error(ErrorKind::Topology, "no such edge");
  if (X.edge_boundary[edge]) throw Error(ErrorKind::Topology, "3-2 move needs an internal edge");
  std::vector<std::pair<int, int>> inc;  // (tet, local edge)
  for (int t = 0; t < static_cast<int>(X.tets.size()); ++t)
    for (int e = 0; e < 6; ++e)
      if (X.edge_class[t][e] == edge) inc.push_back({t, e});
  if (inc.size() != 3 || inc[0].first == inc[1].first || inc[1].first == inc[2].first || inc[0].first == inc[2].first)
    throw Error(ErrorKind::Topology, "3-2 move needs an edge of valence 3 in three distinct tets");
  std::array<int, 3> tt{inc[0].first, inc[1].first, inc[2].first};
  auto slot = [&](int t) { return static_cast<int>(std::find(tt.begin(), tt.end(), t) - tt.begin()); };
  auto contains_edge = [&](int t, int f) {
    auto [a, b] = kTetEdges[inc[slot(t)].second];
    return f != a && f != b;
  };
  // identify vertices across the three internal faces
  UnionFind uf(12);
  std::set<int> drop;
  for (std::size_t gi = 0; gi < X.gluings.size(); ++gi) {
    const auto& g = X.gluings[gi];
    int a = slot(g.from_tet), b = slot(g.to_tet);
    if (a > 2 || b > 2 || !contains_edge(g.from_tet, g.from_face) || !contains_edge(g.to_tet, g.to_face)) continue;
    drop.insert(static_cast<int>(gi));
    auto fv = face_vertices(g.from_face);
    for (int k = 0; k < 3; ++k) uf.unite(4 * a + fv[k], 4 * b + g.vertex_map[k]);
  }
  if (drop.size() != 3) throw Error(ErrorKind::Topology, "edge link is not a triangle of distinct faces");
  std::map<int, int> name;
  for (int v = 0; v < 12; ++v) name.emplace(uf.find(v), static_cast<int>(name.size()));
  if (name.size() != 5) throw Error(ErrorKind::Topology, "the three tets do not span five distinct vertices");
  auto nm = [&](int s, int v) { return name[uf.find(4 * s + v)]; };
  // total order from the three local orders
  std::array<std::array<bool, 5>, 5> less{};
  for (int s = 0; s < 3; ++s)
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) less[nm(s, u)][nm(s, v)] = true;
  std::array<int, 5> pos{};
  for (int a = 0; a < 5; ++a) {
    int c = 0;
    for (int b = 0; b < 5; ++b) {
      if (a == b) continue;
      if (less[a][b] && less[b][a]) throw Error(ErrorKind::Topology, "local vertex orders are incompatible");
      if (!less[a][b] && !less[b][a]) throw Error(ErrorKind::Topology, "local vertex orders do not determine a total order");
      c += less[b][a];
    }
    pos[a] = c;
  }
  auto [e0, e1] = kTetEdges[inc[0].second];
  int i = pos[nm(0, e0)], j = pos[nm(0, e1)];
  if (i > j) std::swap(i, j);
  std::array<SubTet, 3> st{};
  std::array<int, 3> kpos{};
  for (int s = 0; s < 3; ++s) {
    std::set<int> have;
    for (int v = 0; v < 4; ++v) have.insert(pos[nm(s, v)]);
    for (int q = 0; q < 5; ++q)
      if (!have.count(q)) kpos[s] = q;
    st[s] = sub_tet(kpos[s]);
  }
  auto par = [](int k) { return (k % 2) ? -1 : 1; };
  int eps = X.tets[tt[0]].sign * par(kpos[0]);
  for (int s = 1; s < 3; ++s)
    if (X.tets[tt[s]].sign * par(kpos[s]) != eps) throw Error(ErrorKind::Topology, "orientations around the edge are inconsistent");
  std::array<SubTet, 2> ot{sub_tet(i), sub_tet(j)};
  // old charges: least squares over the nine bipyramid edges and the tet sums
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(11, 6);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(11);
  int row = 0;
  for (int m = 0; m < 2; ++m, ++row) {
    A.block(row, 3 * m, 1, 3).setOnes();
    r(row) = 1.0;
  }
  for (int q = 0; q < 5; ++q)
    for (int w = q + 1; w < 5; ++w) {
      if (q == i && w == j) continue;
      for (int m = 0; m < 2; ++m) {
        if (ot[m].omit == q || ot[m].omit == w) continue;
        int e = edge_index(local_of(ot[m], q), local_of(ot[m], w));
        A(row, 3 * m + ((e == 0 || e == 5) ? 0 : (e == 1 || e == 4) ? 1 : 2)) += 1.0;
      }
      double s = 0.0;
      for (int m = 0; m < 3; ++m)
        if (st[m].omit != q && st[m].omit != w) s += angle_on(st[m], X.tets[tt[m]].angles, q, w);
      r(row++) = s;
    }
  Eigen::VectorXd u = A.colPivHouseholderQr().solve(r);
  if ((A * u - r).norm() > 1e-9) throw Error(ErrorKind::Infeasible, "3-2 charge transfer is inconsistent (edge not balanced)");
  for (int k = 0; k < 6; ++k)
    if (!(u(k) > 0)) throw Error(ErrorKind::Positivity, "3-2 charge transfer gives a nonpositive angle");
  // indices
  std::array<int, 3> sorted = tt;
  std::sort(sorted.begin(), sorted.end());
  const int T = static_cast<int>(X.tets.size());
  std::vector<int> tet_index(T, -1);
  for (int t = 0, n = 0; t < T; ++t) {
    if (t == sorted[2]) continue;
    tet_index[t] = n++;
  }
  int newT[2] = {tet_index[sorted[0]], tet_index[sorted[1]]};
  ShapedTriangulation Y;
  Y.N = X.N;
  Y.theta_arg = X.theta_arg;
  for (int t = 0; t < T; ++t)
    if (t != sorted[2]) Y.tets.push_back(X.tets[t]);
  for (int m = 0; m < 2; ++m) Y.tets[newT[m]] = {-eps * par(ot[m].omit), triple_at(u, m)};
  SideMap sm;
  for (int s = 0; s < 3; ++s) {
    for (int m = 0; m < 2; ++m) {
      // face of tt[s] omitting the apex that old tet m lacks
      int q = ot[m].omit;
      int v = -1;
      for (int w = 0; w < 4; ++w)
        if (pos[nm(s, w)] == q) v = w;
      sm.face[{tt[s], v}] = {newT[m], local_of(ot[m], kpos[s])};
      std::array<int, 4> rl{};
      for (int w = 0; w < 4; ++w) rl[w] = local_of(ot[m], pos[nm(s, w)]);
      sm.relabel[{tt[s], v}] = rl;
    }
  }
  Y.gluings = rewire(X.gluings, drop, sm, tet_index);
  FaceGluing shared;
  shared.from_tet = newT[0];
  shared.from_face = local_of(ot[0], j);
  shared.to_tet = newT[1];
  shared.to_face = local_of(ot[1], i);
  auto fv = face_vertices(shared.from_face);
  for (int k = 0; k < 3; ++k) shared.vertex_map[k] = local_of(ot[1], ot[0].pos[fv[k]]);
  Y.gluings.push_back(shared);
  Y.finalize();
  return Y;
}

namespace {

struct GlueKey {
  int t, f, t2, f2;
  std::array<int, 3> vm;
  auto operator<=>(const GlueKey&) const = default;
};

GlueKey canonical(const FaceGluing& g, const std::vector<int>& perm) {
  GlueKey k{perm[g.from_tet], g.from_face, perm[g.to_tet], g.to_face, g.vertex_map};
  if (std::pair{k.t2, k.f2} < std::pair{k.t, k.f}) {
    auto src = face_vertices(g.from_face);
    auto dst = face_vertices(g.to_face);
    std::array<int, 3> inv{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (g.vertex_map[a] == dst[b]) inv[b] = src[a];
    k = {perm[g.to_tet], g.to_face, perm[g.from_tet], g.from_face, inv};
  }
  return k;
}

}  // namespace

bool isomorphic(const ShapedTriangulation& A, const ShapedTriangulation& B, double tol) {
  if (A.N != B.N || A.tets.size() != B.tets.size() || A.gluings.size() != B.gluings.size()) return false;
  const int T = static_cast<int>(A.tets.size());
  if (T > 8) throw Error(ErrorKind::Validation, "isomorphism test limited to 8 tets");
  std::vector<int> id(T);
  std::iota(id.begin(), id.end(), 0);
  std::set<GlueKey> gb;
  for (const auto& g : B.gluings) gb.insert(canonical(g, id));
  std::vector<int> perm = id;
  do {
    bool ok = true;
    for (int t = 0; t < T && ok; ++t) {
      const auto& x = A.tets[t];
      const auto& y = B.tets[perm[t]];
      ok = x.sign == y.sign && std::abs(x.angles.a - y.angles.a) < tol && std::abs(x.angles.b - y.angles.b) < tol &&
           std::abs(x.angles.c - y.angles.c) < tol;
    }
    if (!ok) continue;
    std::set<GlueKey> ga;
    for (const auto& g : A.gluings) ga.insert(canonical(g, perm));
    if (ga == gb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

namespace {
Eigen::MatrixXd balance_matrix(const ShapedTriangulation& X) {
  const int T = static_cast<int>(X.tets.size());
  std::vector<int> internal;
  for (int e = 0; e < X.num_edges; ++e)
    if (!X.edge_boundary[e]) internal.push_back(e);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(T + static_cast<int>(internal.size()), 3 * T);
  for (int t = 0; t < T; ++t) {
    A.block(t, 3 * t, 1, 3).setOnes();
    for (int e = 0; e < 6; ++e) {
      auto it = std::find(internal.begin(), internal.end(), X.edge_class[t][e]);
      if (it == internal.end()) continue;
      int slot = (e == 0 || e == 5) ? 0 : (e == 1 || e == 4) ? 1 : 2;
      A(T + static_cast<int>(it - internal.begin()), 3 * t + slot) += 1.0;
    }
  }
  return A;
}
}  // namespace


namespace {
// orthonormal basis of the null space of A, signs fixed
std::vector<std::vector<double>> null_basis(const Eigen::MatrixXd& A) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  std::vector<std::vector<double>> out;
  if (lu.rank() == A.cols()) return out;
  Eigen::MatrixXd K = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(K.rows(), K.cols());
  for (int c = 0; c < Q.cols(); ++c) {
    int lead = 0;
    while (lead < Q.rows() && std::abs(Q(lead, c)) < 1e-12) ++lead;
    double sg = (lead < Q.rows() && Q(lead, c) < 0) ? -1.0 : 1.0;
    std::vector<double> v(Q.rows());
    for (int r = 0; r < Q.rows(); ++r) v[r] = sg * Q(r, c);
    out.push_back(v);
  }
  return out;
}
}  // namespace

std::vector<std::vector<double>> link_holonomy_functionals(const ShapedTriangulation& X) {
  if (!X.closed()) throw Error(ErrorKind::Topology, "vertex-link holonomy needs a closed triangulation");
  const int T = static_cast<int>(X.tets.size());
  // link triangle (t, v) -> node 4t + v; side f of it lies in face f of t
  struct Cross {
    int node, side_out, next, side_in;
  };
  std::vector<std::vector<Cross>> adj(4 * T);
  for (const auto& g : X.gluings) {
    auto fv = face_vertices(g.from_face);
    for (int k = 0; k < 3; ++k) {
      int a = 4 * g.from_tet + fv[k], b = 4 * g.to_tet + g.vertex_map[k];
      adj[a].push_back({a, g.from_face, b, g.to_face});
      adj[b].push_back({b, g.to_face, a, g.from_face});
    }
  }
  // spanning forest by BFS in index order
  std::vector<int> seen(4 * T, 0);
  std::vector<Cross> parent(4 * T, Cross{-1, -1, -1, -1});
  std::vector<std::pair<int, int>> tree;  // (node, adj slot) used
  std::set<std::tuple<int, int, int, int>> used;
  for (int r = 0; r < 4 * T; ++r) {
    if (seen[r]) continue;
    seen[r] = 1;
    std::vector<int> q{r};
    for (std::size_t h = 0; h < q.size(); ++h) {
      int a = q[h];
      for (const auto& c : adj[a]) {
        if (seen[c.next]) continue;
        seen[c.next] = 1;
        parent[c.next] = c;
        used.insert({a, c.side_out, c.next, c.side_in});
        used.insert({c.next, c.side_in, a, c.side_out});
        q.push_back(c.next);
      }
    }
  }
  auto path_to_root = [&](int a) {
    std::vector<Cross> up;  // crossings from a towards the root
    while (parent[a].node >= 0) {
      const Cross& c = parent[a];
      up.push_back({a, c.side_in, c.node, c.side_out});
      a = c.node;
    }
    return up;
  };
  auto coeff = [&](std::vector<double>& row, int node, int in, int out) {
    if (in == out) return;
    int t = node / 4, v = node % 4;
    int w = 6 - v - in - out;
    // ascending corners run counterclockwise when sign * (-1)^v = +1
    bool ccw_asc = X.tets[t].sign * ((v % 2) ? -1 : 1) > 0;
    auto cs = face_vertices(v);
    int ix = 0, iy = 0, iz = 0;
    for (int k = 0; k < 3; ++k) {
      if (cs[k] == in) ix = k;
      if (cs[k] == out) iy = k;
      if (cs[k] == w) iz = k;
    }
    bool cyclic = (iy == (ix + 1) % 3) && (iz == (ix + 2) % 3);
    double s = (cyclic == ccw_asc) ? -1.0 : 1.0;
    int e = edge_index(v, w);
    int slot = (e == 0 || e == 5) ? 0 : (e == 1 || e == 4) ? 1 : 2;
    row[3 * t + slot] += s;
  };
  std::vector<std::vector<double>> rows;
  std::set<std::tuple<int, int, int, int>> done;
  for (int a = 0; a < 4 * T; ++a)
    for (const auto& c : adj[a]) {
      auto key = std::make_tuple(a, c.side_out, c.next, c.side_in);
      if (used.count(key) || done.count(key)) continue;
      done.insert(key);
      done.insert({c.next, c.side_in, a, c.side_out});
      // root -> a, cross to c.next, c.next -> root
      std::vector<Cross> down = path_to_root(a);
      std::reverse(down.begin(), down.end());
      std::vector<Cross> seq;
      for (const auto& d : down) seq.push_back({d.next, d.side_in, d.node, d.side_out});
      seq.push_back(c);
      for (const auto& u : path_to_root(c.next)) seq.push_back(u);
      std::vector<double> row(3 * T, 0.0);
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const Cross& prev = seq[(k + seq.size() - 1) % seq.size()];
        coeff(row, seq[k].node, prev.side_in, seq[k].side_out);
      }
      rows.push_back(row);
    }
  return rows;
}

std::vector<std::vector<double>> balanced_kernel(const ShapedTriangulation& X) { return null_basis(balance_matrix(X)); }

std::vector<std::vector<double>> gauge_kernel(const ShapedTriangulation& X) {
  Eigen::MatrixXd B = balance_matrix(X);
  auto H = link_holonomy_functionals(X);
  Eigen::MatrixXd A(B.rows() + static_cast<Eigen::Index>(H.size()), B.cols());
  A.topRows(B.rows()) = B;
  for (std::size_t r = 0; r < H.size(); ++r)
    for (int c = 0; c < B.cols(); ++c) A(B.rows() + static_cast<Eigen::Index>(r), c) = H[r][c];
  return null_basis(A);
}

double positivity_margin(const ShapedTriangulation& X, const std::vector<double>& dir) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < X.tets.size(); ++t) {
    const auto& a = X.tets[t].angles;
    double v[3] = {a.a, a.b, a.c};
    for (int k = 0; k < 3; ++k) {
      double d = dir.at(3 * t + k);
      if (d < 0) m = std::min(m, v[k] / -d);
    }
  }
  return m;
}

ShapedTriangulation balanced_perturbation(const ShapedTriangulation& X, const std::vector<double>& dir, double eps) {
  const std::size_t n = 3 * X.tets.size();
  if (dir.size() != n) throw Error(ErrorKind::Validation, "direction has the wrong length");
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(dir.data(), static_cast<Eigen::Index>(n));
  if ((balance_matrix(X) * d).norm() > 1e-12 * std::max(1.0, d.norm()))
    throw Error(ErrorKind::Validation, "direction is not in the balanced kernel");
  if (eps == 0.0) return X;
  ShapedTriangulation Y = X;
  for (std::size_t t = 0; t < X.tets.size(); ++t) {
    auto& a = Y.tets[t].angles;
    a.a += eps * dir[3 * t];
    a.b += eps * dir[3 * t + 1];
    a.c += eps * dir[3 * t + 2];
    if (!(a.a > 0 && a.b > 0 && a.c > 0))
      throw Error(ErrorKind::Positivity, "perturbation leaves the positive shapes at tet " + std::to_string(t));
  }
  Y.finalize();
  return Y;
}

ShapedTriangulation relabel_tet(const ShapedTriangulation& X, int t, std::array<int, 4> perm) {
  if (t < 0 || t >= static_cast<int>(X.tets.size())) throw Error(ErrorKind::Validation, "no such tet");
  auto sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 4>{0, 1, 2, 3}) throw Error(ErrorKind::Validation, "relabeling must be a permutation");
  std::array<int, 4> inv{};  // old vertex -> new
  for (int k = 0; k < 4; ++k) inv[perm[k]] = k;
  int parity = 1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (perm[a] > perm[b]) parity = -parity;
  ShapedTriangulation Y = X;
  ShapedTet& T = Y.tets[t];
  const ShapedTet& O = X.tets[t];
  T.sign = O.sign * parity;
  double ang[3];
  for (int slot = 0; slot < 3; ++slot) {
    int e = slot + 1;  // edges 01, 02, 03 carry a, b, c
    ang[slot] = O.angle_at(edge_index(perm[kTetEdges[e][0]], perm[kTetEdges[e][1]]));
  }
  T.angles = {ang[0], ang[1], ang[2]};
  for (auto& g : Y.gluings) {
    if (g.to_tet == t) {
      g.to_face = inv[g.to_face];
      for (auto& v : g.vertex_map) v = inv[v];
    }
    if (g.from_tet == t) {
      // images listed for the ascending new vertices of the new face
      auto oldf = face_vertices(g.from_face);
      std::array<int, 3> img{};
      std::array<int, 3> newv{};
      for (int k = 0; k < 3; ++k) newv[k] = inv[oldf[k]];
      int nf = inv[g.from_face];
      auto fv = face_vertices(nf);
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m)
          if (newv[m] == fv[k]) img[k] = g.vertex_map[m];
      g.from_face = nf;
      g.vertex_map = img;
    }
  }
  // a gluing from t to itself had its to-side renamed before its images were permuted
  for (std::size_t gi = 0; gi < Y.gluings.size(); ++gi) {
    const auto& og = X.gluings[gi];
    auto& g = Y.gluings[gi];
    if (og.from_tet == t && og.to_tet == t) {
      auto oldf = face_vertices(og.from_face);
      auto fv = face_vertices(g.from_face);
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m)
          if (inv[oldf[m]] == fv[k]) g.vertex_map[k] = inv[og.vertex_map[m]];
    }
  }
  Y.finalize();
  return Y;
}

ShapedTriangulation flip_edge_orientation(const ShapedTriangulation& X, int edge) {
  if (edge < 0 || edge >= X.num_edges) throw Error(ErrorKind::Topology, "no such edge");
  std::vector<std::pair<int, std::array<int, 4>>> moves;
  for (int t = 0; t < static_cast<int>(X.tets.size()); ++t) {
    std::array<int, 4> out{};
    bool touched = false;
    for (int e = 0; e < 6; ++e) {
      auto [u, v] = kTetEdges[e];
      bool rev = X.edge_class[t][e] == edge;
      touched = touched || rev;
      ++out[rev ? v : u];
    }
    if (!touched) continue;
    std::array<int, 4> perm{-1, -1, -1, -1};
    for (int v = 0; v < 4; ++v) {
      int k = 3 - out[v];
      if (perm[k] != -1) throw Error(ErrorKind::Topology, "edge flip leaves tet " + std::to_string(t) + " without a vertex order");
      perm[k] = v;
    }
    moves.push_back({t, perm});
  }
  ShapedTriangulation Y = X;
  for (const auto& [t, perm] : moves) Y = relabel_tet(Y, t, perm);
  return Y;
}

std::vector<std::string> census_names() { return {"fig8_2tet", "fig8_3tet", "single_tet"}; }

ShapedTriangulation builtin_census(const std::string& name, int N, double theta_arg) {
  ShapedTriangulation X;
  X.N = N;
  X.theta_arg = theta_arg;
  const ChargeTriple reg{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  if (name == "single_tet") {
    X.tets = {{1, reg}};
    X.finalize();
    return X;
  }
  if (name == "fig8_2tet" || name == "fig8_3tet") {
    // face i of the positive tet meets face sigma(i) of the negative one
    const int sigma[4] = {2, 3, 0, 1};
    X.tets = {{1, reg}, {-1, reg}};
    for (int f = 0; f < 4; ++f) X.gluings.push_back({0, f, 1, sigma[f], face_vertices(sigma[f])});
    X.finalize();
    if (name == "fig8_3tet") return pachner_23(X, 0);
    return X;
  }
  throw Error(ErrorKind::UnknownName, "unknown census entry '" + name + "'");
}

}  // namespace qdl
