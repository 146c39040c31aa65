#pragma once

#include <array>
#include <string>
#include <vector>

#include "qdl/charged.hpp"

namespace qdl {

// Local edges of an ordered tetrahedron, in this order.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
int edge_index(int u, int v);
// Face f: the three vertices other than f, ascending.
std::array<int, 3> face_vertices(int f);

struct ShapedTet {
  int sign = 1;
  ChargeTriple angles;  // a on 01/23, b on 02/13, c on 03/12

  double angle_at(int edge) const;
};

struct FaceGluing {
  int from_tet = 0, from_face = 0, to_tet = 0, to_face = 0;
  std::array<int, 3> vertex_map{};  // images of the ascending vertices of from_face
};

struct ShapedTriangulation {
  int N = 1;
  double theta_arg = 1.0 / 3.0;
  std::vector<ShapedTet> tets;
  std::vector<FaceGluing> gluings;

  // derived
  std::vector<std::array<int, 6>> edge_class;  // per tet, per local edge
  int num_edges = 0;
  std::vector<bool> edge_boundary;  // class touches an unglued face
  std::vector<double> edge_angle_sum;

  // Checks gluing data and fills the derived fields.
  void finalize();
  std::vector<int> edge_valence() const;
  bool closed() const;
  // Max |angle sum - 2| over internal edges.
  double balance_defect() const;
};

ShapedTriangulation parse_triangulation(const std::string& json_text);
std::string serialize_triangulation(const ShapedTriangulation& X);

// Shaped 2-3 move across gluing index g; new charges are the midpoint of the
// one-parameter family that keeps old edge sums and balances the new edge.
ShapedTriangulation pachner_23(const ShapedTriangulation& X, int gluing, double t = 0.5);
// Inverse move on an internal edge of valence 3 lying in three distinct tets.
ShapedTriangulation pachner_32(const ShapedTriangulation& X, int edge);
// Isomorphism of ordered triangulations: a tet permutation carrying tets,
// shapes and gluings onto each other.
bool isomorphic(const ShapedTriangulation& A, const ShapedTriangulation& B, double tol = 1e-12);

// Reorders the vertices of tet t: new local vertex k is old vertex perm[k].
// The sign picks up the parity of perm; angles and gluings follow.
ShapedTriangulation relabel_tet(const ShapedTriangulation& X, int t, std::array<int, 4> perm);

// Reverses the orientation of every tet-edge in an edge class and reorders
// the affected tets accordingly; TopologyError if a tet loses its total order.
ShapedTriangulation flip_edge_orientation(const ShapedTriangulation& X, int edge);

// Orthonormal basis of angle directions (3 per tet) keeping every tet sum and
// every internal edge sum fixed.
std::vector<std::vector<double>> balanced_kernel(const ShapedTriangulation& X);
// Linear parts of the angle holonomies of a cycle basis of the dual graph of
// the vertex links (closed triangulations). Rows have 3 entries per tet.
std::vector<std::vector<double>> link_holonomy_functionals(const ShapedTriangulation& X);
// Balanced directions that also keep every vertex-link angle holonomy fixed.
std::vector<std::vector<double>> gauge_kernel(const ShapedTriangulation& X);
// Largest eps with all angles of X + eps*dir strictly positive.
double positivity_margin(const ShapedTriangulation& X, const std::vector<double>& dir);
ShapedTriangulation balanced_perturbation(const ShapedTriangulation& X, const std::vector<double>& dir, double eps);

ShapedTriangulation builtin_census(const std::string& name, int N = 1, double theta_arg = 1.0 / 3.0);
std::vector<std::string> census_names();

}  // namespace qdl
