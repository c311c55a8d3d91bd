#pragma once

#include "rdeuler/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rd {

/// Mesh edge as seen from the triangle list. Boundary edges have right == -1;
/// on a periodic mesh they carry the index of their partner edge.
struct Edge
{
  std::array<int, 2> nodes{-1, -1};
  int left = -1;
  int left_local = -1;
  int right = -1;
  int right_local = -1;
  int partner = -1;
};

/// Interface between two element sides, either an internal edge or a
/// periodic couple. A point x on side 1 maps to x + shift in the frame of side 0.
struct Face
{
  std::array<int, 2> elem{-1, -1};
  std::array<int, 2> local{-1, -1};
  Vec2 shift;
  bool periodic = false;
};

struct Mesh
{
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;
  std::vector<Edge> edges;
  std::vector<Face> faces;

  std::vector<double> area;
  std::vector<double> diameter;
  std::vector<std::array<double, 3>> edge_length;
  /// unit outward normal of local edge e, which joins vertices e and (e+1)%3
  std::vector<std::array<Vec2, 3>> normal;
  /// face id and side (0/1) of each local edge, -1 on open boundary
  std::vector<std::array<int, 3>> face_of;
  std::vector<std::array<int, 3>> face_side;
  /// side-group id: face id, or n_faces + k for the k-th open boundary edge
  std::vector<std::array<int, 3>> side_group;
  int n_side_groups = 0;

  /// periodic node identification classes (compact ids)
  std::vector<int> node_class;
  int n_node_classes = 0;

  bool periodic = false;
  Vec2 lo, hi;

  int n_elems() const { return static_cast<int>(tris.size()); }
  Vec2 vertex(int k, int i) const { return nodes[tris[k][i]]; }
  /// neighbor across local edge e, its local edge index and the shift that maps
  /// neighbor coordinates into this element's frame
  bool neighbor(int k, int e, int &nb, int &nb_local, Vec2 &shift) const;
  double total_area() const;
  double domain_diameter() const { return norm(hi - lo); }
  double max_diameter() const;
};

struct MeshOptions
{
  bool periodic = false;
  /// matching tolerance relative to the bounding box size
  double periodic_tolerance = 1e-9;
};

Mesh build_mesh(const std::vector<Vec2> &raw_nodes,
                const std::vector<std::array<int, 3>> &raw_triangles,
                const MeshOptions &opt = {});

struct ShapeRegularity
{
  double min = 0.0;
  double max = 0.0;
};

ShapeRegularity shape_regularity(const Mesh &mesh);

Mesh read_mesh(std::istream &in);
Mesh read_mesh_file(const std::string &path);
void write_mesh(std::ostream &out, const Mesh &mesh);

/// FNV-1a hash of node coordinates and connectivity
std::uint64_t mesh_hash(const Mesh &mesh);

/// Periodic rectangle [x0, x0+lx] x [y0, y0+ly] with nx*ny cells split into two
/// triangles each. distortion moves interior nodes by a smooth periodic field
/// (amplitude as a fraction of the cell size) so the family stays nested.
Mesh periodic_rectangle(int nx, int ny, double x0, double y0, double lx, double ly,
                        double distortion = 0.0);

} // namespace rd
