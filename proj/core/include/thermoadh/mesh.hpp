#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "thermoadh/types.hpp"

namespace thermoadh::mesh {

/// Boundary parts: Clamped is the Dirichlet part (u = 0), Traction carries
/// the surface load g, Contact is the adhesive surface.
enum class BoundaryTag : unsigned char { Clamped, Traction, Contact };

std::string_view to_string(BoundaryTag tag);
/// Accepts "clamped" | "traction" | "contact"; throws MeshError otherwise.
BoundaryTag parse_tag(std::string_view name);

enum class Side : unsigned char { Bottom, Right, Top, Left };
std::string_view to_string(Side side);
Side parse_side(std::string_view name);

struct BoundaryEdge {
  std::array<int, 2> v;  ///< counter-clockwise along the boundary
  BoundaryTag tag;
  Point normal;          ///< outward unit normal
  double length;
};

struct BodyMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< positively oriented
  std::vector<BoundaryEdge> boundary_edges;

  double boundary_length(BoundaryTag tag) const;
  double area() const;
};

/// Retagging of the sub-interval [from, to] (fractions of the side length,
/// measured counter-clockwise) of one side.
struct TagOverride {
  Side side;
  double from;
  double to;
  BoundaryTag tag;
};

struct RectGeometry {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  /// Indexed by Side. Default: bottom contact, top clamped, sides traction.
  std::array<BoundaryTag, 4> side_tags{BoundaryTag::Contact, BoundaryTag::Traction,
                                       BoundaryTag::Clamped, BoundaryTag::Traction};
  std::vector<TagOverride> overrides;
};

/// Structured triangulation of the rectangle, each cell split along its
/// lower-left/upper-right diagonal. Throws MeshError if nx or ny < 2, if the
/// extents are degenerate, or if the clamped or contact part is empty.
BodyMesh build_rect_mesh(int nx, int ny, const RectGeometry& geometry = {});

struct SurfaceMesh {
  std::vector<Point> nodes;                   ///< bit-identical to parent vertices
  std::vector<double> arclength;              ///< curvilinear abscissa of each node
  std::vector<std::array<int, 2>> segments;   ///< consecutive node pairs
  std::vector<int> parent;                    ///< node -> body vertex
  std::vector<Point> segment_normal;          ///< outward normal of the body
  std::vector<double> segment_length;

  double length() const;
};

/// Orders the contact edges into one polyline. Throws MeshError when there
/// is no contact edge or the contact edges are not a single connected path.
SurfaceMesh extract_surface(const BodyMesh& m);

/// Per-triangle data used by every assembly loop.
struct TriangleGeom {
  std::array<int, 3> v;
  double area;
  std::array<Point, 3> grad;  ///< gradients of the three barycentric basis functions
};

struct SegmentGeom {
  std::array<int, 2> node;    ///< surface node indices
  std::array<int, 2> parent;  ///< body vertex indices
  double length;
  Point normal;
};

struct EdgeGeom {
  std::array<int, 2> v;
  double length;
  Point normal;
};

/// Piecewise-linear spaces: V_h (bulk scalars), W_h (bulk vectors vanishing
/// on the clamped part), S_h (scalars on the contact surface), and the
/// trace selectors V_h -> S_h and W_h -> S_h^2.
struct Spaces {
  std::shared_ptr<const BodyMesh> body;
  std::shared_ptr<const SurfaceMesh> surface;

  int n_v = 0;
  int n_w = 0;
  int n_s = 0;
  /// dof index of component c of vertex v at [2 v + c], or -1 when clamped.
  std::vector<int> w_dof;

  std::vector<TriangleGeom> triangles;
  std::vector<SegmentGeom> contact_segments;
  std::vector<EdgeGeom> traction_edges;

  SpMat trace_v;  ///< n_s x n_v
  SpMat trace_w;  ///< 2 n_s x n_w, rows 2 s + c
};

Spaces build_spaces(std::shared_ptr<const BodyMesh> body,
                    std::shared_ptr<const SurfaceMesh> surface);

/// Convenience: mesh, surface and spaces in one call.
Spaces build_rect_spaces(int nx, int ny, const RectGeometry& geometry = {});

/// Scatters a W_h coefficient vector to full nodal displacements
/// (2 n_v entries, zeros on the clamped part).
Vec expand_displacement(const Spaces& sp, const Vec& u);
/// Lifts S_h values to the parent body vertices (zero elsewhere).
Vec lift_surface(const Spaces& sp, const Vec& s);

/// Plain-text export: one record per line.
///   N <index> <x> <y>
///   T <index> <v0> <v1> <v2>
///   E <index> <v0> <v1> <tag>
///   S <index> <parent> <arclength>
void write_mesh(std::ostream& os, const BodyMesh& m, const SurfaceMesh* surface = nullptr);

}  // namespace thermoadh::mesh
