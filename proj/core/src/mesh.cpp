#include "thermoadh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "thermoadh/error.hpp"

namespace thermoadh::mesh {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Clamped: return "clamped";
    case BoundaryTag::Traction: return "traction";
    case BoundaryTag::Contact: return "contact";
  }
  return "?";
}

BoundaryTag parse_tag(std::string_view name) {
  if (name == "clamped") return BoundaryTag::Clamped;
  if (name == "traction") return BoundaryTag::Traction;
  if (name == "contact") return BoundaryTag::Contact;
  throw MeshError("unknown boundary tag '" + std::string(name) + "'");
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Bottom: return "bottom";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Left: return "left";
  }
  return "?";
}

Side parse_side(std::string_view name) {
  if (name == "bottom") return Side::Bottom;
  if (name == "right") return Side::Right;
  if (name == "top") return Side::Top;
  if (name == "left") return Side::Left;
  throw MeshError("unknown rectangle side '" + std::string(name) + "'");
}

double BodyMesh::boundary_length(BoundaryTag tag) const {
  double len = 0.0;
  for (const auto& e : boundary_edges)
    if (e.tag == tag) len += e.length;
  return len;
}

double BodyMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    const Point p0 = vertices[t[0]], p1 = vertices[t[1]], p2 = vertices[t[2]];
    a += 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
  }
  return a;
}

double SurfaceMesh::length() const {
  double len = 0.0;
  for (double l : segment_length) len += l;
  return len;
}

BodyMesh build_rect_mesh(int nx, int ny, const RectGeometry& g) {
  if (nx < 2 || ny < 2) throw MeshError("build_rect_mesh: nx and ny must be >= 2");
  if (!(g.x1 > g.x0) || !(g.y1 > g.y0)) throw MeshError("build_rect_mesh: degenerate extents");
  for (const auto& o : g.overrides)
    if (!(o.from >= 0.0 && o.to <= 1.0 && o.from < o.to))
      throw MeshError("build_rect_mesh: tag override interval must satisfy 0 <= from < to <= 1");

  BodyMesh m;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({g.x0 + (g.x1 - g.x0) * i / nx, g.y0 + (g.y1 - g.y0) * j / ny});

  m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }

  const auto tag_for = [&g](Side side, double frac) {
    BoundaryTag tag = g.side_tags[static_cast<int>(side)];
    for (const auto& o : g.overrides)
      if (o.side == side && frac >= o.from && frac <= o.to) tag = o.tag;
    return tag;
  };
  const double hx = (g.x1 - g.x0) / nx, hy = (g.y1 - g.y0) / ny;
  for (int i = 0; i < nx; ++i)
    m.boundary_edges.push_back({{vid(i, 0), vid(i + 1, 0)},
                                tag_for(Side::Bottom, (i + 0.5) / nx), {0.0, -1.0}, hx});
  for (int j = 0; j < ny; ++j)
    m.boundary_edges.push_back({{vid(nx, j), vid(nx, j + 1)},
                                tag_for(Side::Right, (j + 0.5) / ny), {1.0, 0.0}, hy});
  for (int i = nx - 1; i >= 0; --i)
    m.boundary_edges.push_back({{vid(i + 1, ny), vid(i, ny)},
                                tag_for(Side::Top, (nx - i - 0.5) / nx), {0.0, 1.0}, hx});
  for (int j = ny - 1; j >= 0; --j)
    m.boundary_edges.push_back({{vid(0, j + 1), vid(0, j)},
                                tag_for(Side::Left, (ny - j - 0.5) / ny), {-1.0, 0.0}, hy});

  if (!(m.boundary_length(BoundaryTag::Clamped) > 0.0))
    throw MeshError("build_rect_mesh: clamped boundary part is empty");
  if (!(m.boundary_length(BoundaryTag::Contact) > 0.0))
    throw MeshError("build_rect_mesh: contact boundary part is empty");
  return m;
}

SurfaceMesh extract_surface(const BodyMesh& m) {
  std::vector<int> contact;
  for (int e = 0; e < static_cast<int>(m.boundary_edges.size()); ++e)
    if (m.boundary_edges[e].tag == BoundaryTag::Contact) contact.push_back(e);
  if (contact.empty()) throw MeshError("extract_surface: no contact edge");

  std::map<int, int> edge_from;  // start vertex -> edge
  std::map<int, int> in_count;
  for (int e : contact) {
    const auto& be = m.boundary_edges[e];
    if (!edge_from.emplace(be.v[0], e).second)
      throw MeshError("extract_surface: contact edges branch");
    ++in_count[be.v[1]];
  }
  int start = -1;
  for (int e : contact) {
    const int v0 = m.boundary_edges[e].v[0];
    if (in_count.find(v0) == in_count.end()) {
      if (start != -1) throw MeshError("extract_surface: contact edges are not contiguous");
      start = v0;
    }
  }
  if (start == -1) throw MeshError("extract_surface: contact edges form a closed loop");

  SurfaceMesh s;
  int v = start;
  double arc = 0.0;
  s.nodes.push_back(m.vertices[v]);
  s.parent.push_back(v);
  s.arclength.push_back(0.0);
  for (std::size_t visited = 0; visited < contact.size(); ++visited) {
    const auto it = edge_from.find(v);
    if (it == edge_from.end()) throw MeshError("extract_surface: contact edges are not contiguous");
    const auto& be = m.boundary_edges[it->second];
    const int node = static_cast<int>(s.nodes.size());
    s.segments.push_back({node - 1, node});
    s.segment_normal.push_back(be.normal);
    s.segment_length.push_back(be.length);
    arc += be.length;
    v = be.v[1];
    s.nodes.push_back(m.vertices[v]);
    s.parent.push_back(v);
    s.arclength.push_back(arc);
  }
  return s;
}

Spaces build_spaces(std::shared_ptr<const BodyMesh> body,
                    std::shared_ptr<const SurfaceMesh> surface) {
  Spaces sp;
  sp.n_v = static_cast<int>(body->vertices.size());
  sp.n_s = static_cast<int>(surface->nodes.size());

  std::vector<char> clamped(static_cast<std::size_t>(sp.n_v), 0);
  for (const auto& e : body->boundary_edges)
    if (e.tag == BoundaryTag::Clamped) clamped[e.v[0]] = clamped[e.v[1]] = 1;
  sp.w_dof.assign(static_cast<std::size_t>(2 * sp.n_v), -1);
  for (int v = 0; v < sp.n_v; ++v)
    if (!clamped[v]) {
      sp.w_dof[2 * v] = sp.n_w++;
      sp.w_dof[2 * v + 1] = sp.n_w++;
    }

  sp.triangles.reserve(body->triangles.size());
  for (const auto& t : body->triangles) {
    const Point p0 = body->vertices[t[0]], p1 = body->vertices[t[1]], p2 = body->vertices[t[2]];
    const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (!(det > 0.0)) throw MeshError("build_spaces: triangle is not positively oriented");
    TriangleGeom tg;
    tg.v = t;
    tg.area = 0.5 * det;
    tg.grad[0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
    tg.grad[1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
    tg.grad[2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
    sp.triangles.push_back(tg);
  }

  for (std::size_t k = 0; k < surface->segments.size(); ++k) {
    const auto& seg = surface->segments[k];
    sp.contact_segments.push_back({seg,
                                   {surface->parent[seg[0]], surface->parent[seg[1]]},
                                   surface->segment_length[k],
                                   surface->segment_normal[k]});
  }
  for (const auto& e : body->boundary_edges)
    if (e.tag == BoundaryTag::Traction) sp.traction_edges.push_back({e.v, e.length, e.normal});

  std::vector<Triplet> tv, tw;
  for (int s = 0; s < sp.n_s; ++s) {
    const int v = surface->parent[s];
    tv.emplace_back(s, v, 1.0);
    for (int c = 0; c < 2; ++c)
      if (sp.w_dof[2 * v + c] >= 0) tw.emplace_back(2 * s + c, sp.w_dof[2 * v + c], 1.0);
  }
  sp.trace_v.resize(sp.n_s, sp.n_v);
  sp.trace_v.setFromTriplets(tv.begin(), tv.end());
  sp.trace_w.resize(2 * sp.n_s, sp.n_w);
  sp.trace_w.setFromTriplets(tw.begin(), tw.end());

  sp.body = std::move(body);
  sp.surface = std::move(surface);
  return sp;
}

Spaces build_rect_spaces(int nx, int ny, const RectGeometry& geometry) {
  auto body = std::make_shared<const BodyMesh>(build_rect_mesh(nx, ny, geometry));
  auto surface = std::make_shared<const SurfaceMesh>(extract_surface(*body));
  return build_spaces(std::move(body), std::move(surface));
}

Vec expand_displacement(const Spaces& sp, const Vec& u) {
  Vec full = Vec::Zero(2 * sp.n_v);
  for (int i = 0; i < 2 * sp.n_v; ++i)
    if (sp.w_dof[i] >= 0) full[i] = u[sp.w_dof[i]];
  return full;
}

Vec lift_surface(const Spaces& sp, const Vec& s) {
  Vec full = Vec::Zero(sp.n_v);
  for (int k = 0; k < sp.n_s; ++k) full[sp.surface->parent[k]] = s[k];
  return full;
}

void write_mesh(std::ostream& os, const BodyMesh& m, const SurfaceMesh* surface) {
  os.precision(17);
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    os << "N " << i << ' ' << m.vertices[i].x << ' ' << m.vertices[i].y << '\n';
  for (std::size_t i = 0; i < m.triangles.size(); ++i)
    os << "T " << i << ' ' << m.triangles[i][0] << ' ' << m.triangles[i][1] << ' '
       << m.triangles[i][2] << '\n';
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    const auto& e = m.boundary_edges[i];
    os << "E " << i << ' ' << e.v[0] << ' ' << e.v[1] << ' ' << to_string(e.tag) << '\n';
  }
  if (surface)
    for (std::size_t i = 0; i < surface->nodes.size(); ++i)
      os << "S " << i << ' ' << surface->parent[i] << ' ' << surface->arclength[i] << '\n';
}

}  // namespace thermoadh::mesh
