#include "rdeuler/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace rd {

const char *to_string(ErrorKind k)
{
  switch (k) {
  case ErrorKind::NonConforming: return "NonConforming";
  case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
  case ErrorKind::UnmatchedPeriodicEdge: return "UnmatchedPeriodicEdge";
  case ErrorKind::OutOfElement: return "OutOfElement";
  case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
  case ErrorKind::VacuumState: return "VacuumState";
  case ErrorKind::NonPositivePressure: return "NonPositivePressure";
  case ErrorKind::CflViolation: return "CFLViolation";
  case ErrorKind::AlphaTooSmall: return "AlphaTooSmall";
  case ErrorKind::PicardDivergence: return "PicardDivergence";
  case ErrorKind::ParachutePadFailure: return "ParachutePadFailure";
  case ErrorKind::MeshMismatch: return "MeshMismatch";
  case ErrorKind::InadmissibleParameters: return "InadmissibleParameters";
  case ErrorKind::Config: return "ConfigError";
  case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

namespace {

struct UnionFind
{
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a)
  {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b)
  {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool close(const Vec2 &a, const Vec2 &b, double tol)
{
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

// strict interior point of segment [a,b]
bool on_segment_interior(const Vec2 &p, const Vec2 &a, const Vec2 &b, double tol)
{
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = dot(p - a, d) / len2;
  if (t <= 1e-9 || t >= 1.0 - 1e-9) return false;
  const Vec2 q = a + t * d;
  return norm(p - q) <= tol;
}

} // namespace

bool Mesh::neighbor(int k, int e, int &nb, int &nb_local, Vec2 &shift) const
{
  const int f = face_of[k][e];
  if (f < 0) return false;
  const Face &face = faces[f];
  const int s = face_side[k][e];
  nb = face.elem[1 - s];
  nb_local = face.local[1 - s];
  // side 1 coordinates + shift = side 0 frame
  shift = (s == 0) ? face.shift : -face.shift;
  return true;
}

double Mesh::total_area() const
{
  double a = 0.0;
  for (double v : area) a += v;
  return a;
}

double Mesh::max_diameter() const
{
  double h = 0.0;
  for (double v : diameter) h = std::max(h, v);
  return h;
}

Mesh build_mesh(const std::vector<Vec2> &raw_nodes,
                const std::vector<std::array<int, 3>> &raw_triangles,
                const MeshOptions &opt)
{
  if (raw_triangles.empty())
    throw Error(ErrorKind::NonConforming, "mesh has no triangles");
  const int nn = static_cast<int>(raw_nodes.size());

  Mesh m;
  m.nodes = raw_nodes;
  m.tris = raw_triangles;
  m.periodic = opt.periodic;

  m.lo = m.hi = raw_nodes.empty() ? Vec2{} : raw_nodes[0];
  for (const Vec2 &p : raw_nodes) {
    m.lo.x = std::min(m.lo.x, p.x);
    m.lo.y = std::min(m.lo.y, p.y);
    m.hi.x = std::max(m.hi.x, p.x);
    m.hi.y = std::max(m.hi.y, p.y);
  }
  const double size = std::max(m.hi.x - m.lo.x, m.hi.y - m.lo.y);
  const double tol = opt.periodic_tolerance * size;

  const int ne = m.n_elems();
  m.area.resize(ne);
  m.diameter.resize(ne);
  m.edge_length.resize(ne);
  m.normal.resize(ne);
  for (int k = 0; k < ne; ++k) {
    auto &t = m.tris[k];
    for (int i : t)
      if (i < 0 || i >= nn)
        throw Error(ErrorKind::NonConforming,
                    "triangle " + std::to_string(k) + " references node out of range");
    double a = 0.5 * cross(m.nodes[t[1]] - m.nodes[t[0]], m.nodes[t[2]] - m.nodes[t[0]]);
    if (a < 0.0) {
      std::swap(t[1], t[2]);
      a = -a;
    }
    double h = 0.0;
    for (int e = 0; e < 3; ++e) {
      const Vec2 d = m.nodes[t[(e + 1) % 3]] - m.nodes[t[e]];
      const double len = norm(d);
      m.edge_length[k][e] = len;
      m.normal[k][e] = (len > 0.0) ? Vec2{d.y / len, -d.x / len} : Vec2{};
      h = std::max(h, len);
    }
    if (!(a > 1e-14 * h * h))
      throw Error(ErrorKind::DegenerateTriangle, "triangle " + std::to_string(k) +
                                                     " has non-positive area");
    m.area[k] = a;
    m.diameter[k] = h;
  }

  // internal edges by sorted node pair
  std::map<std::pair<int, int>, int> edge_index;
  for (int k = 0; k < ne; ++k) {
    for (int e = 0; e < 3; ++e) {
      const int a = m.tris[k][e], b = m.tris[k][(e + 1) % 3];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        Edge ed;
        ed.nodes = {a, b};
        ed.left = k;
        ed.left_local = e;
        edge_index.emplace(key, static_cast<int>(m.edges.size()));
        m.edges.push_back(ed);
      } else {
        Edge &ed = m.edges[it->second];
        if (ed.right >= 0 || ed.nodes[0] == a)
          throw Error(ErrorKind::NonConforming,
                      "edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two triangles or inconsistently oriented");
        ed.right = k;
        ed.right_local = e;
      }
    }
  }

  std::vector<int> boundary;
  for (int i = 0; i < static_cast<int>(m.edges.size()); ++i)
    if (m.edges[i].right < 0) boundary.push_back(i);

  // hanging nodes sit in the interior of some boundary edge
  for (int b : boundary) {
    const Vec2 pa = m.nodes[m.edges[b].nodes[0]], pb = m.nodes[m.edges[b].nodes[1]];
    const double etol = 1e-9 * norm(pb - pa);
    for (int i = 0; i < nn; ++i) {
      if (i == m.edges[b].nodes[0] || i == m.edges[b].nodes[1]) continue;
      if (on_segment_interior(m.nodes[i], pa, pb, etol))
        throw Error(ErrorKind::NonConforming,
                    "hanging node " + std::to_string(i) + " on edge " + std::to_string(b));
    }
  }

  UnionFind uf(nn);
  if (opt.periodic) {
    const Vec2 span = m.hi - m.lo;
    const std::array<Vec2, 4> shifts{Vec2{span.x, 0.0}, Vec2{-span.x, 0.0},
                                     Vec2{0.0, span.y}, Vec2{0.0, -span.y}};
    for (int bi : boundary) {
      Edge &eb = m.edges[bi];
      if (eb.partner >= 0) continue;
      const Vec2 a = m.nodes[eb.nodes[0]], b = m.nodes[eb.nodes[1]];
      for (int bj : boundary) {
        if (bj == bi || m.edges[bj].partner >= 0) continue;
        const Edge &ec = m.edges[bj];
        const Vec2 c = m.nodes[ec.nodes[0]], d = m.nodes[ec.nodes[1]];
        bool found = false;
        for (const Vec2 &s : shifts) {
          // partner runs in the opposite direction
          if (close(c + s, b, tol) && close(d + s, a, tol)) {
            found = true;
            break;
          }
        }
        if (!found) continue;
        const double la = norm(b - a), lc = norm(d - c);
        if (std::abs(la - lc) > 1e-9 * std::max(la, lc))
          throw Error(ErrorKind::UnmatchedPeriodicEdge, "periodic edge lengths differ");
        eb.partner = bj;
        m.edges[bj].partner = bi;
        uf.unite(eb.nodes[0], ec.nodes[1]);
        uf.unite(eb.nodes[1], ec.nodes[0]);
        break;
      }
      if (eb.partner < 0)
        throw Error(ErrorKind::UnmatchedPeriodicEdge,
                    "boundary edge " + std::to_string(bi) + " has no periodic partner");
    }
  }

  m.face_of.assign(ne, {-1, -1, -1});
  m.face_side.assign(ne, {-1, -1, -1});
  m.side_group.assign(ne, {-1, -1, -1});
  for (int i = 0; i < static_cast<int>(m.edges.size()); ++i) {
    const Edge &ed = m.edges[i];
    Face f;
    if (ed.right >= 0) {
      f.elem = {ed.left, ed.right};
      f.local = {ed.left_local, ed.right_local};
    } else if (ed.partner > i) {
      const Edge &p = m.edges[ed.partner];
      f.elem = {ed.left, p.left};
      f.local = {ed.left_local, p.left_local};
      f.periodic = true;
      f.shift = m.nodes[ed.nodes[1]] - m.nodes[p.nodes[0]];
    } else {
      continue;
    }
    const int id = static_cast<int>(m.faces.size());
    for (int s = 0; s < 2; ++s) {
      m.face_of[f.elem[s]][f.local[s]] = id;
      m.face_side[f.elem[s]][f.local[s]] = s;
      m.side_group[f.elem[s]][f.local[s]] = id;
    }
    m.faces.push_back(f);
  }
  m.n_side_groups = static_cast<int>(m.faces.size());
  for (int k = 0; k < ne; ++k)
    for (int e = 0; e < 3; ++e)
      if (m.side_group[k][e] < 0) m.side_group[k][e] = m.n_side_groups++;

  m.node_class.assign(nn, -1);
  std::vector<int> root_id(nn, -1);
  for (int i = 0; i < nn; ++i) {
    const int r = uf.find(i);
    if (root_id[r] < 0) root_id[r] = m.n_node_classes++;
    m.node_class[i] = root_id[r];
  }
  return m;
}

ShapeRegularity shape_regularity(const Mesh &mesh)
{
  ShapeRegularity s{std::numeric_limits<double>::infinity(), 0.0};
  for (int k = 0; k < mesh.n_elems(); ++k) {
    const double r = mesh.diameter[k] * mesh.diameter[k] / mesh.area[k];
    s.min = std::min(s.min, r);
    s.max = std::max(s.max, r);
  }
  return s;
}

Mesh read_mesh(std::istream &in)
{
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  std::size_t pos = 0;
  auto next = [&]() -> std::istringstream {
    if (pos >= lines.size()) throw Error(ErrorKind::Io, "unexpected end of mesh file");
    return std::istringstream(lines[pos++]);
  };

  std::string word;
  int version = 0;
  auto header = next();
  if (!(header >> word >> version) || word != "rdmesh" || version != 1)
    throw Error(ErrorKind::Io, "expected 'rdmesh 1' header");

  int n = 0;
  auto nl = next();
  if (!(nl >> word >> n) || word != "nodes" || n < 0)
    throw Error(ErrorKind::Io, "expected 'nodes N'");
  std::vector<Vec2> nodes(n);
  for (int i = 0; i < n; ++i) {
    auto s = next();
    if (!(s >> nodes[i].x >> nodes[i].y)) throw Error(ErrorKind::Io, "bad node line");
  }
  int m = 0;
  auto tl = next();
  if (!(tl >> word >> m) || word != "triangles" || m < 0)
    throw Error(ErrorKind::Io, "expected 'triangles M'");
  std::vector<std::array<int, 3>> tris(m);
  for (int i = 0; i < m; ++i) {
    auto s = next();
    if (!(s >> tris[i][0] >> tris[i][1] >> tris[i][2]))
      throw Error(ErrorKind::Io, "bad triangle line");
  }
  MeshOptions opt;
  while (pos < lines.size()) {
    auto s = next();
    std::string mode;
    if (s >> word >> mode && word == "periodic" && mode == "auto")
      opt.periodic = true;
    else
      throw Error(ErrorKind::Io, "unrecognized mesh directive: " + lines[pos - 1]);
  }
  return build_mesh(nodes, tris, opt);
}

Mesh read_mesh_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream &out, const Mesh &mesh)
{
  out << "rdmesh 1\n";
  out << "nodes " << mesh.nodes.size() << "\n";
  char buf[96];
  for (const Vec2 &p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
  out << "triangles " << mesh.tris.size() << "\n";
  for (const auto &t : mesh.tris) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (mesh.periodic) out << "periodic auto\n";
}

std::uint64_t mesh_hash(const Mesh &mesh)
{
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void *data, std::size_t n) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const Vec2 &p : mesh.nodes) {
    mix(&p.x, sizeof p.x);
    mix(&p.y, sizeof p.y);
  }
  for (const auto &t : mesh.tris) mix(t.data(), sizeof(int) * 3);
  const unsigned char per = mesh.periodic ? 1 : 0;
  mix(&per, 1);
  return h;
}

Mesh periodic_rectangle(int nx, int ny, double x0, double y0, double lx, double ly,
                        double distortion)
{
  const double pi = std::acos(-1.0);
  const double dx = lx / nx, dy = ly / ny;
  std::vector<Vec2> nodes;
  nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double sx = static_cast<double>(i) / nx, sy = static_cast<double>(j) / ny;
      const double w = std::sin(2.0 * pi * sx) * std::sin(2.0 * pi * sy);
      const double px = x0 + lx * sx + distortion * dx * w;
      const double py = y0 + ly * sy + distortion * dy * w;
      nodes.push_back({px, py});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  }
  return build_mesh(nodes, tris, MeshOptions{true, 1e-9});
}

} // namespace rd
