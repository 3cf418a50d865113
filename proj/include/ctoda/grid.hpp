#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctoda {

enum class Topology { torus, rectangle };

std::string to_string(Topology t);
Topology parse_topology(std::string_view s);

/// Uniform 2-D grid, node = iy * nx + ix, z = x + i y with x = ix * dx, y = iy * dy.
struct DomainGrid {
  Topology topology = Topology::torus;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  /// Periodic grid of nx x ny nodes on [0, lx) x [0, ly).
  static DomainGrid torus(int nx, int ny, double lx, double ly);
  /// Closed rectangle [0, lx] x [0, ly] with nx x ny nodes including the boundary.
  static DomainGrid rectangle(int nx, int ny, double lx, double ly);

  /// Throws std::invalid_argument unless nx, ny >= 8 and dx, dy > 0.
  void validate() const;

  int nodes() const { return nx * ny; }
  int node(int ix, int iy) const { return iy * nx + ix; }
  int ix(int node) const { return node % nx; }
  int iy(int node) const { return node / nx; }
  double x(int node) const { return ix(node) * dx; }
  double y(int node) const { return iy(node) * dy; }
  std::complex<double> z(int node) const { return {x(node), y(node)}; }

  /// Rectangle nodes on the outer ring; never true on a torus.
  bool on_boundary(int node) const;
  /// Nodes included in residual norms: everything on a torus, nodes at distance >= 2
  /// from the edge on a rectangle (one-sided stencils reach two nodes in).
  bool in_norm_region(int node) const;

  friend bool operator==(const DomainGrid&, const DomainGrid&) = default;
};

/// Omega : grid -> h_R as coordinates over h_1..h_l, stored node-major.
struct HFieldGrid {
  DomainGrid grid;
  int rank = 0;
  std::vector<double> values;

  HFieldGrid() = default;
  HFieldGrid(DomainGrid g, int l);

  double& operator()(int node, int i) { return values[static_cast<std::size_t>(node) * rank + i]; }
  double operator()(int node, int i) const { return values[static_cast<std::size_t>(node) * rank + i]; }
  std::span<const double> at(int node) const {
    return {values.data() + static_cast<std::size_t>(node) * rank, static_cast<std::size_t>(rank)};
  }
  std::span<double> at(int node) {
    return {values.data() + static_cast<std::size_t>(node) * rank, static_cast<std::size_t>(rank)};
  }
  bool all_finite() const;
};

/// Holomorphic q: a constant or a polynomial in z.
struct QDifferential {
  enum class Kind { constant, polynomial };

  Kind kind = Kind::constant;
  std::vector<std::complex<double>> coeffs{1.0};  // c0 + c1 z + ...
  int degree_tag = 0;                             // M + 1, recorded for bookkeeping

  static QDifferential constant(std::complex<double> q0);
  static QDifferential polynomial(std::vector<std::complex<double>> c);
  /// "const:<complex>" or "poly:c0,c1,..." where a complex is "a", "bi", "a+bi" or "a-bi".
  static QDifferential parse(std::string_view spec);

  std::complex<double> operator()(std::complex<double> z) const;
  std::string to_string() const;
};

/// Parses "1.5", "-2i", "0.3+1e-2i", "1-i". Throws std::invalid_argument.
std::complex<double> parse_complex(std::string_view s);
std::string format_complex(std::complex<double> z);

/// Central first derivatives; the rectangle uses second-order one-sided stencils on its edges.
/// f is read as f[node * stride + offset].
template <class T>
T d_dx(const DomainGrid& g, const T* f, int stride, int offset, int node);
template <class T>
T d_dy(const DomainGrid& g, const T* f, int stride, int offset, int node);

/// Stencil of d/dx (or d/dy) at a node: pairs (neighbour node, weight).
struct StencilTerm {
  int node;
  double weight;
};
void dx_stencil(const DomainGrid& g, int node, std::vector<StencilTerm>& out);
void dy_stencil(const DomainGrid& g, int node, std::vector<StencilTerm>& out);

/// Five-point Laplacian at an interior (or periodic) node.
double laplacian5(const DomainGrid& g, const double* f, int stride, int offset, int node);

/// Raw grid file contents: "TODA", u32 nx, u32 ny, u32 l, f64 LE node-major values.
struct GridFile {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t rank = 0;
  std::vector<double> values;
};

void write_grid_binary(const std::filesystem::path& path, const HFieldGrid& field);
GridFile read_grid_binary(const std::filesystem::path& path);

/// CSV with header "ix,iy,h1,...,hl", one row per node in node order.
void write_grid_csv(const std::filesystem::path& path, const HFieldGrid& field);
GridFile read_grid_csv(const std::filesystem::path& path);

/// Attaches geometry to file contents. Throws std::invalid_argument on a size mismatch.
HFieldGrid to_field(const GridFile& file, const DomainGrid& grid);

}  // namespace ctoda
