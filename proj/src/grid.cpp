#include "ctoda/grid.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ctoda {

std::string to_string(Topology t) { return t == Topology::torus ? "torus" : "rectangle"; }

Topology parse_topology(std::string_view s) {
  if (s == "torus") return Topology::torus;
  if (s == "rectangle") return Topology::rectangle;
  throw std::invalid_argument("unknown topology: " + std::string(s));
}

DomainGrid DomainGrid::torus(int nx, int ny, double lx, double ly) {
  DomainGrid g{Topology::torus, nx, ny, nx > 0 ? lx / nx : 0.0, ny > 0 ? ly / ny : 0.0};
  g.validate();
  return g;
}

DomainGrid DomainGrid::rectangle(int nx, int ny, double lx, double ly) {
  DomainGrid g{Topology::rectangle, nx, ny, nx > 1 ? lx / (nx - 1) : 0.0,
               ny > 1 ? ly / (ny - 1) : 0.0};
  g.validate();
  return g;
}

void DomainGrid::validate() const {
  if (nx < 8 || ny < 8) throw std::invalid_argument("grid needs at least 8 nodes per direction");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw std::invalid_argument("grid spacing must be positive and finite");
}

bool DomainGrid::on_boundary(int n) const {
  if (topology == Topology::torus) return false;
  const int i = ix(n), j = iy(n);
  return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
}

bool DomainGrid::in_norm_region(int n) const {
  if (topology == Topology::torus) return true;
  const int i = ix(n), j = iy(n);
  return i >= 2 && j >= 2 && i <= nx - 3 && j <= ny - 3;
}

HFieldGrid::HFieldGrid(DomainGrid g, int l)
    : grid(g), rank(l), values(static_cast<std::size_t>(g.nodes()) * l, 0.0) {}

bool HFieldGrid::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------

QDifferential QDifferential::constant(std::complex<double> q0) {
  QDifferential q;
  q.kind = Kind::constant;
  q.coeffs = {q0};
  return q;
}

QDifferential QDifferential::polynomial(std::vector<std::complex<double>> c) {
  if (c.empty()) throw std::invalid_argument("polynomial q needs at least one coefficient");
  QDifferential q;
  q.kind = Kind::polynomial;
  q.coeffs = std::move(c);
  return q;
}

QDifferential QDifferential::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("q must be 'const:<complex>' or 'poly:c0,c1,...'");
  const auto head = spec.substr(0, colon);
  auto body = spec.substr(colon + 1);
  if (head == "const") return constant(parse_complex(body));
  if (head != "poly") throw std::invalid_argument("unknown q kind: " + std::string(head));
  std::vector<std::complex<double>> c;
  while (true) {
    const auto comma = body.find(',');
    c.push_back(parse_complex(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return polynomial(std::move(c));
}

std::complex<double> QDifferential::operator()(std::complex<double> z) const {
  std::complex<double> v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

std::string QDifferential::to_string() const {
  std::string s = kind == Kind::constant ? "const:" : "poly:";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) s += ',';
    s += format_complex(coeffs[i]);
  }
  return s;
}

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("malformed complex number: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

std::complex<double> parse_complex(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') {
    if (s == "+" || s == "-") throw std::invalid_argument("malformed complex number: '" + std::string(s) + "'");
    return {parse_real(s, s), 0.0};
  }
  const auto body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the leading sign or part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_real(body, s)};
  const auto re = body.substr(0, split);
  if (re == "+" || re == "-") throw std::invalid_argument("malformed complex number: '" + std::string(s) + "'");
  return {parse_real(re, s), parse_real(body.substr(split), s)};
}

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os << std::setprecision(17) << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << 'i';
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void axis_stencil(Topology topo, int i, int n, int step, int base, double h,
                  std::vector<StencilTerm>& out) {
  out.clear();
  const double w = 1.0 / (2.0 * h);
  if (topo == Topology::torus) {
    out.push_back({base + ((i + 1) % n) * step, w});
    out.push_back({base + ((i - 1 + n) % n) * step, -w});
    return;
  }
  if (i == 0) {
    out.push_back({base, -3.0 * w});
    out.push_back({base + step, 4.0 * w});
    out.push_back({base + 2 * step, -w});
  } else if (i == n - 1) {
    out.push_back({base + (n - 1) * step, 3.0 * w});
    out.push_back({base + (n - 2) * step, -4.0 * w});
    out.push_back({base + (n - 3) * step, w});
  } else {
    out.push_back({base + (i + 1) * step, w});
    out.push_back({base + (i - 1) * step, -w});
  }
}

}  // namespace

void dx_stencil(const DomainGrid& g, int node, std::vector<StencilTerm>& out) {
  const int iy = g.iy(node);
  axis_stencil(g.topology, g.ix(node), g.nx, 1, iy * g.nx, g.dx, out);
}

void dy_stencil(const DomainGrid& g, int node, std::vector<StencilTerm>& out) {
  axis_stencil(g.topology, g.iy(node), g.ny, g.nx, g.ix(node), g.dy, out);
}

template <class T>
T d_dx(const DomainGrid& g, const T* f, int stride, int offset, int node) {
  thread_local std::vector<StencilTerm> st;
  dx_stencil(g, node, st);
  T s{};
  for (const auto& t : st) s += t.weight * f[static_cast<std::size_t>(t.node) * stride + offset];
  return s;
}

template <class T>
T d_dy(const DomainGrid& g, const T* f, int stride, int offset, int node) {
  thread_local std::vector<StencilTerm> st;
  dy_stencil(g, node, st);
  T s{};
  for (const auto& t : st) s += t.weight * f[static_cast<std::size_t>(t.node) * stride + offset];
  return s;
}

template double d_dx<double>(const DomainGrid&, const double*, int, int, int);
template double d_dy<double>(const DomainGrid&, const double*, int, int, int);
template std::complex<double> d_dx<std::complex<double>>(const DomainGrid&, const std::complex<double>*,
                                                         int, int, int);
template std::complex<double> d_dy<std::complex<double>>(const DomainGrid&, const std::complex<double>*,
                                                         int, int, int);

double laplacian5(const DomainGrid& g, const double* f, int stride, int offset, int node) {
  const int i = g.ix(node), j = g.iy(node);
  int ip, im, jp, jm;
  if (g.topology == Topology::torus) {
    ip = (i + 1) % g.nx;
    im = (i - 1 + g.nx) % g.nx;
    jp = (j + 1) % g.ny;
    jm = (j - 1 + g.ny) % g.ny;
  } else {
    if (g.on_boundary(node)) throw std::logic_error("laplacian5 evaluated on a boundary node");
    ip = i + 1;
    im = i - 1;
    jp = j + 1;
    jm = j - 1;
  }
  auto at = [&](int a, int b) { return f[static_cast<std::size_t>(g.node(a, b)) * stride + offset]; };
  const double c = at(i, j);
  return (at(ip, j) - 2.0 * c + at(im, j)) / (g.dx * g.dx) + (at(i, jp) - 2.0 * c + at(i, jm)) / (g.dy * g.dy);
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("grid file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_grid_binary(const std::filesystem::path& path, const HFieldGrid& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write("TODA", 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.nx));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.ny));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.rank));
  for (double v : field.values) put_le<double>(os, v);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

GridFile read_grid_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::string_view(magic, 4) != "TODA")
    throw std::runtime_error(path.string() + " is not a TODA grid file");
  GridFile f;
  f.nx = get_le<std::uint32_t>(is);
  f.ny = get_le<std::uint32_t>(is);
  f.rank = get_le<std::uint32_t>(is);
  if (f.nx == 0 || f.ny == 0 || f.rank == 0 || f.rank > 8 || f.nx > 65536 || f.ny > 65536)
    throw std::runtime_error("implausible grid header in " + path.string());
  const std::size_t n = static_cast<std::size_t>(f.nx) * f.ny * f.rank;
  f.values.resize(n);
  for (auto& v : f.values) v = get_le<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error("trailing bytes in " + path.string());
  return f;
}

void write_grid_csv(const std::filesystem::path& path, const HFieldGrid& field) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "ix,iy";
  for (int i = 1; i <= field.rank; ++i) os << ",h" << i;
  os << '\n' << std::setprecision(17);
  for (int n = 0; n < field.grid.nodes(); ++n) {
    os << field.grid.ix(n) << ',' << field.grid.iy(n);
    for (int i = 0; i < field.rank; ++i) os << ',' << field(n, i);
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

GridFile read_grid_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty csv: " + path.string());
  GridFile f;
  {
    std::stringstream hs(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(hs, col, ',')) cols.push_back(col);
    if (cols.size() < 3 || cols[0] != "ix" || cols[1] != "iy")
      throw std::runtime_error("bad csv header in " + path.string());
    f.rank = static_cast<std::uint32_t>(cols.size() - 2);
  }
  std::vector<std::pair<int, int>> idx;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != f.rank + 2) throw std::runtime_error("ragged csv row in " + path.string());
    idx.emplace_back(static_cast<int>(row[0]), static_cast<int>(row[1]));
    f.values.insert(f.values.end(), row.begin() + 2, row.end());
  }
  int nx = 0, ny = 0;
  for (const auto& [i, j] : idx) {
    nx = std::max(nx, i + 1);
    ny = std::max(ny, j + 1);
  }
  f.nx = static_cast<std::uint32_t>(nx);
  f.ny = static_cast<std::uint32_t>(ny);
  if (idx.size() != static_cast<std::size_t>(nx) * ny) throw std::runtime_error("incomplete csv grid");
  for (std::size_t k = 0; k < idx.size(); ++k)
    if (idx[k].second * nx + idx[k].first != static_cast<int>(k))
      throw std::runtime_error("csv rows are not in node order");
  return f;
}

HFieldGrid to_field(const GridFile& file, const DomainGrid& grid) {
  if (static_cast<int>(file.nx) != grid.nx || static_cast<int>(file.ny) != grid.ny)
    throw std::invalid_argument("grid file size does not match the declared grid");
  HFieldGrid f(grid, static_cast<int>(file.rank));
  f.values = file.values;
  return f;
}

}  // namespace ctoda
