#include "fdw/fem.hpp"

#include <cmath>
#include <fstream>
#include <span>

#include "fdw/csv.hpp"
#include "fdw/error.hpp"
#include "fdw/special.hpp"

namespace fdw {
namespace {

struct QuadPoint {
  std::array<double, 3> bary;  // barycentric (1D uses the first two)
  double weight;               // fraction of the element measure
};

std::vector<QuadPoint> quadrature_rule(int dimension, int points) {
  if (dimension == 1) {
    std::vector<std::pair<double, double>> gl;  // nodes on [-1,1], weights summing to 2
    switch (points) {
      case 1: gl = {{0.0, 2.0}}; break;
      case 2: gl = {{-0.57735026918962576, 1.0}, {0.57735026918962576, 1.0}}; break;
      case 3:
        gl = {{-0.77459666924148338, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {0.77459666924148338, 5.0 / 9.0}};
        break;
      case 4:
        gl = {{-0.86113631159405258, 0.34785484513745386},
              {-0.33998104358485626, 0.65214515486254614},
              {0.33998104358485626, 0.65214515486254614},
              {0.86113631159405258, 0.34785484513745386}};
        break;
      case 5:
        gl = {{-0.90617984593866399, 0.23692688505618909},
              {-0.53846931010568309, 0.47862867049936647},
              {0.0, 0.56888888888888889},
              {0.53846931010568309, 0.47862867049936647},
              {0.90617984593866399, 0.23692688505618909}};
        break;
      default: throw DomainError("1D quadrature supports 1 to 5 points");
    }
    std::vector<QuadPoint> rule;
    for (auto [x, w] : gl) {
      const double s = 0.5 * (x + 1.0);
      rule.push_back({{1.0 - s, s, 0.0}, 0.5 * w});
    }
    return rule;
  }
  switch (points) {
    case 1: return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0}};
    case 3:
      return {{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
              {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
              {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0}};
    case 6: {
      const double a = 0.445948490915965, wa = 0.223381589678011;
      const double b = 0.091576213509771, wb = 0.109951743655322;
      return {{{1 - 2 * a, a, a}, wa}, {{a, 1 - 2 * a, a}, wa}, {{a, a, 1 - 2 * a}, wa},
              {{1 - 2 * b, b, b}, wb}, {{b, 1 - 2 * b, b}, wb}, {{b, b, 1 - 2 * b}, wb}};
    }
    case 7: {
      const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
      const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
      return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
              {{a1, b1, b1}, w1}, {{b1, a1, b1}, w1}, {{b1, b1, a1}, w1},
              {{a2, b2, b2}, w2}, {{b2, a2, b2}, w2}, {{b2, b2, a2}, w2}};
    }
    default: throw DomainError("2D quadrature supports 1, 3, 6 or 7 points");
  }
}

// Gradients of the element's barycentric functions.
std::array<Point, 3> shape_gradients(const Mesh& mesh, std::size_t e) {
  const auto& el = mesh.elements[e];
  if (mesh.dimension() == 1) {
    const double len = mesh.nodes[el[1]].x - mesh.nodes[el[0]].x;
    return {Point{-1.0 / len, 0.0}, Point{1.0 / len, 0.0}, Point{}};
  }
  const Point& p0 = mesh.nodes[el[0]];
  const Point& p1 = mesh.nodes[el[1]];
  const Point& p2 = mesh.nodes[el[2]];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  return {Point{(p1.y - p2.y) / det, (p2.x - p1.x) / det},
          Point{(p2.y - p0.y) / det, (p0.x - p2.x) / det},
          Point{(p0.y - p1.y) / det, (p1.x - p0.x) / det}};
}

Point map_point(const Mesh& mesh, std::size_t e, const std::array<double, 3>& bary) {
  const auto& el = mesh.elements[e];
  Point p;
  for (int k = 0; k < mesh.vertices_per_element(); ++k) {
    p.x += bary[k] * mesh.nodes[el[k]].x;
    p.y += bary[k] * mesh.nodes[el[k]].y;
  }
  return p;
}

enum class Restrict { full, interior };

SparseMatrix assemble(const Mesh& mesh, bool stiffness, Restrict restrict) {
  const int nv = mesh.vertices_per_element();
  const auto size = static_cast<Eigen::Index>(restrict == Restrict::full ? mesh.nodes.size()
                                                                          : mesh.dofs());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.elements.size() * nv * nv);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const double measure = mesh.element_measure(e);
    const auto grads = shape_gradients(mesh, e);
    for (int i = 0; i < nv; ++i) {
      const int row = restrict == Restrict::full ? el[i] : mesh.interior_index[el[i]];
      if (row < 0) continue;
      for (int j = 0; j < nv; ++j) {
        const int col = restrict == Restrict::full ? el[j] : mesh.interior_index[el[j]];
        if (col < 0) continue;
        double value = 0.0;
        if (stiffness) {
          value = measure * (grads[i].x * grads[j].x + grads[i].y * grads[j].y);
        } else if (mesh.dimension() == 1) {
          value = measure / 6.0 * (i == j ? 2.0 : 1.0);
        } else {
          value = measure / 12.0 * (i == j ? 2.0 : 1.0);
        }
        triplets.emplace_back(row, col, value);
      }
    }
  }
  SparseMatrix m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

double Mesh::element_measure(std::size_t e) const {
  const auto& el = elements[e];
  if (dimension() == 1) return nodes[el[1]].x - nodes[el[0]].x;
  const Point& p0 = nodes[el[0]];
  const Point& p1 = nodes[el[1]];
  const Point& p2 = nodes[el[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

int Mesh::node_at(int i, int j) const {
  FDW_REQUIRE(i >= 0 && i <= n_per_side && j >= 0 && j <= (dimension() == 1 ? 0 : n_per_side),
              IndexError, "grid position outside the mesh");
  return dimension() == 1 ? i : j * (n_per_side + 1) + i;
}

void Mesh::write_csv(const std::string& node_path, const std::string& element_path) const {
  {
    CsvWriter csv(node_path, {"index", "x", "y", "interior_index"});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      csv.row({static_cast<double>(i), nodes[i].x, nodes[i].y,
               static_cast<double>(interior_index[i])});
    }
  }
  CsvWriter csv(element_path, {"index", "v0", "v1", "v2"});
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    csv.row({static_cast<double>(e), static_cast<double>(el[0]), static_cast<double>(el[1]),
             dimension() == 1 ? -1.0 : static_cast<double>(el[2])});
  }
}

Mesh build_mesh(const Domain& domain, int n_per_side) {
  FDW_REQUIRE(domain.dimension == 1 || domain.dimension == 2, DomainError,
              "mesh dimension must be 1 or 2");
  FDW_REQUIRE(n_per_side >= 2, DomainError, "need at least 2 cells per side");
  FDW_REQUIRE(domain.b > domain.a && (domain.dimension == 1 || domain.d > domain.c), DomainError,
              "degenerate domain");

  Mesh mesh;
  mesh.domain = domain;
  mesh.n_per_side = n_per_side;
  const int n = n_per_side;
  const double hx = (domain.b - domain.a) / n;

  if (domain.dimension == 1) {
    mesh.h = hx;
    for (int i = 0; i <= n; ++i) {
      // The last node is pinned to b so the measure is exact.
      mesh.nodes.push_back({i == n ? domain.b : domain.a + i * hx, 0.0});
    }
    for (int i = 0; i < n; ++i) mesh.elements.push_back({i, i + 1, -1});
    mesh.interior_index.assign(mesh.nodes.size(), -1);
    for (int i = 1; i < n; ++i) {
      mesh.interior_index[i] = static_cast<int>(mesh.interior_nodes.size());
      mesh.interior_nodes.push_back(i);
    }
    return mesh;
  }

  const double hy = (domain.d - domain.c) / n;
  mesh.h = std::max(hx, hy);
  for (int j = 0; j <= n; ++j) {
    const double y = j == n ? domain.d : domain.c + j * hy;
    for (int i = 0; i <= n; ++i) {
      mesh.nodes.push_back({i == n ? domain.b : domain.a + i * hx, y});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int n00 = mesh.node_at(i, j);
      const int n10 = mesh.node_at(i + 1, j);
      const int n01 = mesh.node_at(i, j + 1);
      const int n11 = mesh.node_at(i + 1, j + 1);
      mesh.elements.push_back({n00, n10, n11});
      mesh.elements.push_back({n00, n11, n01});
    }
  }
  mesh.interior_index.assign(mesh.nodes.size(), -1);
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const int node = mesh.node_at(i, j);
      mesh.interior_index[node] = static_cast<int>(mesh.interior_nodes.size());
      mesh.interior_nodes.push_back(node);
    }
  }
  return mesh;
}

SparseMatrix assemble_full_mass(const Mesh& mesh) { return assemble(mesh, false, Restrict::full); }

SparseMatrix assemble_full_stiffness(const Mesh& mesh) {
  return assemble(mesh, true, Restrict::full);
}

FemSystem::FemSystem(Mesh mesh)
    : mesh_(std::move(mesh)),
      mass_(assemble(mesh_, false, Restrict::interior)),
      stiffness_(assemble(mesh_, true, Restrict::interior)) {
  FDW_REQUIRE(mesh_.dofs() > 0, DomainError, "mesh has no interior nodes");
  mass_llt_.compute(mass_);
  FDW_REQUIRE(mass_llt_.info() == Eigen::Success, SolverError,
              "Cholesky factorization of the mass matrix failed");
  stiffness_llt_.compute(stiffness_);
  FDW_REQUIRE(stiffness_llt_.info() == Eigen::Success, SolverError,
              "Cholesky factorization of the stiffness matrix failed");
}

Vector FemSystem::solve_mass(const Vector& rhs) const {
  Vector x = mass_llt_.solve(rhs);
  FDW_REQUIRE(mass_llt_.info() == Eigen::Success, SolverError, "mass solve failed");
  return x;
}

Vector FemSystem::solve_stiffness(const Vector& rhs) const {
  Vector x = stiffness_llt_.solve(rhs);
  FDW_REQUIRE(stiffness_llt_.info() == Eigen::Success, SolverError, "stiffness solve failed");
  return x;
}

Vector FemSystem::interpolate(const ScalarField& f) const {
  Vector out(static_cast<Eigen::Index>(dofs()));
  for (std::size_t k = 0; k < mesh_.interior_nodes.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = f(mesh_.nodes[mesh_.interior_nodes[k]]);
  }
  return out;
}

Vector FemSystem::extend(const Vector& interior) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(mesh_.nodes.size()));
  for (std::size_t k = 0; k < mesh_.interior_nodes.size(); ++k) {
    out[mesh_.interior_nodes[k]] = interior[static_cast<Eigen::Index>(k)];
  }
  return out;
}

Vector load_vector(const FemSystem& system, const ScalarField& f, int quad_points) {
  const Mesh& mesh = system.mesh();
  const auto rule = quadrature_rule(mesh.dimension(), quad_points);
  const int nv = mesh.vertices_per_element();
  Vector load = Vector::Zero(static_cast<Eigen::Index>(system.dofs()));
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const double measure = mesh.element_measure(e);
    for (const QuadPoint& q : rule) {
      const double fq = f(map_point(mesh, e, q.bary)) * q.weight * measure;
      for (int i = 0; i < nv; ++i) {
        const int row = mesh.interior_index[el[i]];
        if (row >= 0) load[row] += fq * q.bary[i];
      }
    }
  }
  return load;
}

Vector ritz_projection(const FemSystem& system, const GradientField& grad_u, int quad_points) {
  const Mesh& mesh = system.mesh();
  const auto rule = quadrature_rule(mesh.dimension(), quad_points);
  const int nv = mesh.vertices_per_element();
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(system.dofs()));
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const double measure = mesh.element_measure(e);
    const auto grads = shape_gradients(mesh, e);
    Point mean;  // element integral of grad u
    for (const QuadPoint& q : rule) {
      const Point g = grad_u(map_point(mesh, e, q.bary));
      mean.x += q.weight * measure * g.x;
      mean.y += q.weight * measure * g.y;
    }
    for (int i = 0; i < nv; ++i) {
      const int row = mesh.interior_index[el[i]];
      if (row >= 0) rhs[row] += grads[i].x * mean.x + grads[i].y * mean.y;
    }
  }
  return system.solve_stiffness(rhs);
}

Vector ritz_projection(const FemSystem& system, const Vector& nodal) {
  return system.solve_stiffness(system.stiffness() * nodal);
}

Vector l2_projection(const FemSystem& system, const Vector& f_load) {
  return system.solve_mass(f_load);
}

Norms norms(const FemSystem& system, const Vector& x) {
  const double m = x.dot(system.mass() * x);
  const double k = x.dot(system.stiffness() * x);
  return {std::sqrt(std::max(m, 0.0)), std::sqrt(std::max(m + k, 0.0))};
}

double l2_norm(const FemSystem& system, const Vector& x) {
  return std::sqrt(std::max(x.dot(system.mass() * x), 0.0));
}

double max_generalized_eigenvalue(const FemSystem& system, const PowerIterationOptions& opts) {
  const Mesh& mesh = system.mesh();
  // Start from the checkerboard pattern under a sine envelope. In 1D this is
  // the top eigenvector itself; a bare checkerboard mixes many nearly equal
  // top modes and converges slowly on fine meshes.
  const Domain& dom = mesh.domain;
  Vector x(static_cast<Eigen::Index>(system.dofs()));
  for (std::size_t k = 0; k < mesh.interior_nodes.size(); ++k) {
    const int node = mesh.interior_nodes[k];
    const Point& p = mesh.nodes[node];
    const int stride = mesh.n_per_side + 1;
    const int parity = mesh.dimension() == 1 ? node : node % stride + node / stride;
    double envelope = std::sin(kPi * (p.x - dom.a) / (dom.b - dom.a));
    if (mesh.dimension() == 2) envelope *= std::sin(kPi * (p.y - dom.c) / (dom.d - dom.c));
    x[static_cast<Eigen::Index>(k)] = (parity % 2 == 0 ? 1.0 : -1.0) * envelope;
  }
  x /= std::sqrt(x.dot(system.mass() * x));
  double lambda = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vector kx = system.stiffness() * x;
    const double next = x.dot(kx);  // x is M-normalized
    Vector z = system.solve_mass(kx);
    x = z / std::sqrt(z.dot(system.mass() * z));
    if (it > 0 && std::fabs(next - lambda) <= opts.tolerance * std::fabs(next)) return next;
    lambda = next;
  }
  throw ConvergenceError("power iteration for lambda_max(K, M) did not converge");
}

double min_generalized_eigenvalue(const FemSystem& system, const PowerIterationOptions& opts) {
  Vector x = Vector::Ones(static_cast<Eigen::Index>(system.dofs()));
  x /= std::sqrt(x.dot(system.mass() * x));
  double lambda = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double next = x.dot(system.stiffness() * x);
    Vector z = system.solve_stiffness(system.mass() * x);
    x = z / std::sqrt(z.dot(system.mass() * z));
    if (it > 0 && std::fabs(next - lambda) <= opts.tolerance * std::fabs(next)) return next;
    lambda = next;
  }
  throw ConvergenceError("inverse power iteration for lambda_min(K, M) did not converge");
}

double inverse_constant(const FemSystem& system, const PowerIterationOptions& opts) {
  return system.mesh().h * std::sqrt(max_generalized_eigenvalue(system, opts));
}

void write_matrix_market(const SparseMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  FDW_REQUIRE(out.good(), IoError, "cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  for (Eigen::Index k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_real(it.value()) << '\n';
    }
  }
  FDW_REQUIRE(out.good(), IoError, "Matrix Market write failed");
}

}  // namespace fdw
