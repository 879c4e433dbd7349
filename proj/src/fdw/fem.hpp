#pragma once

// Piecewise-linear finite elements on uniform interval meshes and structured
// triangulations of rectangles. Homogeneous Dirichlet conditions are imposed
// by elimination: every vector and matrix here lives on the interior nodes.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace fdw {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using ScalarField = std::function<double(const Point&)>;
using GradientField = std::function<Point(const Point&)>;

/// Interval [a,b] (dimension 1) or rectangle [a,b] x [c,d] (dimension 2).
struct Domain {
  int dimension = 1;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 0.0;

  static Domain interval(double a, double b) { return {1, a, b, 0.0, 0.0}; }
  static Domain rectangle(double a, double b, double c, double d) { return {2, a, b, c, d}; }
  double measure() const { return dimension == 1 ? b - a : (b - a) * (d - c); }
};

struct Mesh {
  Domain domain;
  int n_per_side = 0;
  double h = 0.0;
  std::vector<Point> nodes;
  /// Vertex indices; 1D elements use the first two entries.
  std::vector<std::array<int, 3>> elements;
  /// Interior degree-of-freedom index per node, -1 on the boundary.
  std::vector<int> interior_index;
  std::vector<int> interior_nodes;

  int dimension() const { return domain.dimension; }
  int vertices_per_element() const { return domain.dimension + 1; }
  std::size_t dofs() const { return interior_nodes.size(); }
  /// Signed element measure (length or area).
  double element_measure(std::size_t e) const;
  /// Node index at grid position (i, j); j is ignored in 1D.
  int node_at(int i, int j = 0) const;
  /// Node CSV (index, x, y, interior_index) and element CSV (index, v0, v1, v2).
  void write_csv(const std::string& node_path, const std::string& element_path) const;
};

/// Uniform mesh with n_per_side cells per side. In 2D each square cell is cut
/// along its (lower-left, upper-right) diagonal; h is the cell side length
/// (equal across sides only for square domains, where it is also the leg
/// length of every triangle).
Mesh build_mesh(const Domain& domain, int n_per_side);

/// Full (boundary included) P1 matrices, used for assembly checks.
SparseMatrix assemble_full_mass(const Mesh& mesh);
SparseMatrix assemble_full_stiffness(const Mesh& mesh);

/// Mass and stiffness matrices on the interior nodes with their Cholesky
/// factorizations. Immutable after construction.
class FemSystem {
 public:
  explicit FemSystem(Mesh mesh);

  const Mesh& mesh() const noexcept { return mesh_; }
  const SparseMatrix& mass() const noexcept { return mass_; }
  const SparseMatrix& stiffness() const noexcept { return stiffness_; }
  std::size_t dofs() const noexcept { return mesh_.dofs(); }

  Vector solve_mass(const Vector& rhs) const;
  Vector solve_stiffness(const Vector& rhs) const;

  /// Interior nodal values of f.
  Vector interpolate(const ScalarField& f) const;
  /// Interior vector scattered onto all nodes (zero on the boundary).
  Vector extend(const Vector& interior) const;

 private:
  Mesh mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  Eigen::SimplicialLLT<SparseMatrix> mass_llt_;
  Eigen::SimplicialLLT<SparseMatrix> stiffness_llt_;
};

/// Gauss points per element for load integration. 1D accepts 1..5, 2D accepts
/// 1, 3, 6 or 7 (the 3-point rule sits at barycentric (2/3,1/6,1/6)).
inline constexpr int kDefaultQuadPoints = 3;

/// Entries int f phi_i over the interior hat functions.
Vector load_vector(const FemSystem& system, const ScalarField& f,
                   int quad_points = kDefaultQuadPoints);

/// Ritz projection of a function through its gradient: solves K x = g with
/// g_i = int grad u . grad phi_i.
Vector ritz_projection(const FemSystem& system, const GradientField& grad_u,
                       int quad_points = kDefaultQuadPoints);

/// Ritz projection of a finite element function given by interior nodal values.
Vector ritz_projection(const FemSystem& system, const Vector& nodal);

/// Solves M x = f_load.
Vector l2_projection(const FemSystem& system, const Vector& f_load);

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// l2 = sqrt(x'Mx), h1 = sqrt(x'Mx + x'Kx).
Norms norms(const FemSystem& system, const Vector& x);
double l2_norm(const FemSystem& system, const Vector& x);

struct PowerIterationOptions {
  int max_iterations = 20000;
  double tolerance = 1e-11;
};

/// Largest eigenvalue of the pencil (K, M) by power iteration on M^{-1} K.
double max_generalized_eigenvalue(const FemSystem& system, const PowerIterationOptions& = {});

/// Smallest eigenvalue of (K, M) by inverse power iteration.
double min_generalized_eigenvalue(const FemSystem& system, const PowerIterationOptions& = {});

/// Sharp inverse-inequality constant of the mesh: h * sqrt(lambda_max(K, M)).
double inverse_constant(const FemSystem& system, const PowerIterationOptions& = {});

/// Matrix Market coordinate format (general, real).
void write_matrix_market(const SparseMatrix& matrix, const std::string& path);

}  // namespace fdw
