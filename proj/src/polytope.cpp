#include "fairbandit/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fairbandit {

namespace {

// Visits all size-k index subsets of {0..n-1}.
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// True when some nonzero direction v has Av <= tol, i.e. the recession cone
// of {Ax <= b} is nontrivial. Checks the null space of A (lines in the cone)
// and the candidate extreme rays, which are null vectors of (d-1)-subsets of
// rows.
bool has_recession_direction(const Matrix& A, double tol) {
  const int d = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());

  Eigen::FullPivLU<Matrix> lu(A);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) return true;

  auto admits = [&](const Vector& v) {
    double norm = v.norm();
    if (norm < 1e-12) return false;
    Vector unit = v / norm;
    return ((A * unit).array() <= tol).all() || ((A * -unit).array() <= tol).all();
  };

  if (d == 1) return admits(Vector::Ones(1));

  bool found = false;
  for_each_subset(m, d - 1, [&](const std::vector<int>& idx) {
    if (found) return;
    Matrix sub(d - 1, d);
    for (int r = 0; r < d - 1; ++r) sub.row(r) = A.row(idx[r]);
    Eigen::FullPivLU<Matrix> sub_lu(sub);
    sub_lu.setThreshold(1e-10);
    if (sub_lu.rank() != d - 1) return;  // null space is not a single ray
    Matrix kernel = sub_lu.kernel();
    if (admits(kernel.col(0))) found = true;
  });
  return found;
}

}  // namespace

std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b,
                                       double tol) {
  const int d = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  std::vector<Vector> vertices;
  for_each_subset(m, d, [&](const std::vector<int>& idx) {
    Matrix basis(d, d);
    Vector rhs(d);
    for (int r = 0; r < d; ++r) {
      basis.row(r) = A.row(idx[r]);
      rhs[r] = b[idx[r]];
    }
    Eigen::FullPivLU<Matrix> lu(basis);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return;
    Vector x = lu.solve(rhs);
    for (int i = 0; i < m; ++i) {
      if (A.row(i).dot(x) > b[i] + tol * (1.0 + std::abs(b[i]))) return;
    }
    for (const Vector& v : vertices) {
      if ((v - x).lpNorm<Eigen::Infinity>() <= tol) return;
    }
    vertices.push_back(std::move(x));
  });
  std::sort(vertices.begin(), vertices.end(), lex_less);
  return vertices;
}

Polytope::Polytope(Matrix A, Vector b, double tol) {
  if (A.rows() != b.size() || A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument("Polytope: inconsistent constraint shapes");
  if (has_recession_direction(A, tol))
    throw std::invalid_argument("Polytope: unbounded constraint set");
  A_ = std::move(A);
  b_ = std::move(b);
  vertices_ = enumerate_vertices(A_, b_, tol);
  finish(tol);
}

void Polytope::finish(double tol) {
  const int d = dim();
  if (vertices_.size() < static_cast<std::size_t>(d) + 1)
    throw std::invalid_argument("Polytope: empty or lower-dimensional feasible set");

  interior_ = Vector::Zero(d);
  for (const Vector& v : vertices_) interior_ += v;
  interior_ /= static_cast<double>(vertices_.size());

  // Full dimensionality: the vertices must affinely span R^d.
  Matrix spread(d, static_cast<Eigen::Index>(vertices_.size()));
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    spread.col(static_cast<Eigen::Index>(i)) = vertices_[i] - interior_;
  Eigen::FullPivLU<Matrix> lu(spread);
  lu.setThreshold(1e-9);
  if (lu.rank() < d)
    throw std::invalid_argument("Polytope: feasible set has empty interior");
  if (!contains(interior_, tol))
    throw std::invalid_argument("Polytope: interior point fails the constraints");

  radius_ = 0.0;
  for (const Vector& v : vertices_) radius_ = std::max(radius_, v.norm());
}

Polytope Polytope::box(int dim, double halfwidth) {
  if (dim < 1) throw std::invalid_argument("Polytope::box: dim must be >= 1");
  if (!(halfwidth > 0.0))
    throw std::invalid_argument("Polytope::box: halfwidth must be positive");
  Matrix A = Matrix::Zero(2 * dim, dim);
  Vector b = Vector::Constant(2 * dim, halfwidth);
  for (int i = 0; i < dim; ++i) {
    A(2 * i, i) = 1.0;
    A(2 * i + 1, i) = -1.0;
  }
  return Polytope(std::move(A), std::move(b));
}

Polytope Polytope::with_vertices(Matrix A, Vector b, std::vector<Vector> vertices,
                                 double tol) {
  if (A.rows() != b.size() || A.rows() == 0 || A.cols() == 0)
    throw std::invalid_argument("Polytope: inconsistent constraint shapes");
  Polytope p;
  p.A_ = std::move(A);
  p.b_ = std::move(b);
  for (const Vector& v : vertices) {
    if (!((p.A_ * v).array() <= p.b_.array() + tol * 10.0).all())
      throw std::invalid_argument("Polytope::with_vertices: infeasible vertex");
  }
  std::sort(vertices.begin(), vertices.end(), lex_less);
  p.vertices_ = std::move(vertices);
  p.finish(tol);
  return p;
}

Polytope Polytope::load(std::istream& in) {
  int m = 0, d = 0;
  if (!(in >> m >> d) || m < 1 || d < 1)
    throw std::invalid_argument("Polytope::load: bad header, expected \"m d\"");
  Matrix A(m, d);
  Vector b(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < d; ++c) {
      if (!(in >> A(r, c)))
        throw std::invalid_argument("Polytope::load: truncated constraint row");
    }
    if (!(in >> b[r]))
      throw std::invalid_argument("Polytope::load: truncated constraint row");
  }
  return Polytope(std::move(A), std::move(b));
}

Polytope Polytope::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("Polytope::load_file: cannot open " + path);
  return load(in);
}

void Polytope::save(std::ostream& out) const {
  out << num_constraints() << ' ' << dim() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (int r = 0; r < num_constraints(); ++r) {
    line.str("");
    for (int c = 0; c < dim(); ++c) line << A_(r, c) << ' ';
    line << b_[r];
    out << line.str() << '\n';
  }
}

bool Polytope::contains(const Vector& x, double tol) const {
  return ((A_ * x).array() <= b_.array() + tol).all();
}

Vector sample_uniform(const Polytope& p, Rng& rng) {
  const int d = p.dim();
  Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (const Vector& v : p.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr long kMaxRejects = 1000000;
  Vector x(d);
  for (long attempt = 0; attempt < kMaxRejects; ++attempt) {
    for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    if (p.contains(x)) return x;
  }
  throw std::runtime_error(
      "sample_uniform: acceptance rate below 1e-6; use hit_and_run for this shape");
}

Vector hit_and_run(const Polytope& p, const Vector& start, int steps, Rng& rng) {
  if (steps < 1) throw std::invalid_argument("hit_and_run: steps must be >= 1");
  if (start.size() != p.dim())
    throw std::invalid_argument("hit_and_run: start dimension mismatch");
  if (!((p.A() * start).array() < p.b().array()).all())
    throw std::invalid_argument("hit_and_run: start must be strictly interior");

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x = start;
  Vector dir(p.dim());
  for (int s = 0; s < steps; ++s) {
    do {
      for (int i = 0; i < p.dim(); ++i) dir[i] = gauss(rng);
    } while (dir.norm() < 1e-12);
    dir.normalize();

    // Feasible chord {x + t dir}: each row bounds t on the side its normal
    // faces.
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    Vector slack = p.b() - p.A() * x;
    Vector speed = p.A() * dir;
    for (int i = 0; i < p.num_constraints(); ++i) {
      if (speed[i] > 1e-14) {
        t_hi = std::min(t_hi, slack[i] / speed[i]);
      } else if (speed[i] < -1e-14) {
        t_lo = std::max(t_lo, slack[i] / speed[i]);
      }
    }
    if (!(t_lo <= t_hi)) continue;  // numerically degenerate chord, reroll
    x += (t_lo + (t_hi - t_lo) * unit(rng)) * dir;
  }
  return x;
}

LambdaEstimate lambda_uniform(const Polytope& p, int n_samples, Rng& rng) {
  if (n_samples < 10000)
    throw std::invalid_argument("lambda_uniform: need at least 10000 samples");
  const int d = p.dim();
  std::vector<Vector> samples;
  samples.reserve(n_samples);
  Matrix second = Matrix::Zero(d, d);
  for (int i = 0; i < n_samples; ++i) {
    samples.push_back(sample_uniform(p, rng));
    second.selfadjointView<Eigen::Lower>().rankUpdate(samples.back());
  }
  second = Matrix(second.selfadjointView<Eigen::Lower>()) / n_samples;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(second);
  LambdaEstimate est;
  est.value = eig.eigenvalues()[0];
  Vector v = eig.eigenvectors().col(0);

  // Delta method: lambda_min ~ mean of (v.x)^2 along the fixed minimal
  // eigenvector, so its standard error is sd((v.x)^2)/sqrt(n).
  double mean = 0.0, sq = 0.0;
  for (const Vector& x : samples) {
    double proj = v.dot(x);
    mean += proj * proj;
    sq += proj * proj * proj * proj;
  }
  mean /= n_samples;
  sq /= n_samples;
  est.std_error = std::sqrt(std::max(0.0, sq - mean * mean) / n_samples);
  return est;
}

}  // namespace fairbandit
