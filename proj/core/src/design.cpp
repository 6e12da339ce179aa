#include "uhdreg/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "uhdreg/rng.hpp"

namespace uhdreg {

DesignMatrix make_fixed_design(Eigen::MatrixXd entries) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw std::invalid_argument("design must have n >= 1 and p >= 1");
  }
  DesignMatrix d;
  d.entries = std::move(entries);
  d.kind = DesignKind::FixedGiven;
  return d;
}

SparseVector::SparseVector(int dim, std::vector<int> support, std::vector<double> values)
    : dim_(dim), support_(std::move(support)), values_(std::move(values)) {
  if (dim_ < 0) throw std::invalid_argument("SparseVector: negative dimension");
  if (support_.size() != values_.size()) {
    throw std::invalid_argument("SparseVector: support and value counts differ");
  }
  int prev = 0;
  for (int idx : support_) {
    if (idx <= prev || idx > dim_) {
      throw std::invalid_argument(
          "SparseVector: support must be strictly increasing within 1.." +
          std::to_string(dim_));
    }
    prev = idx;
  }
}

Eigen::VectorXd SparseVector::dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (std::size_t i = 0; i < support_.size(); ++i) out(support_[i] - 1) = values_[i];
  return out;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

namespace {

// Factor of a symmetric PSD matrix: Cholesky when definite, otherwise an
// eigendecomposition with small negatives clamped. Rejects matrices that
// are asymmetric or indefinite beyond the 1e-10 pivot tolerance.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma) {
  const int p = static_cast<int>(sigma.rows());
  if (sigma.cols() != p) throw std::invalid_argument("covariance must be square");
  double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw std::invalid_argument("covariance is not positive semidefinite");
  }
  Eigen::VectorXd sqrt_ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * sqrt_ev.asDiagonal();
}

}  // namespace

DesignMatrix generate_gaussian_design(int n, int p, const Eigen::MatrixXd& sigma,
                                      std::uint64_t seed, std::uint64_t stream) {
  if (n < 1 || p < 1) throw std::invalid_argument("need n >= 1 and p >= 1");
  if (sigma.rows() != p) throw std::invalid_argument("covariance size must match p");
  Eigen::MatrixXd factor = psd_factor(sigma);

  DesignMatrix d;
  d.entries.resize(n, p);
  GaussianSampler gauss(seed, stream);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    gauss.fill(z);
    d.entries.row(i) = (factor * z).transpose();
  }
  d.kind = DesignKind::GaussianIID;
  d.sigma = sigma;
  return d;
}

DesignMatrix generate_gaussian_design(int n, int p, std::uint64_t seed,
                                      std::uint64_t stream) {
  if (n < 1 || p < 1) throw std::invalid_argument("need n >= 1 and p >= 1");
  DesignMatrix d;
  d.entries.resize(n, p);
  GaussianSampler gauss(seed, stream);
  gauss.fill(d.entries);
  d.kind = DesignKind::GaussianIID;
  return d;
}

DesignMatrix normalize_columns(const DesignMatrix& design) {
  const int n = design.n();
  const int p = design.p();
  const double target = std::sqrt(static_cast<double>(n));
  DesignMatrix out = design;
  for (int j = 0; j < p; ++j) {
    double norm = out.entries.col(j).norm();
    if (norm == 0.0) {
      throw std::invalid_argument("normalize_columns: column " +
                                  std::to_string(j + 1) + " is zero");
    }
    out.entries.col(j) *= target / norm;
  }
  out.normalized = true;
  return out;
}

RestrictedSpectrum restricted_eigenvalues(const DesignMatrix& design, int k,
                                          std::uint64_t budget) {
  const int p = design.p();
  if (k < 1 || k > p) {
    throw std::invalid_argument("restricted_eigenvalues: need 1 <= k <= p");
  }
  check_subset_budget(p, k, budget);

  RestrictedSpectrum spec;
  spec.k = k;
  spec.phi_minus = std::numeric_limits<double>::infinity();
  spec.phi_plus = -std::numeric_limits<double>::infinity();

  Eigen::MatrixXd sub(design.n(), k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  for_each_subset(p, k, [&](const std::vector<int>& cols) {
    for (int j = 0; j < k; ++j) sub.col(j) = design.entries.col(cols[j]);
    eig.compute(sub.transpose() * sub, Eigen::EigenvaluesOnly);
    spec.phi_minus = std::min(spec.phi_minus, eig.eigenvalues().minCoeff());
    spec.phi_plus = std::max(spec.phi_plus, eig.eigenvalues().maxCoeff());
    ++spec.subsets_examined;
  });
  // Gram matrices are PSD; clip the tiny negative eigenvalues rounding makes.
  spec.phi_minus = std::max(spec.phi_minus, 0.0);
  spec.phi_plus = std::max(spec.phi_plus, 0.0);
  return spec;
}

namespace detail {

std::pair<double, int> projection_sq_norm(const Eigen::MatrixXd& X,
                                          const std::vector<int>& cols,
                                          const Eigen::VectorXd& y) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd sub(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = X.col(cols[j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return {0.0, 0};
  double cutoff = rank_threshold(sv(0), n);
  double sq = 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      double coeff = svd.matrixU().col(i).dot(y);
      sq += coeff * coeff;
      ++rank;
    }
  }
  return {sq, rank};
}

}  // namespace detail

std::pair<Eigen::VectorXd, int> project_onto_span(const DesignMatrix& design,
                                                  const std::vector<int>& m,
                                                  const Eigen::VectorXd& y) {
  if (m.empty()) throw std::invalid_argument("project_onto_span: empty index set");
  const int n = design.n();
  const int p = design.p();
  if (y.size() != n) throw std::invalid_argument("project_onto_span: length of y != n");
  Eigen::MatrixXd sub(n, m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] < 1 || m[j] > p) {
      throw std::invalid_argument("project_onto_span: index out of 1..p");
    }
    sub.col(j) = design.entries.col(m[j] - 1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(n);
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    double cutoff = detail::rank_threshold(sv(0), n);
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) {
        proj += svd.matrixU().col(i) * svd.matrixU().col(i).dot(y);
        ++rank;
      }
    }
  }
  return {proj, rank};
}

std::vector<SparseVector> hypercube_vectors(int k, int p, double rho,
                                            std::uint64_t budget) {
  if (k < 1 || k > p) throw std::invalid_argument("hypercube_vectors: need 1 <= k <= p");
  if (rho <= 0.0) throw std::invalid_argument("hypercube_vectors: need rho > 0");
  check_subset_budget(p, k, budget);

  const double value = rho / std::sqrt(static_cast<double>(k));
  std::vector<SparseVector> out;
  out.reserve(static_cast<std::size_t>(binomial_coefficient(p, k)));
  std::vector<int> support(k);
  for_each_subset(p, k, [&](const std::vector<int>& cols) {
    for (int j = 0; j < k; ++j) support[j] = cols[j] + 1;
    out.emplace_back(p, support, std::vector<double>(k, value));
  });
  return out;
}

SparseVector make_theta_experiment(int k, int p, int n, double u) {
  if (k < 1 || k > p) throw std::invalid_argument("make_theta_experiment: need 1 <= k <= p");
  if (n < 1) throw std::invalid_argument("make_theta_experiment: need n >= 1");
  if (u <= 0.0) throw std::invalid_argument("make_theta_experiment: need u > 0");
  double amplitude = u * std::sqrt(std::log(static_cast<double>(p)) / n);
  std::vector<int> support(k);
  for (int i = 0; i < k; ++i) support[i] = i + 1;
  return SparseVector(p, std::move(support), std::vector<double>(k, amplitude));
}

}  // namespace uhdreg
