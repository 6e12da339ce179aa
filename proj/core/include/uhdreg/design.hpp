#ifndef UHDREG_DESIGN_HPP
#define UHDREG_DESIGN_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "uhdreg/subsets.hpp"

namespace uhdreg {

enum class DesignKind { FixedGiven, GaussianIID };

/// An n x p design. Rows are observations, columns are covariates.
/// `normalized` is true iff every column has Euclidean norm sqrt(n).
/// For GaussianIID designs, `sigma` holds the row covariance; an empty
/// optional stands for the identity (never materialized, so p can be large).
struct DesignMatrix {
  Eigen::MatrixXd entries;
  DesignKind kind = DesignKind::FixedGiven;
  std::optional<Eigen::MatrixXd> sigma;
  bool normalized = false;

  int n() const { return static_cast<int>(entries.rows()); }
  int p() const { return static_cast<int>(entries.cols()); }
};

/// Makes a fixed design from a raw matrix, validating dimensions.
DesignMatrix make_fixed_design(Eigen::MatrixXd entries);

/// A k-sparse vector of dimension p: sorted 1-based support plus the
/// values carried on it.
class SparseVector {
 public:
  SparseVector(int dim, std::vector<int> support, std::vector<double> values);

  int dim() const { return dim_; }
  int sparsity() const { return static_cast<int>(support_.size()); }
  const std::vector<int>& support() const { return support_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::VectorXd dense() const;
  double squared_norm() const;

 private:
  int dim_;
  std::vector<int> support_;   // strictly increasing, within 1..dim
  std::vector<double> values_;
};

/// Extremes of ||X theta||^2 / ||theta||^2 over nonzero k-sparse theta.
struct RestrictedSpectrum {
  int k = 0;
  double phi_minus = 0.0;
  double phi_plus = 0.0;
  std::uint64_t subsets_examined = 0;
};

/// Draws a design whose rows are i.i.d. N(0, Sigma). Deterministic given
/// the seed. Sigma must be symmetric PSD (pivot tolerance 1e-10), checked
/// at construction.
DesignMatrix generate_gaussian_design(int n, int p, const Eigen::MatrixXd& sigma,
                                      std::uint64_t seed, std::uint64_t stream = 0);

/// Identity-covariance variant; never materializes Sigma.
DesignMatrix generate_gaussian_design(int n, int p, std::uint64_t seed,
                                      std::uint64_t stream = 0);

/// Rescales every column to norm sqrt(n). A zero column is an error that
/// names the offending 1-based index.
DesignMatrix normalize_columns(const DesignMatrix& design);

/// Exhaustive restricted eigenvalues of order k: enumerates every size-k
/// support m and takes the extreme eigenvalues of X_m^T X_m.
RestrictedSpectrum restricted_eigenvalues(const DesignMatrix& design, int k,
                                          std::uint64_t budget = kDefaultSubsetBudget);

/// Orthogonal projection of y onto span{X_i : i in m} (m is 1-based),
/// computed by a rank-revealing decomposition. Returns the projection and
/// the numerical rank d_m of X_m.
std::pair<Eigen::VectorXd, int> project_onto_span(const DesignMatrix& design,
                                                  const std::vector<int>& m,
                                                  const Eigen::VectorXd& y);

/// All vectors with exactly k nonzero coefficients equal to rho/sqrt(k):
/// the hypercube alternatives at radius rho. Size C(p,k), budget-capped.
std::vector<SparseVector> hypercube_vectors(int k, int p, double rho,
                                            std::uint64_t budget = kDefaultSubsetBudget);

/// The simulation-study truth vector: first k coordinates equal to
/// u * sqrt(log(p)/n), the rest zero.
SparseVector make_theta_experiment(int k, int p, int n, double u);

namespace detail {

/// Squared norm of the projection of y onto the columns `cols` (0-based)
/// of X, plus the numerical rank of that subdesign. Shared by the tests
/// and estimators hot loops.
std::pair<double, int> projection_sq_norm(const Eigen::MatrixXd& X,
                                          const std::vector<int>& cols,
                                          const Eigen::VectorXd& y);

/// Rank cutoff: singular values below max_sv * n * 1e-12 count as zero.
inline double rank_threshold(double max_sv, int n) { return max_sv * n * 1e-12; }

}  // namespace detail

}  // namespace uhdreg

#endif
