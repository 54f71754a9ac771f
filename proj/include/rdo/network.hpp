#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rdo {

/// Outcome of checking a candidate communication matrix against the
/// connectivity/symmetry/double-stochasticity requirements.
struct ValidationReport {
  bool square = false;
  bool symmetric = false;
  bool row_stochastic = false;
  bool column_stochastic = false;
  bool nonnegative = false;
  bool connected = false; // sigma2 < 1
  double sigma2 = 1.0;

  bool ok() const {
    return square && symmetric && row_stochastic && column_stochastic &&
           nonnegative && connected;
  }
  /// Names of failed checks, comma separated; empty when ok().
  std::string failures() const;
};

ValidationReport validate(const Eigen::MatrixXd &w, double tol = 1e-12);

/// Second-largest singular value via a full SVD. Throws NotValidated when the
/// matrix is not square, symmetric, and doubly stochastic.
double sigma2(const Eigen::MatrixXd &w);

/// Largest singular value of W - (1/n) 11^T; equals sigma2(W) for doubly
/// stochastic W.
double sigma2_centered(const Eigen::MatrixXd &w);

/// Immutable, validated communication matrix.
class WeightMatrix {
public:
  /// Throws InvalidTopology carrying the failed checks.
  static WeightMatrix from_dense(Eigen::MatrixXd w);

  int size() const { return static_cast<int>(w_.rows()); }
  const Eigen::MatrixXd &dense() const { return w_; }
  double operator()(int i, int j) const { return w_(i, j); }
  double sigma2() const { return sigma2_; }
  /// Indices j with w_ij > 0, including i itself when the self-weight is
  /// positive, in increasing order.
  const std::vector<int> &support(int i) const { return support_[i]; }

private:
  WeightMatrix(Eigen::MatrixXd w, double s2);

  Eigen::MatrixXd w_;
  double sigma2_;
  std::vector<std::vector<int>> support_;
};

enum class RingWeights { Uniform, Metropolis };

/// Ring with k/2 neighbors on each side. Uniform weights put 1/(k+1) on the
/// closed neighborhood; Metropolis weights use 1/(1 + max(deg_i, deg_j)).
WeightMatrix build_ring(int n, int k, RingWeights weights = RingWeights::Uniform);

/// All entries 1/n.
WeightMatrix build_complete(int n);

/// Metropolis-Hastings weights for a symmetric 0/1 adjacency matrix.
Eigen::MatrixXd metropolis_weights(const Eigen::MatrixXd &adjacency);

/// Plain-text table: n on the first line, then n rows of n reals.
Eigen::MatrixXd read_matrix_text(const std::string &path);
void write_matrix_text(const Eigen::MatrixXd &w, const std::string &path);

} // namespace rdo
