#include "rdo/network.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rdo/error.hpp"

namespace rdo {

std::string ValidationReport::failures() const {
  std::vector<std::string> f;
  if (!square) f.emplace_back("square");
  if (!symmetric) f.emplace_back("symmetric");
  if (!row_stochastic) f.emplace_back("row sums");
  if (!column_stochastic) f.emplace_back("column sums");
  if (!nonnegative) f.emplace_back("nonnegative");
  if (!connected) f.emplace_back("connected (sigma2 < 1)");
  std::string out;
  for (const auto &s : f) out += (out.empty() ? "" : ", ") + s;
  return out;
}

namespace {

double second_singular_value(const Eigen::MatrixXd &w) {
  if (w.rows() < 2) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
  return svd.singularValues()[1];
}

} // namespace

ValidationReport validate(const Eigen::MatrixXd &w, double tol) {
  ValidationReport r;
  r.square = w.rows() == w.cols() && w.rows() > 0;
  if (!r.square) return r;
  const Eigen::Index n = w.rows();
  r.symmetric = (w - w.transpose()).lpNorm<Eigen::Infinity>() <= tol;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  r.row_stochastic = (w * ones - ones).lpNorm<Eigen::Infinity>() <= tol;
  r.column_stochastic = (w.transpose() * ones - ones).lpNorm<Eigen::Infinity>() <= tol;
  r.nonnegative = w.minCoeff() >= 0.0;
  r.sigma2 = second_singular_value(w);
  r.connected = r.sigma2 < 1.0 - 1e-12;
  return r;
}

double sigma2(const Eigen::MatrixXd &w) {
  const ValidationReport r = validate(w);
  if (!(r.square && r.symmetric && r.row_stochastic && r.column_stochastic))
    throw Error(ErrorCode::NotValidated,
                "sigma2 needs a symmetric doubly stochastic matrix; failed: " +
                    r.failures());
  return r.sigma2;
}

double sigma2_centered(const Eigen::MatrixXd &w) {
  const Eigen::Index n = w.rows();
  const Eigen::MatrixXd centered =
      w - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered,
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd w, double s2)
    : w_(std::move(w)), sigma2_(s2), support_(w_.rows()) {
  for (Eigen::Index i = 0; i < w_.rows(); ++i)
    for (Eigen::Index j = 0; j < w_.cols(); ++j)
      if (w_(i, j) > 0.0) support_[i].push_back(static_cast<int>(j));
}

WeightMatrix WeightMatrix::from_dense(Eigen::MatrixXd w) {
  const ValidationReport r = validate(w);
  if (!r.ok())
    throw Error(ErrorCode::InvalidTopology,
                "communication matrix failed: " + r.failures());
  return WeightMatrix(std::move(w), r.sigma2);
}

WeightMatrix build_ring(int n, int k, RingWeights weights) {
  if (n < 3) throw Error(ErrorCode::InvalidTopology, "ring needs n >= 3");
  if (k < 2 || k % 2 != 0 || k >= n)
    throw Error(ErrorCode::InvalidTopology,
                "ring degree k must be even with 2 <= k < n, got k = " +
                    std::to_string(k));
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int off = 1; off <= k / 2; ++off) {
      adjacency(i, (i + off) % n) = 1.0;
      adjacency(i, (i - off + n) % n) = 1.0;
    }
  if (weights == RingWeights::Metropolis)
    return WeightMatrix::from_dense(metropolis_weights(adjacency));

  Eigen::MatrixXd w = adjacency / static_cast<double>(k + 1);
  w.diagonal().setConstant(1.0 / static_cast<double>(k + 1));
  return WeightMatrix::from_dense(std::move(w));
}

WeightMatrix build_complete(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidTopology, "complete graph needs n >= 2");
  return WeightMatrix::from_dense(
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n)));
}

Eigen::MatrixXd metropolis_weights(const Eigen::MatrixXd &adjacency) {
  const Eigen::Index n = adjacency.rows();
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && adjacency(i, j) != 0.0) degree[i] += 1.0;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && adjacency(i, j) != 0.0) {
        w(i, j) = 1.0 / (1.0 + std::max(degree[i], degree[j]));
        off += w(i, j);
      }
    w(i, i) = 1.0 - off;
  }
  return w;
}

Eigen::MatrixXd read_matrix_text(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open matrix file " + path);
  long n = 0;
  if (!(in >> n) || n < 1)
    throw Error(ErrorCode::Io, path + ": expected a positive size header");
  Eigen::MatrixXd w(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (!(in >> w(i, j)))
        throw Error(ErrorCode::Io, path + ": truncated matrix at row " +
                                       std::to_string(i + 1));
  return w;
}

void write_matrix_text(const Eigen::MatrixXd &w, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write matrix file " + path);
  out << w.rows() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? " " : "") << w(i, j);
    out << '\n';
  }
}

} // namespace rdo
