#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "combandit/errors.hpp"
#include "combandit/learners.hpp"

namespace combandit {
namespace {

Eigen::MatrixXd second_moment(std::span<const Action> actions,
                              std::span<const double> p, std::size_t dim) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const auto& s = actions[a].support();
    for (std::size_t i : s) {
      for (std::size_t j : s) m(i, j) += p[a];
    }
  }
  return m;
}

}  // namespace

std::size_t span_rank(std::span<const Action> actions) {
  if (actions.empty()) return 0;
  const std::size_t dim = actions.front().dim();
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(actions.size(), dim);
  for (std::size_t a = 0; a < actions.size(); ++a) {
    for (std::size_t i : actions[a].support()) rows(a, i) = 1.0;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows);
  qr.setThreshold(1e-9);
  return static_cast<std::size_t>(qr.rank());
}

std::vector<double> least_squares_loss_estimate(std::span<const Action> actions,
                                                std::span<const double> p,
                                                const Action& played,
                                                double observed,
                                                std::size_t rank) {
  if (actions.size() != p.size()) {
    throw std::invalid_argument("distribution and action list differ in size");
  }
  const std::size_t dim = played.dim();
  if (rank == 0 || rank > dim) throw std::invalid_argument("bad span rank");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      second_moment(actions, p, dim));
  // Eigenvalues come in increasing order; the span lives in the top `rank`.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double top = values(dim - 1);
  const double smallest_kept = values(dim - rank);
  if (!(top > 0.0) || smallest_kept <= 1e-12 * top) {
    throw NumericalError(
        "second-moment matrix is singular on span(S) (eigenvalue " +
        std::to_string(smallest_kept) + "); increase gamma");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  for (std::size_t i : played.support()) x(i) = observed;
  const auto basis = eig.eigenvectors().rightCols(rank);
  const Eigen::VectorXd coeffs =
      (basis.transpose() * x).cwiseQuotient(values.tail(rank));
  const Eigen::VectorXd estimate = basis * coeffs;
  return {estimate.data(), estimate.data() + dim};
}

}  // namespace combandit
