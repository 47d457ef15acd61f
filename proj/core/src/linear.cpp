#include "ipd/linear.hpp"

#include <cmath>

#include "ipd/bandits.hpp"

namespace ipd {

void LinearModel::reset(int dim) {
  A = Eigen::MatrixXd::Identity(dim, dim);
  b = Eigen::VectorXd::Zero(dim);
}

Eigen::VectorXd LinearModel::theta() const { return A.ldlt().solve(b); }

Eigen::VectorXd LinearModel::sample_theta(double v, Rng& rng) const {
  Eigen::VectorXd mean = theta();
  if (v == 0.0) return mean;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  Eigen::VectorXd z(dim());
  for (int i = 0; i < dim(); ++i) z[i] = rng.normal();
  // Covariance v^2 A^{-1} = (v L^{-T}) (v L^{-T})^T for A = L L^T.
  return mean + v * llt.matrixU().solve(z);
}

double LinearModel::confidence_width(const Eigen::VectorXd& x) const {
  return std::sqrt(x.dot(A.ldlt().solve(x)));
}

void LinearModel::update(const Eigen::VectorXd& x, double reward) {
  A.noalias() += x * x.transpose();
  b.noalias() += reward * x;
}

void LinUcbCore::reset(int arms, int dim) {
  models_.assign(arms, LinearModel{});
  for (auto& m : models_) m.reset(dim);
}

std::vector<double> LinUcbCore::scores(const Eigen::VectorXd& x, double alpha) const {
  std::vector<double> s(models_.size());
  for (size_t k = 0; k < models_.size(); ++k) {
    s[k] = models_[k].theta().dot(x) + alpha * models_[k].confidence_width(x);
  }
  return s;
}

int LinUcbCore::select(const Eigen::VectorXd& x, double alpha) const {
  return argmax_first(scores(x, alpha));
}

void LinUcbCore::update(int arm, const Eigen::VectorXd& x, double reward) {
  models_[arm].update(x, reward);
}

void CtsCore::reset(int arms, int dim) {
  models_.assign(arms, LinearModel{});
  for (auto& m : models_) m.reset(dim);
}

int CtsCore::select(const Eigen::VectorXd& x, double v, Rng& rng) const {
  std::vector<double> s(models_.size());
  for (size_t k = 0; k < models_.size(); ++k) {
    s[k] = models_[k].sample_theta(v, rng).dot(x);
  }
  return argmax_first(s);
}

void CtsCore::update(int arm, const Eigen::VectorXd& x, double reward) {
  models_[arm].update(x, reward);
}

void SctsCore::reset(int arms, int dim) {
  pos_.assign(arms, LinearModel{});
  neg_.assign(arms, LinearModel{});
  for (auto& m : pos_) m.reset(dim);
  for (auto& m : neg_) m.reset(dim);
}

int SctsCore::select(const Eigen::VectorXd& x, double v, const SplitParams& params,
                     Rng& rng) const {
  const double v_pos = stream_enabled(params.lambda_pos, params.w_pos) ? v : 0.0;
  const double v_neg = stream_enabled(params.lambda_neg, params.w_neg) ? v : 0.0;
  std::vector<double> s(pos_.size());
  for (size_t k = 0; k < pos_.size(); ++k) {
    s[k] = pos_[k].sample_theta(v_pos, rng).dot(x) - neg_[k].sample_theta(v_neg, rng).dot(x);
  }
  return argmax_first(s);
}

void SctsCore::update(int arm, const Eigen::VectorXd& x, SplitReward r,
                      const SplitParams& params) {
  if (stream_enabled(params.lambda_pos, params.w_pos)) {
    pos_[arm].A.noalias() += x * x.transpose();
    pos_[arm].b = params.lambda_pos * pos_[arm].b + params.w_pos * r.pos * x;
  }
  if (stream_enabled(params.lambda_neg, params.w_neg)) {
    neg_[arm].A.noalias() += x * x.transpose();
    neg_[arm].b = params.lambda_neg * neg_[arm].b + params.w_neg * std::abs(r.neg) * x;
  }
}

}  // namespace ipd
