#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ipd/rng.hpp"
#include "ipd/split.hpp"

namespace ipd {

// Per-arm ridge-regression state shared by LinUCB and contextual Thompson
// sampling: A = I + sum x x^T, b = sum r x, theta = A^{-1} b.
struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  void reset(int dim);
  int dim() const { return static_cast<int>(b.size()); }

  Eigen::VectorXd theta() const;
  // Posterior draw theta + v * L^{-T} z with A = L L^T and z ~ N(0, I).
  // v == 0 reads the mean without consuming randomness.
  Eigen::VectorXd sample_theta(double v, Rng& rng) const;
  // UCB exploration width sqrt(x^T A^{-1} x).
  double confidence_width(const Eigen::VectorXd& x) const;

  void update(const Eigen::VectorXd& x, double reward);
};

// LinUCB scorer over one model per arm: score_k = theta_k^T x + alpha * width_k.
// Ties break toward the lowest arm index.
class LinUcbCore {
 public:
  void reset(int arms, int dim);
  int arms() const { return static_cast<int>(models_.size()); }

  std::vector<double> scores(const Eigen::VectorXd& x, double alpha) const;
  int select(const Eigen::VectorXd& x, double alpha) const;
  void update(int arm, const Eigen::VectorXd& x, double reward);

  const LinearModel& model(int arm) const { return models_[arm]; }

 private:
  std::vector<LinearModel> models_;
};

// Contextual Thompson sampling: draw theta_k from N(A_k^{-1} b_k, v^2 A_k^{-1})
// per arm and play the argmax of theta_k^T x. With v == 0 no draws happen and
// the choice coincides with LinUCB at alpha == 0.
class CtsCore {
 public:
  void reset(int arms, int dim);
  int arms() const { return static_cast<int>(models_.size()); }

  int select(const Eigen::VectorXd& x, double v, Rng& rng) const;
  void update(int arm, const Eigen::VectorXd& x, double reward);

  const LinearModel& model(int arm) const { return models_[arm]; }

 private:
  std::vector<LinearModel> models_;
};

// Split contextual Thompson sampling: each arm keeps separate positive and
// negative reward models and scores by the difference of their posterior
// draws. Stream updates are weighted by the split profile; a stream whose
// (lambda, w) pair is (0, 0) stays untouched at its prior and never consumes
// randomness.
class SctsCore {
 public:
  void reset(int arms, int dim);
  int arms() const { return static_cast<int>(pos_.size()); }

  int select(const Eigen::VectorXd& x, double v, const SplitParams& params, Rng& rng) const;
  void update(int arm, const Eigen::VectorXd& x, SplitReward r, const SplitParams& params);

  const LinearModel& positive(int arm) const { return pos_[arm]; }
  const LinearModel& negative(int arm) const { return neg_[arm]; }

 private:
  static bool stream_enabled(double lambda, double w) { return lambda != 0.0 || w != 0.0; }

  std::vector<LinearModel> pos_;
  std::vector<LinearModel> neg_;
};

}  // namespace ipd
