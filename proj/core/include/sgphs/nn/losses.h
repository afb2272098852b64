#ifndef SGPHS_NN_LOSSES_H_
#define SGPHS_NN_LOSSES_H_

#include <Eigen/Dense>

namespace sgphs::nn {

struct LossAndGrad {
    double loss = 0.0;
    Eigen::VectorXd grad;
};

[[nodiscard]] auto softmax(const Eigen::VectorXd &logits) -> Eigen::VectorXd;
[[nodiscard]] auto log_softmax(const Eigen::VectorXd &logits) -> Eigen::VectorXd;
[[nodiscard]] auto sigmoid(const Eigen::VectorXd &logits) -> Eigen::VectorXd;

// -log softmax(logits)[target]
[[nodiscard]] auto cross_entropy(const Eigen::VectorXd &logits, int target_index) -> LossAndGrad;

// mean squared error over all entries
[[nodiscard]] auto mse(const Eigen::VectorXd &prediction, const Eigen::VectorXd &target) -> LossAndGrad;

// Summed per-entry Bernoulli cross-entropy; targets in [0, 1].
[[nodiscard]] auto binary_cross_entropy_with_logits(const Eigen::VectorXd &logits, const Eigen::VectorXd &target)
    -> LossAndGrad;

}  // namespace sgphs::nn

#endif  // SGPHS_NN_LOSSES_H_
