#include <sgphs/nn/losses.h>

#include <sgphs/errors.h>

#include <cmath>

namespace sgphs::nn {

auto softmax(const Eigen::VectorXd &logits) -> Eigen::VectorXd {
    const Eigen::VectorXd shifted = (logits.array() - logits.maxCoeff()).exp().matrix();
    return shifted / shifted.sum();
}

auto log_softmax(const Eigen::VectorXd &logits) -> Eigen::VectorXd {
    const double max = logits.maxCoeff();
    const double log_sum = max + std::log((logits.array() - max).exp().sum());
    return (logits.array() - log_sum).matrix();
}

auto sigmoid(const Eigen::VectorXd &logits) -> Eigen::VectorXd {
    Eigen::VectorXd out(logits.size());
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        const double x = logits(i);
        if (x >= 0.0) {
            out(i) = 1.0 / (1.0 + std::exp(-x));
        } else {
            const double e = std::exp(x);
            out(i) = e / (1.0 + e);
        }
    }
    return out;
}

auto cross_entropy(const Eigen::VectorXd &logits, int target_index) -> LossAndGrad {
    if (target_index < 0 || target_index >= logits.size()) {
        throw UsageError("cross-entropy target index out of range");
    }
    const Eigen::VectorXd log_probs = log_softmax(logits);
    LossAndGrad out;
    out.loss = -log_probs(target_index);
    out.grad = log_probs.array().exp().matrix();
    out.grad(target_index) -= 1.0;
    return out;
}

auto mse(const Eigen::VectorXd &prediction, const Eigen::VectorXd &target) -> LossAndGrad {
    if (prediction.size() != target.size() || prediction.size() == 0) {
        throw UsageError("mse needs equally sized, non-empty vectors");
    }
    const Eigen::VectorXd diff = prediction - target;
    const auto n = static_cast<double>(diff.size());
    return {diff.squaredNorm() / n, 2.0 * diff / n};
}

auto binary_cross_entropy_with_logits(const Eigen::VectorXd &logits, const Eigen::VectorXd &target) -> LossAndGrad {
    if (logits.size() != target.size()) {
        throw UsageError("binary cross-entropy needs equally sized vectors");
    }
    LossAndGrad out;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        const double x = logits(i);
        // softplus(x) - t * x, written to avoid overflow
        out.loss += std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))) - target(i) * x;
    }
    out.grad = sigmoid(logits) - target;
    return out;
}

}  // namespace sgphs::nn
