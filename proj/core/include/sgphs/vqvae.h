#ifndef SGPHS_VQVAE_H_
#define SGPHS_VQVAE_H_

#include <sgphs/nn/adam.h>
#include <sgphs/nn/mlp.h>
#include <sgphs/tensor.h>

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace sgphs {

struct VqvaeConfig {
    int codebook_size = 4;
    int codebook_dim = 128;
    double beta = 0.25;
    int hidden_width = 128;
    int hidden_layers = 2;
};

struct Quantization {
    int index = 0;
    Eigen::VectorXd code;
    double squared_distance = 0.0;
};

// Nearest codebook row by Euclidean distance; ties go to the lowest index.
[[nodiscard]] auto quantize(const Eigen::VectorXd &z_e, const Eigen::MatrixXd &codebook) -> Quantization;

struct VqLoss {
    double total = 0.0;
    double reconstruction = 0.0;
    double codebook = 0.0;    // |sg(z_e) - e_c|^2
    double commitment = 0.0;  // beta * |z_e - sg(e_c)|^2
    Eigen::VectorXd grad_reconstruction_logits;
    Eigen::VectorXd grad_z_e_commitment;  // moves only the encoder
    Eigen::VectorXd grad_code;            // moves only codebook row c
};

// Reconstruction term is summed Bernoulli cross-entropy between the decoder
// logits and the target encoding.
[[nodiscard]] auto vq_loss(const Eigen::VectorXd &target, const Eigen::VectorXd &reconstruction_logits,
                           const Eigen::VectorXd &z_e, const Eigen::MatrixXd &codebook, int index, double beta)
    -> VqLoss;

// Subgoal generator: encoder (s_cur, s_tar) -> z_e, codebook, decoder (s_cur, e) -> s_tar.
class Vqvae {
public:
    struct Step {
        int index = 0;
        VqLoss loss;
        Eigen::VectorXd reconstruction;  // post-sigmoid, same layout as the state encoding
        Eigen::VectorXd z_e;
    };

    Vqvae() = default;
    Vqvae(const VqvaeConfig &config, std::vector<int> observation_shape, std::mt19937_64 &rng);

    [[nodiscard]] auto encode(const Tensor &current, const Tensor &target) const -> Eigen::VectorXd;
    [[nodiscard]] auto quantize(const Eigen::VectorXd &z_e) const -> Quantization;
    [[nodiscard]] auto decode_logits(const Tensor &current, const Eigen::VectorXd &code) const -> Eigen::VectorXd;
    // Soft reconstruction in [0, 1] shaped like the observation.
    [[nodiscard]] auto decode(const Tensor &current, const Eigen::VectorXd &code) const -> Tensor;
    [[nodiscard]] auto generate(const Tensor &current, int codebook_index) const -> Tensor;

    // One forward/backward pass of the full VQ loss; gradients accumulate.
    auto forward_backward(const Tensor &current, const Tensor &target) -> Step;

    void zero_grad();
    [[nodiscard]] auto parameters() -> std::vector<nn::ParamRef>;

    [[nodiscard]] auto config() const noexcept -> const VqvaeConfig & {
        return config_;
    }
    [[nodiscard]] auto observation_shape() const noexcept -> const std::vector<int> & {
        return observation_shape_;
    }
    [[nodiscard]] auto codebook() noexcept -> Eigen::MatrixXd & {
        return codebook_;
    }
    [[nodiscard]] auto codebook() const noexcept -> const Eigen::MatrixXd & {
        return codebook_;
    }
    [[nodiscard]] auto codebook_grad() const noexcept -> const Eigen::MatrixXd & {
        return codebook_grad_;
    }
    [[nodiscard]] auto encoder() noexcept -> nn::Mlp & {
        return encoder_;
    }
    [[nodiscard]] auto decoder() noexcept -> nn::Mlp & {
        return decoder_;
    }

private:
    void check_shape(const Tensor &t) const;

    VqvaeConfig config_{};
    std::vector<int> observation_shape_;
    nn::Mlp encoder_;
    nn::Mlp decoder_;
    Eigen::MatrixXd codebook_;  // (k, D)
    Eigen::MatrixXd codebook_grad_;
};

// One optimizer step on the VQ loss for a (current, target) pair.
auto train_subgoal_pair(Vqvae &vqvae, nn::Adam &optimizer, const Tensor &current, const Tensor &target)
    -> Vqvae::Step;

}  // namespace sgphs

#endif  // SGPHS_VQVAE_H_
