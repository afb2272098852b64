#include <sgphs/vqvae.h>

#include <sgphs/errors.h>
#include <sgphs/nn/losses.h>

#include <fmt/format.h>

namespace sgphs {

auto quantize(const Eigen::VectorXd &z_e, const Eigen::MatrixXd &codebook) -> Quantization {
    if (codebook.rows() == 0) {
        throw ConfigurationError("cannot quantize against an empty codebook");
    }
    if (codebook.cols() != z_e.size()) {
        throw ConfigurationError(
            fmt::format("encoding has dimension {}, codebook has {}", z_e.size(), codebook.cols()));
    }
    Quantization best;
    best.squared_distance = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < codebook.rows(); ++i) {
        const double d = (codebook.row(i).transpose() - z_e).squaredNorm();
        if (d < best.squared_distance) {
            best.squared_distance = d;
            best.index = static_cast<int>(i);
        }
    }
    best.code = codebook.row(best.index).transpose();
    return best;
}

auto vq_loss(const Eigen::VectorXd &target, const Eigen::VectorXd &reconstruction_logits, const Eigen::VectorXd &z_e,
             const Eigen::MatrixXd &codebook, int index, double beta) -> VqLoss {
    if (index < 0 || index >= codebook.rows()) {
        throw UsageError(fmt::format("codebook index {} out of range [0, {})", index, codebook.rows()));
    }
    const Eigen::VectorXd code = codebook.row(index).transpose();
    const Eigen::VectorXd diff = z_e - code;
    auto rec = nn::binary_cross_entropy_with_logits(reconstruction_logits, target);
    VqLoss out;
    out.reconstruction = rec.loss;
    out.codebook = diff.squaredNorm();
    out.commitment = beta * diff.squaredNorm();
    out.total = out.reconstruction + out.codebook + out.commitment;
    out.grad_reconstruction_logits = std::move(rec.grad);
    out.grad_z_e_commitment = 2.0 * beta * diff;
    out.grad_code = -2.0 * diff;
    return out;
}

Vqvae::Vqvae(const VqvaeConfig &config, std::vector<int> observation_shape, std::mt19937_64 &rng)
    : config_(config), observation_shape_(std::move(observation_shape)) {
    if (config_.codebook_size < 1 || config_.codebook_dim < 1) {
        throw ConfigurationError("codebook size and dimension must be positive");
    }
    if (config_.beta <= 0.0) {
        throw ConfigurationError("commitment weight beta must be positive");
    }
    if (observation_shape_.size() != 3) {
        throw ConfigurationError("VQVAE expects (channels, height, width) observations");
    }
    const auto obs = static_cast<int>(shape_numel(observation_shape_));
    encoder_ = nn::Mlp("vqvae.encoder",
                       nn::layer_sizes(2 * obs, config_.hidden_width, config_.hidden_layers, config_.codebook_dim),
                       rng);
    decoder_ = nn::Mlp("vqvae.decoder",
                       nn::layer_sizes(obs + config_.codebook_dim, config_.hidden_width, config_.hidden_layers, obs),
                       rng);
    const double bound = 1.0 / static_cast<double>(config_.codebook_size);
    std::uniform_real_distribution<double> init(-bound, bound);
    codebook_.resize(config_.codebook_size, config_.codebook_dim);
    for (int r = 0; r < config_.codebook_size; ++r) {
        for (int c = 0; c < config_.codebook_dim; ++c) {
            codebook_(r, c) = init(rng);
        }
    }
    codebook_grad_ = Eigen::MatrixXd::Zero(config_.codebook_size, config_.codebook_dim);
}

void Vqvae::check_shape(const Tensor &t) const {
    if (t.shape() != observation_shape_) {
        throw ConfigurationError("state encoding shape does not match the subgoal generator");
    }
}

auto Vqvae::encode(const Tensor &current, const Tensor &target) const -> Eigen::VectorXd {
    check_shape(current);
    check_shape(target);
    return encoder_.forward(concat_channels(current, target).as_vector());
}

auto Vqvae::quantize(const Eigen::VectorXd &z_e) const -> Quantization {
    return sgphs::quantize(z_e, codebook_);
}

auto Vqvae::decode_logits(const Tensor &current, const Eigen::VectorXd &code) const -> Eigen::VectorXd {
    check_shape(current);
    Eigen::VectorXd input(static_cast<Eigen::Index>(current.size()) + code.size());
    input << current.as_vector(), code;
    return decoder_.forward(input);
}

auto Vqvae::decode(const Tensor &current, const Eigen::VectorXd &code) const -> Tensor {
    const Eigen::VectorXd probs = nn::sigmoid(decode_logits(current, code));
    return {observation_shape_, std::vector<double>(probs.data(), probs.data() + probs.size())};
}

auto Vqvae::generate(const Tensor &current, int codebook_index) const -> Tensor {
    if (codebook_index < 0 || codebook_index >= codebook_.rows()) {
        throw UsageError("codebook index out of range");
    }
    return decode(current, codebook_.row(codebook_index).transpose());
}

auto Vqvae::forward_backward(const Tensor &current, const Tensor &target) -> Step {
    check_shape(current);
    check_shape(target);
    nn::MlpCache encoder_cache;
    nn::MlpCache decoder_cache;
    const Eigen::VectorXd z_e = encoder_.forward(concat_channels(current, target).as_vector(), encoder_cache);
    const Quantization q = quantize(z_e);

    const auto obs = static_cast<Eigen::Index>(current.size());
    Eigen::VectorXd decoder_input(obs + q.code.size());
    decoder_input << current.as_vector(), q.code;
    const Eigen::VectorXd logits = decoder_.forward(decoder_input, decoder_cache);

    Step step;
    step.index = q.index;
    step.z_e = z_e;
    step.loss = vq_loss(target.as_vector(), logits, z_e, codebook_, q.index, config_.beta);
    step.reconstruction = nn::sigmoid(logits);

    const Eigen::VectorXd grad_decoder_input = decoder_.backward(decoder_cache, step.loss.grad_reconstruction_logits);
    // straight-through: the gradient at z_q is copied onto z_e
    const Eigen::VectorXd grad_z_q = grad_decoder_input.tail(q.code.size());
    encoder_.backward(encoder_cache, grad_z_q + step.loss.grad_z_e_commitment);
    codebook_grad_.row(q.index) += step.loss.grad_code.transpose();
    return step;
}

void Vqvae::zero_grad() {
    encoder_.zero_grad();
    decoder_.zero_grad();
    codebook_grad_.setZero();
}

auto Vqvae::parameters() -> std::vector<nn::ParamRef> {
    auto params = encoder_.parameters();
    auto decoder_params = decoder_.parameters();
    params.insert(params.end(), decoder_params.begin(), decoder_params.end());
    params.push_back({"vqvae.codebook",
                      {static_cast<int>(codebook_.rows()), static_cast<int>(codebook_.cols())},
                      {codebook_.data(), static_cast<std::size_t>(codebook_.size())},
                      {codebook_grad_.data(), static_cast<std::size_t>(codebook_grad_.size())}});
    return params;
}

auto train_subgoal_pair(Vqvae &vqvae, nn::Adam &optimizer, const Tensor &current, const Tensor &target)
    -> Vqvae::Step {
    vqvae.zero_grad();
    auto step = vqvae.forward_backward(current, target);
    const auto params = vqvae.parameters();
    optimizer.step(params);
    return step;
}

}  // namespace sgphs
