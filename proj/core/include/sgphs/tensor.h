#ifndef SGPHS_TENSOR_H_
#define SGPHS_TENSOR_H_

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace sgphs {

// Dense row-major real tensor. State encodings use (channels, height, width).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> data);

    [[nodiscard]] auto shape() const noexcept -> const std::vector<int> & {
        return shape_;
    }
    [[nodiscard]] auto size() const noexcept -> std::size_t {
        return data_.size();
    }
    [[nodiscard]] auto data() noexcept -> std::span<double> {
        return data_;
    }
    [[nodiscard]] auto data() const noexcept -> std::span<const double> {
        return data_;
    }
    [[nodiscard]] auto values() const noexcept -> const std::vector<double> & {
        return data_;
    }

    // 3-d accessors, valid for (channels, height, width) tensors
    [[nodiscard]] auto at(int c, int h, int w) -> double &;
    [[nodiscard]] auto at(int c, int h, int w) const -> double;

    [[nodiscard]] auto as_vector() const -> Eigen::VectorXd;
    [[nodiscard]] auto all_finite() const noexcept -> bool;

    auto operator==(const Tensor &) const -> bool = default;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

[[nodiscard]] auto shape_numel(const std::vector<int> &shape) -> std::size_t;

// Channel-axis concatenation of two (C, H, W) tensors with equal H and W.
[[nodiscard]] auto concat_channels(const Tensor &a, const Tensor &b) -> Tensor;

}  // namespace sgphs

#endif  // SGPHS_TENSOR_H_
