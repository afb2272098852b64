#include <sgphs/tensor.h>

#include <sgphs/errors.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace sgphs {

auto shape_numel(const std::vector<int> &shape) -> std::size_t {
    std::size_t n = 1;
    for (const int d : shape) {
        if (d < 0) {
            throw ConfigurationError("tensor dimension must be non-negative");
        }
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_numel(shape_)) {
        throw ConfigurationError("tensor data length does not match its shape");
    }
}

auto Tensor::at(int c, int h, int w) -> double & {
    const auto idx = (static_cast<std::size_t>(c) * static_cast<std::size_t>(shape_[1]) + static_cast<std::size_t>(h))
                         * static_cast<std::size_t>(shape_[2])
                     + static_cast<std::size_t>(w);
    return data_[idx];
}

auto Tensor::at(int c, int h, int w) const -> double {
    const auto idx = (static_cast<std::size_t>(c) * static_cast<std::size_t>(shape_[1]) + static_cast<std::size_t>(h))
                         * static_cast<std::size_t>(shape_[2])
                     + static_cast<std::size_t>(w);
    return data_[idx];
}

auto Tensor::as_vector() const -> Eigen::VectorXd {
    return Eigen::Map<const Eigen::VectorXd>(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

auto Tensor::all_finite() const noexcept -> bool {
    return std::ranges::all_of(data_, [](double x) { return std::isfinite(x); });
}

auto concat_channels(const Tensor &a, const Tensor &b) -> Tensor {
    if (a.shape().size() != 3 || b.shape().size() != 3 || a.shape()[1] != b.shape()[1]
        || a.shape()[2] != b.shape()[2])
    {
        throw ConfigurationError("channel concatenation needs (C, H, W) tensors with equal spatial size");
    }
    std::vector<double> data;
    data.reserve(a.size() + b.size());
    data.insert(data.end(), a.values().begin(), a.values().end());
    data.insert(data.end(), b.values().begin(), b.values().end());
    return {{a.shape()[0] + b.shape()[0], a.shape()[1], a.shape()[2]}, std::move(data)};
}

}  // namespace sgphs
