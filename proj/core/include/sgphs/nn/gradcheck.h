#ifndef SGPHS_NN_GRADCHECK_H_
#define SGPHS_NN_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sgphs::nn {

// Central differences (f(x + h) - f(x - h)) / 2h for every entry of params,
// restoring each entry afterwards.
[[nodiscard]] auto central_difference(const std::function<double()> &loss, std::span<double> params,
                                      double step = 1e-5) -> std::vector<double>;

struct GradientComparison {
    bool passed = true;
    double max_relative_error = 0.0;
    std::size_t worst_index = 0;
};

// Entry i passes when |a - n| <= rtol * max(|a|, |n|) + atol.
[[nodiscard]] auto compare_gradients(std::span<const double> analytic, std::span<const double> numeric, double rtol,
                                     double atol) -> GradientComparison;

}  // namespace sgphs::nn

#endif  // SGPHS_NN_GRADCHECK_H_
