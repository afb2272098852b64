#include <sgphs/nn/gradcheck.h>

#include <sgphs/errors.h>

#include <algorithm>
#include <cmath>

namespace sgphs::nn {

auto central_difference(const std::function<double()> &loss, std::span<double> params, double step)
    -> std::vector<double> {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double original = params[i];
        params[i] = original + step;
        const double plus = loss();
        params[i] = original - step;
        const double minus = loss();
        params[i] = original;
        grad[i] = (plus - minus) / (2.0 * step);
    }
    return grad;
}

auto compare_gradients(std::span<const double> analytic, std::span<const double> numeric, double rtol, double atol)
    -> GradientComparison {
    if (analytic.size() != numeric.size()) {
        throw UsageError("gradient vectors differ in length");
    }
    GradientComparison out;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double diff = std::abs(analytic[i] - numeric[i]);
        const double scale = std::max(std::abs(analytic[i]), std::abs(numeric[i]));
        const double rel = scale > 0.0 ? diff / scale : 0.0;
        if (diff > rtol * scale + atol) {
            out.passed = false;
        }
        if (rel > out.max_relative_error && diff > atol) {
            out.max_relative_error = rel;
            out.worst_index = i;
        }
    }
    return out;
}

}  // namespace sgphs::nn
