#ifndef SGPHS_NN_PARAM_H_
#define SGPHS_NN_PARAM_H_

#include <span>
#include <string>
#include <vector>

namespace sgphs::nn {

// Non-owning view of one named trainable tensor and its gradient buffer.
struct ParamRef {
    std::string name;
    std::vector<int> shape;
    std::span<double> value;
    std::span<double> grad;
};

}  // namespace sgphs::nn

#endif  // SGPHS_NN_PARAM_H_
