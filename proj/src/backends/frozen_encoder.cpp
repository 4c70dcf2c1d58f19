#include "ispkit/backends/frozen_encoder.hpp"

#include "ispkit/core/rng.hpp"
#include "ispkit/core/tokenize.hpp"

namespace isp {

FrozenHashEncoder::FrozenHashEncoder(int dim, int max_len, uint64_t seed)
    : dim_(dim), max_len_(max_len), seed_(seed) {
    Rng rng(mix_seed(seed_, fnv1a("mix")));
    mix_.resize(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) mix_(r, c) = rng.normal(0.0, 0.35 / std::sqrt(double(dim_)));
}

Eigen::VectorXd FrozenHashEncoder::token_vector(const std::string& token) const {
    Rng rng(mix_seed(seed_, fnv1a(lowercase(token))));
    Eigen::VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v(i) = rng.normal();
    return v;
}

Eigen::MatrixXd FrozenHashEncoder::encode(const Tokens& tokens) const {
    if (static_cast<int>(tokens.size()) > max_len_)
        throw BackendError("encode: input longer than max_len " + std::to_string(max_len_));
    Eigen::MatrixXd H(static_cast<long>(tokens.size()), dim_);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dim_);
    for (size_t t = 0; t < tokens.size(); ++t) {
        // token identity dominates; the recurrent term adds context
        h = (1.2 * token_vector(tokens[t]) + mix_ * h).array().tanh();
        H.row(static_cast<long>(t)) = h.transpose();
    }
    return H;
}

} // namespace isp
