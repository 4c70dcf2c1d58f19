#include "ispkit/backends/hash_embedder.hpp"

#include "ispkit/core/rng.hpp"
#include "ispkit/core/tokenize.hpp"

namespace isp {

Eigen::VectorXd HashEmbedder::token_vector(const std::string& token) const {
    Rng rng(mix_seed(seed_, fnv1a(lowercase(token))));
    Eigen::VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v(i) = rng.normal();
    return v;
}

Eigen::MatrixXd HashEmbedder::embed(const std::vector<std::string>& texts) const {
    Eigen::MatrixXd out(static_cast<long>(texts.size()), dim_);
    for (size_t r = 0; r < texts.size(); ++r) {
        Tokens toks = tokenize(texts[r]);
        if (toks.empty()) throw BackendError("embed: empty string input");
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
        for (const auto& t : toks) v += token_vector(t);
        double norm = v.norm();
        if (norm > 0) v /= norm;
        out.row(static_cast<long>(r)) = v.transpose();
    }
    return out;
}

} // namespace isp
