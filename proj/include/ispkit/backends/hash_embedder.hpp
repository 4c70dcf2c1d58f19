#ifndef ISPKIT_BACKENDS_HASH_EMBEDDER_HPP
#define ISPKIT_BACKENDS_HASH_EMBEDDER_HPP

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Deterministic sentence embedder: each token maps to a fixed pseudo-random
// Gaussian vector keyed by its FNV hash; a sentence embeds to the L2-normalized
// token sum. Stable across platforms and runs, which is what the test suite
// needs from a frozen embedder.
class HashEmbedder : public SentenceEmbedder {
public:
    explicit HashEmbedder(int dim = 16, uint64_t seed = 0x5eed) : dim_(dim), seed_(seed) {}

    int dim() const override { return dim_; }
    Eigen::MatrixXd embed(const std::vector<std::string>& texts) const override;

    Eigen::VectorXd token_vector(const std::string& token) const;

private:
    int dim_;
    uint64_t seed_;
};

} // namespace isp

#endif
