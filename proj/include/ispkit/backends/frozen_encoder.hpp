#ifndef ISPKIT_BACKENDS_FROZEN_ENCODER_HPP
#define ISPKIT_BACKENDS_FROZEN_ENCODER_HPP

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// Frozen contextual encoder: hash-keyed token vectors mixed through a fixed
// random recurrence. Output depends only on (seed, input), never on training,
// which is the contract the fusion stage relies on.
class FrozenHashEncoder : public ContextEncoder {
public:
    FrozenHashEncoder(int dim = 32, int max_len = 128, uint64_t seed = 0xe17c0de);

    int dim() const override { return dim_; }
    int max_len() const override { return max_len_; }
    Eigen::MatrixXd encode(const Tokens& tokens) const override;

    uint64_t seed() const { return seed_; }

private:
    int dim_;
    int max_len_;
    uint64_t seed_;
    Eigen::MatrixXd mix_; // fixed recurrence matrix

    Eigen::VectorXd token_vector(const std::string& token) const;
};

} // namespace isp

#endif
