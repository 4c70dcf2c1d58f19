#ifndef ISPKIT_BACKENDS_TOY_LM_HPP
#define ISPKIT_BACKENDS_TOY_LM_HPP

#include <unordered_map>

#include "ispkit/backends/interfaces.hpp"

namespace isp {

// assigns 1/V to every token
class UniformLm : public LmScorer {
public:
    explicit UniformLm(size_t vocab_size) : vocab_(vocab_size) {}
    size_t vocab_size() const override { return vocab_; }
    std::vector<double> score(const std::string& text) const override;

private:
    size_t vocab_;
};

// add-alpha smoothed bigram model over the training corpus vocabulary
// (plus <unk>); vocabulary and counts are fixed at construction
class BigramLm : public LmScorer {
public:
    explicit BigramLm(const std::vector<std::string>& training_sentences, double alpha = 0.1);

    size_t vocab_size() const override { return vocab_.size(); }
    std::vector<double> score(const std::string& text) const override;

    double token_prob(const std::string& prev, const std::string& cur) const;

private:
    double alpha_;
    std::unordered_map<std::string, int> vocab_; // token -> id, includes <s> and <unk>
    std::unordered_map<long long, double> bigram_counts_;
    std::unordered_map<int, double> context_counts_;

    int id_of(const std::string& tok) const;
};

} // namespace isp

#endif
