#include "ispkit/backends/toy_lm.hpp"

#include <cmath>

#include "ispkit/core/tokenize.hpp"

namespace isp {

std::vector<double> UniformLm::score(const std::string& text) const {
    Tokens toks = tokenize(text);
    if (toks.empty()) throw BackendError("lm_score: empty text");
    return std::vector<double>(toks.size(), -std::log(double(vocab_)));
}

BigramLm::BigramLm(const std::vector<std::string>& training_sentences, double alpha)
    : alpha_(alpha) {
    vocab_["<s>"] = 0;
    vocab_["<unk>"] = 1;
    for (const auto& s : training_sentences) {
        for (const auto& t : lowercase(tokenize(s))) {
            if (!vocab_.count(t)) {
                int id = static_cast<int>(vocab_.size());
                vocab_[t] = id;
            }
        }
    }
    for (const auto& s : training_sentences) {
        Tokens toks = lowercase(tokenize(s));
        int prev = 0; // <s>
        for (const auto& t : toks) {
            int cur = id_of(t);
            bigram_counts_[(static_cast<long long>(prev) << 32) | cur] += 1.0;
            context_counts_[prev] += 1.0;
            prev = cur;
        }
    }
}

int BigramLm::id_of(const std::string& tok) const {
    auto it = vocab_.find(tok);
    return it != vocab_.end() ? it->second : 1;
}

double BigramLm::token_prob(const std::string& prev, const std::string& cur) const {
    int p = id_of(lowercase(prev));
    int c = id_of(lowercase(cur));
    auto big = bigram_counts_.find((static_cast<long long>(p) << 32) | c);
    double bc = big != bigram_counts_.end() ? big->second : 0.0;
    auto ctx = context_counts_.find(p);
    double cc = ctx != context_counts_.end() ? ctx->second : 0.0;
    return (bc + alpha_) / (cc + alpha_ * double(vocab_.size()));
}

std::vector<double> BigramLm::score(const std::string& text) const {
    Tokens toks = lowercase(tokenize(text));
    if (toks.empty()) throw BackendError("lm_score: empty text");
    std::vector<double> out;
    out.reserve(toks.size());
    std::string prev = "<s>";
    for (const auto& t : toks) {
        out.push_back(std::log(token_prob(prev, t)));
        prev = t;
    }
    return out;
}

} // namespace isp
