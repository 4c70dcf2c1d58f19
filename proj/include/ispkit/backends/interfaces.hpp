#ifndef ISPKIT_BACKENDS_INTERFACES_HPP
#define ISPKIT_BACKENDS_INTERFACES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ispkit/core/types.hpp"

namespace isp {

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecodeParams {
    int beams = 5;
    int top_k = 100;
    double top_p = 0.5;
    int max_len = 128;
};

struct Capabilities {
    int embedding_dim = 0;
    int max_len = 128;
    bool trainable = false;
};

// Text-to-text sequence model. Every operation is a pure function of
// (weights, inputs, seed).
class Seq2SeqBackend {
public:
    virtual ~Seq2SeqBackend() = default;

    virtual std::string name() const = 0;
    virtual Capabilities capabilities() const = 0;

    virtual std::string generate(const Tokens& input, const DecodeParams& decode,
                                 uint64_t seed) const = 0;

    // returns the loss curve; throws BackendError for non-trainable backends
    virtual std::vector<double> fine_tune(
        const std::vector<std::pair<std::string, std::string>>& pairs,
        const Hyperparams& hp) = 0;

    virtual void save(const std::string& dir) const = 0;
    virtual void load(const std::string& dir) = 0;
};

// Frozen encoder producing contextualized rows, one per input token.
class ContextEncoder {
public:
    virtual ~ContextEncoder() = default;
    virtual int dim() const = 0;
    virtual int max_len() const = 0;
    // mask/sep are plain uppercase words so the domain tokenizer keeps them atomic
    virtual Eigen::MatrixXd encode(const Tokens& tokens) const = 0;
    virtual std::string mask_token() const { return "MASK"; }
    virtual std::string sep_token() const { return "SEP"; }
};

class SentenceEmbedder {
public:
    virtual ~SentenceEmbedder() = default;
    virtual int dim() const = 0;
    // row i depends only on texts[i]; shape (len(texts), dim())
    virtual Eigen::MatrixXd embed(const std::vector<std::string>& texts) const = 0;
};

class PosTagger {
public:
    virtual ~PosTagger() = default;
    virtual std::vector<std::string> tag(const Tokens& tokens) const = 0;
    static const std::vector<std::string>& universal_tagset();
};

class LmScorer {
public:
    virtual ~LmScorer() = default;
    virtual size_t vocab_size() const = 0;
    // per-token natural-log probabilities; all <= 0
    virtual std::vector<double> score(const std::string& text) const = 0;
};

class Lemmatizer {
public:
    virtual ~Lemmatizer() = default;
    virtual std::string lemma(const std::string& word) const = 0;

    Tokens lemmas(const Tokens& tokens) const {
        Tokens out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) out.push_back(lemma(t));
        return out;
    }
};

using BackendFactory = std::function<std::shared_ptr<Seq2SeqBackend>()>;

} // namespace isp

#endif
