#ifndef ISPKIT_BACKENDS_TOY_SEQ2SEQ_HPP
#define ISPKIT_BACKENDS_TOY_SEQ2SEQ_HPP

#include <json.hpp>

#include "ispkit/backends/interfaces.hpp"
#include "ispkit/backends/optim.hpp"

namespace isp {

// Word vocabulary with fixed special ids. Built deterministically from data:
// tokens sorted by frequency (ties lexicographic), capped at max_size.
class ToyVocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kUnk = 3;
    static constexpr int kMask = 4;
    static constexpr int kSep = 5;

    ToyVocab();

    void build(const std::vector<Tokens>& corpus, size_t max_size = 512);

    int id(const std::string& token) const;
    const std::string& token(int id) const;
    size_t size() const { return id_to_token_.size(); }
    bool built() const { return id_to_token_.size() > kNumSpecials; }

    std::vector<int> encode(const Tokens& tokens) const;
    Tokens decode(const std::vector<int>& ids) const; // skips specials

    nlohmann::ordered_json to_json() const;
    void from_json(const nlohmann::json& j);

private:
    static constexpr size_t kNumSpecials = 6;
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;

    void add(const std::string& token);
};

// Single-layer Elman encoder over word embeddings; trainable.
class ToyEncoder {
public:
    ToyEncoder() = default;
    ToyEncoder(int vocab, int dim, uint64_t seed);

    int dim() const { return dim_; }
    Eigen::MatrixXd forward(const std::vector<int>& ids) const; // L x D

    // accumulate parameter grads for the cached forward of `ids`
    void backward(const std::vector<int>& ids, const Eigen::MatrixXd& H,
                  const Eigen::MatrixXd& dH);

    std::vector<TensorRef> params();
    nlohmann::ordered_json to_json() const;
    void from_json(const nlohmann::json& j);

private:
    int dim_ = 0;
    Eigen::MatrixXd emb_, w_xh_, w_hh_, bh_;
    Eigen::MatrixXd g_emb_, g_w_xh_, g_w_hh_, g_bh_;
};

// RNN decoder with bilinear attention over an external memory matrix plus a
// Gaussian monotonic-alignment prior on the scores. Produces gradients with
// respect to the memory, which is what lets an upstream fusion layer train.
class ToyDecoder {
public:
    ToyDecoder() = default;
    ToyDecoder(int vocab, int emb_dim, int hidden, int mem_dim, uint64_t seed,
               double align_sigma = 3.0);

    int mem_dim() const { return mem_dim_; }

    // teacher-forced mean cross-entropy; accumulates parameter grads;
    // when d_memory != nullptr it receives dLoss/dMemory
    double loss_and_grad(const Eigen::MatrixXd& memory, const std::vector<int>& target_ids,
                         Eigen::MatrixXd* d_memory);

    double loss_only(const Eigen::MatrixXd& memory, const std::vector<int>& target_ids) const;

    std::vector<int> generate(const Eigen::MatrixXd& memory, const DecodeParams& decode) const;

    std::vector<TensorRef> params();
    nlohmann::ordered_json to_json() const;
    void from_json(const nlohmann::json& j);

private:
    int vocab_ = 0, emb_dim_ = 0, hidden_ = 0, mem_dim_ = 0;
    double align_sigma_ = 3.0;
    Eigen::MatrixXd emb_, w_xs_, w_ss_, bs_, w_a_, w_cs_, w_cc_, bc_, w_out_, bout_;
    Eigen::MatrixXd g_emb_, g_w_xs_, g_w_ss_, g_bs_, g_w_a_, g_w_cs_, g_w_cc_, g_bc_, g_w_out_,
        g_bout_;

    struct StepCache;
    // one decode step without gradients; returns log-probs over the vocabulary
    Eigen::VectorXd step_logprobs(const Eigen::MatrixXd& memory, int prev_id, int step,
                                  Eigen::VectorXd& state) const;
};

// Trainable encoder-decoder used as the desk-scale stand-in for a pretrained
// sequence-to-sequence checkpoint.
class ToySeq2Seq : public Seq2SeqBackend {
public:
    struct Config {
        int emb_dim = 48;
        int hidden = 48;
        size_t max_vocab = 512;
        int max_len = 128;
        double align_sigma = 3.0;
        int epochs_override = 0; // 0: use hp.ucd_epochs
    };

    explicit ToySeq2Seq(uint64_t seed);
    ToySeq2Seq(uint64_t seed, Config cfg);

    std::string name() const override { return "toy-seq2seq"; }
    Capabilities capabilities() const override;

    std::string generate(const Tokens& input, const DecodeParams& decode,
                         uint64_t seed) const override;

    std::vector<double> fine_tune(
        const std::vector<std::pair<std::string, std::string>>& pairs,
        const Hyperparams& hp) override;

    void save(const std::string& dir) const override;
    void load(const std::string& dir) override;

    size_t param_count() const;
    const ToyVocab& vocab() const { return vocab_; }

private:
    uint64_t seed_;
    Config cfg_;
    ToyVocab vocab_;
    ToyEncoder encoder_;
    ToyDecoder decoder_;
    bool materialized_ = false;

    void materialize();
};

} // namespace isp

#endif
