#ifndef ISPKIT_UCD_MODEL_HPP
#define ISPKIT_UCD_MODEL_HPP

#include <memory>

#include "ispkit/backends/frozen_encoder.hpp"
#include "ispkit/backends/hash_embedder.hpp"
#include "ispkit/backends/toy_seq2seq.hpp"
#include "ispkit/core/jsonl.hpp"
#include "ispkit/dict/dictionary.hpp"
#include "ispkit/ucd/fusion.hpp"

namespace isp {

// encoder rows for [masked sentence, <sep>, tag] plus the definition matrix
struct EmbeddingStage {
    Eigen::MatrixXd context;       // (L+2) x ctx_dim
    long mask_index = 0;           // row of the masked token
    Eigen::MatrixXd definitions;   // N x def_dim
};

struct UcdConfig {
    int ctx_dim = 32;
    int def_dim = 16;
    int dec_emb = 32;
    int dec_hidden = 64;
    double align_sigma = 1.5;
    size_t max_vocab = 512;
    int max_seq_len = 128;
};

struct UcdTrainOptions {
    int epochs = 0;        // 0: hp.ucd_epochs
    double lr = 0.0;       // 0: hp.ucd_lr
    int warmup_steps = -1; // <0: hp.warmup_steps
    int max_steps = 0;     // 0: no cap
};

struct UcdTrainReport {
    std::vector<double> loss_curve; // one entry per optimizer step
    std::vector<double> epoch_loss;
    long steps = 0;
};

// Definition-fusion mask-filling model over frozen encoder/embedder
// components. Only the fusion parameters and the decoder train.
class UcdModel {
public:
    UcdModel(UcdConfig cfg, uint64_t seed);

    const UcdConfig& config() const { return cfg_; }
    const FrozenHashEncoder& encoder() const { return encoder_; }
    const HashEmbedder& embedder() const { return embedder_; }
    const FusionParams<double>& fusion() const { return fusion_; }

    EmbeddingStage embedding_stage(const MaskedRecord& instance) const;

    // forward through attend/fuse/splice; returns the decoder memory
    Eigen::MatrixXd fused_memory(const EmbeddingStage& stage,
                                 FusionForward<double>* cache = nullptr) const;

    UcdTrainReport train(const std::vector<MaskedRecord>& corpus, const Hyperparams& hp,
                         const UcdTrainOptions& opt = {});

    // decode the filled sentence for a masked instance
    std::string infer_fill(const MaskedRecord& instance, const DecodeParams& decode) const;

    // zero-shot ISP: collapse the IE span to one mask, tag it, fetch the IE's
    // definitions, fill
    LiteralSentence infer_paraphrase(const IdiomaticSentence& sentence, const DictClient& dict,
                                     const PosTagger& tagger, const Lemmatizer& lemmatizer,
                                     const DecodeParams& decode) const;

    void save(const std::string& dir, const std::string& corpus_hash = "") const;
    void load(const std::string& dir);

    bool trained() const { return trained_; }

private:
    UcdConfig cfg_;
    uint64_t seed_;
    FrozenHashEncoder encoder_;
    HashEmbedder embedder_;
    FusionParams<double> fusion_;
    FusionParams<double> fusion_grads_;
    ToyVocab vocab_;
    ToyDecoder decoder_;
    bool trained_ = false;

    std::vector<TensorRef> trainable_params();
    std::vector<int> encode_target(const std::string& text) const;
};

// convenience wrapper: load corpus, train, checkpoint
UcdTrainReport train_ucd(const std::string& corpus_path, UcdModel& model, const Hyperparams& hp,
                         const UcdTrainOptions& opt, const std::string& checkpoint_dir);

} // namespace isp

#endif
