#include "ispkit/ucd/model.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ispkit/backends/optim.hpp"
#include "ispkit/util/json_mat.hpp"

namespace isp {

using json = nlohmann::ordered_json;

UcdModel::UcdModel(UcdConfig cfg, uint64_t seed)
    : cfg_(cfg), seed_(seed),
      encoder_(cfg.ctx_dim, cfg.max_seq_len, mix_seed(seed, fnv1a("encoder"))),
      embedder_(cfg.def_dim, mix_seed(seed, fnv1a("embedder"))) {
    Rng rng(mix_seed(seed, fnv1a("fusion")));
    fusion_ = FusionParams<double>::random(cfg.ctx_dim, cfg.def_dim, rng);
    fusion_grads_ = fusion_.zeros_like();
}

EmbeddingStage UcdModel::embedding_stage(const MaskedRecord& instance) const {
    Tokens tokens = tokenize(instance.masked);
    if (tokens.empty()) throw BackendError("embedding_stage: empty masked sentence");
    if (instance.mask_index < 0 || static_cast<size_t>(instance.mask_index) >= tokens.size() ||
        tokens[static_cast<size_t>(instance.mask_index)] != encoder_.mask_token())
        throw BackendError("embedding_stage: mask_index does not point at " +
                           encoder_.mask_token());
    if (instance.definitions.empty()) throw BackendError("embedding_stage: no definitions");

    Tokens input = tokens;
    input.push_back(encoder_.sep_token());
    input.push_back(instance.pos);
    if (static_cast<int>(input.size()) > cfg_.max_seq_len)
        throw BackendError("embedding_stage: sequence longer than max_seq_len");

    EmbeddingStage stage;
    stage.context = encoder_.encode(input);
    stage.mask_index = instance.mask_index;
    stage.definitions = embedder_.embed(instance.definitions);
    return stage;
}

Eigen::MatrixXd UcdModel::fused_memory(const EmbeddingStage& stage,
                                       FusionForward<double>* cache) const {
    Eigen::VectorXd query = stage.context.row(stage.mask_index).transpose();
    FusionForward<double> fwd = fusion_forward<double>(stage.definitions, query, fusion_);
    Eigen::MatrixXd memory = splice_embedding<double>(stage.context, stage.mask_index,
                                                      fwd.fuse.out);
    if (cache) *cache = std::move(fwd);
    return memory;
}

std::vector<TensorRef> UcdModel::trainable_params() {
    std::vector<TensorRef> refs = decoder_.params();
    refs.push_back({&fusion_.w_attn, &fusion_grads_.w_attn});
    refs.push_back({&fusion_.w_h, &fusion_grads_.w_h});
    refs.push_back({&fusion_.b_h, &fusion_grads_.b_h});
    refs.push_back({&fusion_.w_t, &fusion_grads_.w_t});
    refs.push_back({&fusion_.b_t, &fusion_grads_.b_t});
    refs.push_back({&fusion_.w_out, &fusion_grads_.w_out});
    return refs;
}

std::vector<int> UcdModel::encode_target(const std::string& text) const {
    std::vector<int> ids = vocab_.encode(tokenize(text));
    ids.push_back(ToyVocab::kEos);
    return ids;
}

UcdTrainReport UcdModel::train(const std::vector<MaskedRecord>& corpus, const Hyperparams& hp,
                               const UcdTrainOptions& opt) {
    if (corpus.empty()) throw BackendError("train: empty corpus");
    hp.check();

    if (!trained_) {
        std::vector<Tokens> vocab_corpus;
        for (const auto& rec : corpus) {
            vocab_corpus.push_back(tokenize(rec.target));
            vocab_corpus.push_back(tokenize(rec.masked));
            vocab_corpus.push_back({rec.pos});
        }
        vocab_.build(vocab_corpus, cfg_.max_vocab);
        decoder_ = ToyDecoder(static_cast<int>(vocab_.size()), cfg_.dec_emb, cfg_.dec_hidden,
                              cfg_.ctx_dim, mix_seed(seed_, fnv1a("decoder")), cfg_.align_sigma);
    }

    Adam adam;
    adam.attach(trainable_params());

    const int epochs = opt.epochs > 0 ? opt.epochs : hp.ucd_epochs;
    const double base_lr = opt.lr > 0 ? opt.lr : hp.ucd_lr;
    const int warmup = opt.warmup_steps >= 0 ? opt.warmup_steps : hp.warmup_steps;
    const long total_steps =
        (static_cast<long>(corpus.size()) * epochs + hp.batch_size - 1) / hp.batch_size;

    UcdTrainReport report;
    Rng shuffle_rng(mix_seed(seed_, fnv1a("shuffle")));
    std::vector<size_t> idx(corpus.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    long step = 0;
    for (int e = 0; e < epochs; ++e) {
        for (size_t i = idx.size(); i > 1; --i) {
            size_t j = shuffle_rng.uniform(i);
            std::swap(idx[i - 1], idx[j]);
        }
        double epoch_loss = 0.0;
        int in_batch = 0;
        double batch_loss = 0.0;
        for (size_t k = 0; k < idx.size(); ++k) {
            const MaskedRecord& rec = corpus[idx[k]];
            EmbeddingStage stage = embedding_stage(rec);
            FusionForward<double> fwd;
            Eigen::MatrixXd memory = fused_memory(stage, &fwd);
            std::vector<int> target = encode_target(rec.target);

            Eigen::MatrixXd d_memory(memory.rows(), memory.cols());
            double loss = decoder_.loss_and_grad(memory, target, &d_memory);
            if (!std::isfinite(loss)) {
                throw BackendError("train: NaN loss at step " + std::to_string(step) +
                                   ", instance " + std::to_string(idx[k]) + ", target \"" +
                                   rec.target + "\"");
            }

            // only the spliced row reaches the fusion stage; the remaining
            // rows belong to the frozen encoder
            Eigen::VectorXd d_fused = d_memory.row(stage.mask_index).transpose();
            Eigen::VectorXd query = stage.context.row(stage.mask_index).transpose();
            FusionGrads<double> g = make_fusion_grads(fusion_);
            fusion_backward<double>(stage.definitions, query, fusion_, fwd, d_fused, g);
            fusion_grads_.w_attn += g.params.w_attn;
            fusion_grads_.w_h += g.params.w_h;
            fusion_grads_.b_h += g.params.b_h;
            fusion_grads_.w_t += g.params.w_t;
            fusion_grads_.b_t += g.params.b_t;
            fusion_grads_.w_out += g.params.w_out;

            epoch_loss += loss;
            batch_loss += loss;
            ++in_batch;
            if (in_batch == hp.batch_size || k + 1 == idx.size()) {
                adam.step(scheduled_lr(base_lr, step, warmup, total_steps),
                          1.0 / double(in_batch));
                report.loss_curve.push_back(batch_loss / double(in_batch));
                batch_loss = 0.0;
                ++step;
                in_batch = 0;
                if (opt.max_steps > 0 && step >= opt.max_steps) {
                    report.epoch_loss.push_back(epoch_loss / double(k + 1));
                    report.steps = step;
                    trained_ = true;
                    return report;
                }
            }
        }
        report.epoch_loss.push_back(epoch_loss / double(corpus.size()));
    }
    report.steps = step;
    trained_ = true;
    return report;
}

std::string UcdModel::infer_fill(const MaskedRecord& instance, const DecodeParams& decode) const {
    if (!trained_) throw BackendError("infer: model not trained");
    EmbeddingStage stage = embedding_stage(instance);
    Eigen::MatrixXd memory = fused_memory(stage);
    std::vector<int> out = decoder_.generate(memory, decode);
    return detokenize(vocab_.decode(out));
}

LiteralSentence UcdModel::infer_paraphrase(const IdiomaticSentence& sentence,
                                           const DictClient& dict, const PosTagger& tagger,
                                           const Lemmatizer& lemmatizer,
                                           const DecodeParams& decode) const {
    if (!trained_) throw BackendError("infer: model not trained");
    if (!sentence.span.valid() || sentence.span.end > sentence.tokens.size())
        throw BackendError("infer_paraphrase: invalid idiom span");

    // the IE span collapses to exactly one mask position
    Tokens masked;
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
        if (i == sentence.span.start) masked.push_back(encoder_.mask_token());
        if (i >= sentence.span.start && i < sentence.span.end) continue;
        masked.push_back(sentence.tokens[i]);
    }

    std::string idiom_lemma = sentence.idiom_lemma;
    if (idiom_lemma.empty()) {
        Tokens span_tokens(sentence.tokens.begin() + static_cast<long>(sentence.span.start),
                           sentence.tokens.begin() + static_cast<long>(sentence.span.end));
        idiom_lemma = detokenize(lemmatizer.lemmas(lowercase(span_tokens)));
    }
    std::vector<Definition> defs = dict.lookup_idiom(idiom_lemma); // throws DictNotFound

    std::vector<std::string> tags = tagger.tag(masked);

    MaskedRecord rec;
    rec.masked = detokenize(masked);
    rec.mask_index = static_cast<int>(sentence.span.start);
    rec.pos = tags[sentence.span.start];
    for (const auto& d : defs) rec.definitions.push_back(d.gloss);
    rec.target = "";
    return LiteralSentence::make(infer_fill(rec, decode));
}

void UcdModel::save(const std::string& dir, const std::string& corpus_hash) const {
    if (!trained_) throw BackendError("save: model not trained");
    std::filesystem::create_directories(dir);

    json fusion;
    fusion["ctx_dim"] = cfg_.ctx_dim;
    fusion["def_dim"] = cfg_.def_dim;
    fusion["w_attn"] = mat_to_json(fusion_.w_attn);
    fusion["w_h"] = mat_to_json(fusion_.w_h);
    fusion["b_h"] = mat_to_json(fusion_.b_h);
    fusion["w_t"] = mat_to_json(fusion_.w_t);
    fusion["b_t"] = mat_to_json(fusion_.b_t);
    fusion["w_out"] = mat_to_json(fusion_.w_out);
    std::ofstream(dir + "/fusion.json") << fusion.dump() << '\n';

    json decoder;
    decoder["vocab"] = vocab_.to_json();
    decoder["weights"] = decoder_.to_json();
    std::ofstream(dir + "/decoder.json") << decoder.dump() << '\n';

    json manifest;
    manifest["model"] = "ucd";
    manifest["ctx_dim"] = cfg_.ctx_dim;
    manifest["def_dim"] = cfg_.def_dim;
    manifest["dec_emb"] = cfg_.dec_emb;
    manifest["dec_hidden"] = cfg_.dec_hidden;
    manifest["align_sigma"] = cfg_.align_sigma;
    manifest["max_vocab"] = cfg_.max_vocab;
    manifest["max_seq_len"] = cfg_.max_seq_len;
    manifest["seed"] = seed_;
    manifest["corpus_hash"] = corpus_hash;
    std::ofstream(dir + "/manifest.json") << manifest.dump(2) << '\n';
}

void UcdModel::load(const std::string& dir) {
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) throw BackendError("cannot open " + dir + "/manifest.json");
    nlohmann::json manifest = nlohmann::json::parse(mf);
    cfg_.ctx_dim = manifest.at("ctx_dim").get<int>();
    cfg_.def_dim = manifest.at("def_dim").get<int>();
    cfg_.dec_emb = manifest.at("dec_emb").get<int>();
    cfg_.dec_hidden = manifest.at("dec_hidden").get<int>();
    cfg_.align_sigma = manifest.at("align_sigma").get<double>();
    cfg_.max_vocab = manifest.at("max_vocab").get<size_t>();
    cfg_.max_seq_len = manifest.at("max_seq_len").get<int>();
    seed_ = manifest.at("seed").get<uint64_t>();

    encoder_ = FrozenHashEncoder(cfg_.ctx_dim, cfg_.max_seq_len, mix_seed(seed_, fnv1a("encoder")));
    embedder_ = HashEmbedder(cfg_.def_dim, mix_seed(seed_, fnv1a("embedder")));

    std::ifstream ff(dir + "/fusion.json");
    if (!ff) throw BackendError("cannot open " + dir + "/fusion.json");
    nlohmann::json fusion = nlohmann::json::parse(ff);
    fusion_.w_attn = mat_from_json(fusion.at("w_attn"));
    fusion_.w_h = mat_from_json(fusion.at("w_h"));
    fusion_.b_h = mat_from_json(fusion.at("b_h"));
    fusion_.w_t = mat_from_json(fusion.at("w_t"));
    fusion_.b_t = mat_from_json(fusion.at("b_t"));
    fusion_.w_out = mat_from_json(fusion.at("w_out"));
    fusion_grads_ = fusion_.zeros_like();

    std::ifstream df(dir + "/decoder.json");
    if (!df) throw BackendError("cannot open " + dir + "/decoder.json");
    nlohmann::json decoder = nlohmann::json::parse(df);
    vocab_.from_json(decoder.at("vocab"));
    decoder_.from_json(decoder.at("weights"));
    trained_ = true;
}

UcdTrainReport train_ucd(const std::string& corpus_path, UcdModel& model, const Hyperparams& hp,
                         const UcdTrainOptions& opt, const std::string& checkpoint_dir) {
    std::vector<MaskedRecord> corpus = load_masked_instances(corpus_path);
    UcdTrainReport report = model.train(corpus, hp, opt);
    if (!checkpoint_dir.empty()) {
        std::ifstream in(corpus_path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a(bytes)));
        model.save(checkpoint_dir, hex);
    }
    return report;
}

} // namespace isp
