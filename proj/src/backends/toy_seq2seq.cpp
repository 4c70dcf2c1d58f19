#include "ispkit/backends/toy_seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "ispkit/core/rng.hpp"
#include "ispkit/util/json_mat.hpp"

namespace isp {

using json = nlohmann::ordered_json;

namespace {

Eigen::MatrixXd init_matrix(long rows, long cols, Rng& rng, double scale) {
    Eigen::MatrixXd m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = rng.normal(0.0, scale);
    return m;
}

double log_sum_exp(const Eigen::VectorXd& v) {
    double m = v.maxCoeff();
    return m + std::log((v.array() - m).exp().sum());
}

Eigen::VectorXd softmax(const Eigen::VectorXd& v) {
    Eigen::ArrayXd e = (v.array() - v.maxCoeff()).exp();
    return (e / e.sum()).matrix();
}

} // namespace

// --- ToyVocab -----------------------------------------------------------

ToyVocab::ToyVocab() {
    for (const char* s : {"<pad>", "<bos>", "<eos>", "<unk>", "<mask>", "<sep>"}) add(s);
}

void ToyVocab::add(const std::string& token) {
    if (token_to_id_.count(token)) return;
    token_to_id_[token] = static_cast<int>(id_to_token_.size());
    id_to_token_.push_back(token);
}

void ToyVocab::build(const std::vector<Tokens>& corpus, size_t max_size) {
    std::map<std::string, long> counts;
    for (const auto& sent : corpus)
        for (const auto& tok : sent) ++counts[tok];
    std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (const auto& [tok, cnt] : items) {
        if (id_to_token_.size() >= max_size) break;
        if (!token_to_id_.count(tok)) add(tok);
    }
}

int ToyVocab::id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it != token_to_id_.end() ? it->second : kUnk;
}

const std::string& ToyVocab::token(int i) const { return id_to_token_.at(static_cast<size_t>(i)); }

std::vector<int> ToyVocab::encode(const Tokens& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
}

Tokens ToyVocab::decode(const std::vector<int>& ids) const {
    Tokens out;
    for (int i : ids) {
        if (i == kPad || i == kBos || i == kEos) continue;
        out.push_back(token(i));
    }
    return out;
}

json ToyVocab::to_json() const {
    json j;
    j["tokens"] = id_to_token_;
    return j;
}

void ToyVocab::from_json(const nlohmann::json& j) {
    id_to_token_.clear();
    token_to_id_.clear();
    for (const auto& t : j.at("tokens")) add(t.get<std::string>());
}

// --- ToyEncoder -----------------------------------------------------------

ToyEncoder::ToyEncoder(int vocab, int dim, uint64_t seed) : dim_(dim) {
    Rng rng(seed);
    emb_ = init_matrix(vocab, dim, rng, 0.5);
    w_xh_ = init_matrix(dim, dim, rng, 1.0 / std::sqrt(double(dim)));
    w_hh_ = init_matrix(dim, dim, rng, 0.5 / std::sqrt(double(dim)));
    bh_ = Eigen::MatrixXd::Zero(dim, 1);
    g_emb_ = Eigen::MatrixXd::Zero(vocab, dim);
    g_w_xh_ = Eigen::MatrixXd::Zero(dim, dim);
    g_w_hh_ = Eigen::MatrixXd::Zero(dim, dim);
    g_bh_ = Eigen::MatrixXd::Zero(dim, 1);
}

Eigen::MatrixXd ToyEncoder::forward(const std::vector<int>& ids) const {
    const long L = static_cast<long>(ids.size());
    Eigen::MatrixXd H(L, dim_);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dim_);
    for (long t = 0; t < L; ++t) {
        Eigen::VectorXd x = emb_.row(ids[static_cast<size_t>(t)]).transpose();
        h = (w_xh_ * x + w_hh_ * h + bh_.col(0)).array().tanh();
        H.row(t) = h.transpose();
    }
    return H;
}

void ToyEncoder::backward(const std::vector<int>& ids, const Eigen::MatrixXd& H,
                          const Eigen::MatrixXd& dH) {
    const long L = static_cast<long>(ids.size());
    Eigen::VectorXd carry = Eigen::VectorXd::Zero(dim_);
    for (long t = L - 1; t >= 0; --t) {
        Eigen::VectorXd h = H.row(t).transpose();
        Eigen::VectorXd dh = dH.row(t).transpose() + carry;
        Eigen::VectorXd da = dh.cwiseProduct((1.0 - h.array().square()).matrix());
        Eigen::VectorXd x = emb_.row(ids[static_cast<size_t>(t)]).transpose();
        Eigen::VectorXd hprev =
            t > 0 ? Eigen::VectorXd(H.row(t - 1).transpose()) : Eigen::VectorXd::Zero(dim_);
        g_w_xh_ += da * x.transpose();
        g_w_hh_ += da * hprev.transpose();
        g_bh_.col(0) += da;
        g_emb_.row(ids[static_cast<size_t>(t)]) += (w_xh_.transpose() * da).transpose();
        carry = w_hh_.transpose() * da;
    }
}

std::vector<TensorRef> ToyEncoder::params() {
    return {{&emb_, &g_emb_}, {&w_xh_, &g_w_xh_}, {&w_hh_, &g_w_hh_}, {&bh_, &g_bh_}};
}

json ToyEncoder::to_json() const {
    json j;
    j["dim"] = dim_;
    j["emb"] = mat_to_json(emb_);
    j["w_xh"] = mat_to_json(w_xh_);
    j["w_hh"] = mat_to_json(w_hh_);
    j["bh"] = mat_to_json(bh_);
    return j;
}

void ToyEncoder::from_json(const nlohmann::json& j) {
    dim_ = j.at("dim").get<int>();
    emb_ = mat_from_json(j.at("emb"));
    w_xh_ = mat_from_json(j.at("w_xh"));
    w_hh_ = mat_from_json(j.at("w_hh"));
    bh_ = mat_from_json(j.at("bh"));
    g_emb_ = Eigen::MatrixXd::Zero(emb_.rows(), emb_.cols());
    g_w_xh_ = Eigen::MatrixXd::Zero(w_xh_.rows(), w_xh_.cols());
    g_w_hh_ = Eigen::MatrixXd::Zero(w_hh_.rows(), w_hh_.cols());
    g_bh_ = Eigen::MatrixXd::Zero(bh_.rows(), bh_.cols());
}

// --- ToyDecoder -----------------------------------------------------------

ToyDecoder::ToyDecoder(int vocab, int emb_dim, int hidden, int mem_dim, uint64_t seed,
                       double align_sigma)
    : vocab_(vocab), emb_dim_(emb_dim), hidden_(hidden), mem_dim_(mem_dim),
      align_sigma_(align_sigma) {
    Rng rng(seed);
    emb_ = init_matrix(vocab, emb_dim, rng, 0.5);
    w_xs_ = init_matrix(hidden, emb_dim, rng, 1.0 / std::sqrt(double(emb_dim)));
    w_ss_ = init_matrix(hidden, hidden, rng, 0.5 / std::sqrt(double(hidden)));
    bs_ = Eigen::MatrixXd::Zero(hidden, 1);
    w_a_ = init_matrix(hidden, mem_dim, rng, 1.0 / std::sqrt(double(mem_dim)));
    w_cs_ = init_matrix(hidden, hidden, rng, 1.0 / std::sqrt(double(hidden)));
    w_cc_ = init_matrix(hidden, mem_dim, rng, 1.0 / std::sqrt(double(mem_dim)));
    bc_ = Eigen::MatrixXd::Zero(hidden, 1);
    w_out_ = init_matrix(vocab, hidden, rng, 1.0 / std::sqrt(double(hidden)));
    bout_ = Eigen::MatrixXd::Zero(vocab, 1);

    auto zero_like = [](const Eigen::MatrixXd& m) {
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    };
    g_emb_ = zero_like(emb_);
    g_w_xs_ = zero_like(w_xs_);
    g_w_ss_ = zero_like(w_ss_);
    g_bs_ = zero_like(bs_);
    g_w_a_ = zero_like(w_a_);
    g_w_cs_ = zero_like(w_cs_);
    g_w_cc_ = zero_like(w_cc_);
    g_bc_ = zero_like(bc_);
    g_w_out_ = zero_like(w_out_);
    g_bout_ = zero_like(bout_);
}

struct ToyDecoder::StepCache {
    Eigen::VectorXd e, s, alpha, c, z;
    Eigen::VectorXd probs; // softmax of logits
    int prev_id = 0;
};

double ToyDecoder::loss_and_grad(const Eigen::MatrixXd& memory,
                                 const std::vector<int>& target_ids,
                                 Eigen::MatrixXd* d_memory) {
    const long T = static_cast<long>(target_ids.size());
    const long L = memory.rows();
    std::vector<StepCache> cache(static_cast<size_t>(T));

    double loss = 0.0;
    Eigen::VectorXd s = Eigen::VectorXd::Zero(hidden_);
    for (long t = 0; t < T; ++t) {
        StepCache& sc = cache[static_cast<size_t>(t)];
        sc.prev_id = t == 0 ? ToyVocab::kBos : target_ids[static_cast<size_t>(t - 1)];
        sc.e = emb_.row(sc.prev_id).transpose();
        sc.s = (w_xs_ * sc.e + w_ss_ * s + bs_.col(0)).array().tanh();
        s = sc.s;
        Eigen::VectorXd q = w_a_.transpose() * sc.s;
        Eigen::VectorXd u = memory * q;
        for (long i = 0; i < L; ++i) {
            double d = double(i - t);
            u(i) += -d * d / (2.0 * align_sigma_ * align_sigma_);
        }
        sc.alpha = softmax(u);
        sc.c = memory.transpose() * sc.alpha;
        sc.z = (w_cs_ * sc.s + w_cc_ * sc.c + bc_.col(0)).array().tanh();
        Eigen::VectorXd o = w_out_ * sc.z + bout_.col(0);
        double lse = log_sum_exp(o);
        loss += lse - o(target_ids[static_cast<size_t>(t)]);
        sc.probs = (o.array() - lse).exp();
    }
    loss /= double(T);

    if (d_memory) d_memory->setZero();
    Eigen::VectorXd ds_next = Eigen::VectorXd::Zero(hidden_);
    for (long t = T - 1; t >= 0; --t) {
        const StepCache& sc = cache[static_cast<size_t>(t)];
        Eigen::VectorXd dout = sc.probs;
        dout(target_ids[static_cast<size_t>(t)]) -= 1.0;
        dout /= double(T);

        g_w_out_ += dout * sc.z.transpose();
        g_bout_.col(0) += dout;
        Eigen::VectorXd dz = w_out_.transpose() * dout;
        Eigen::VectorXd dzpre = dz.cwiseProduct((1.0 - sc.z.array().square()).matrix());
        g_w_cs_ += dzpre * sc.s.transpose();
        g_w_cc_ += dzpre * sc.c.transpose();
        g_bc_.col(0) += dzpre;

        Eigen::VectorXd ds = w_cs_.transpose() * dzpre + ds_next;
        Eigen::VectorXd dc = w_cc_.transpose() * dzpre;

        Eigen::VectorXd dalpha = memory * dc;
        if (d_memory) *d_memory += sc.alpha * dc.transpose();
        double inner = sc.alpha.dot(dalpha);
        Eigen::VectorXd du = sc.alpha.cwiseProduct(((dalpha.array() - inner)).matrix());
        Eigen::VectorXd q = w_a_.transpose() * sc.s;
        Eigen::VectorXd dq = memory.transpose() * du;
        if (d_memory) *d_memory += du * q.transpose();
        g_w_a_ += sc.s * dq.transpose();
        ds += w_a_ * dq;

        Eigen::VectorXd da = ds.cwiseProduct((1.0 - sc.s.array().square()).matrix());
        g_w_xs_ += da * sc.e.transpose();
        Eigen::VectorXd sprev =
            t > 0 ? cache[static_cast<size_t>(t - 1)].s : Eigen::VectorXd::Zero(hidden_);
        g_w_ss_ += da * sprev.transpose();
        g_bs_.col(0) += da;
        g_emb_.row(sc.prev_id) += (w_xs_.transpose() * da).transpose();
        ds_next = w_ss_.transpose() * da;
    }
    return loss;
}

Eigen::VectorXd ToyDecoder::step_logprobs(const Eigen::MatrixXd& memory, int prev_id, int step,
                                          Eigen::VectorXd& state) const {
    const long L = memory.rows();
    Eigen::VectorXd e = emb_.row(prev_id).transpose();
    state = (w_xs_ * e + w_ss_ * state + bs_.col(0)).array().tanh();
    Eigen::VectorXd q = w_a_.transpose() * state;
    Eigen::VectorXd u = memory * q;
    for (long i = 0; i < L; ++i) {
        double d = double(i - step);
        u(i) += -d * d / (2.0 * align_sigma_ * align_sigma_);
    }
    Eigen::VectorXd alpha = softmax(u);
    Eigen::VectorXd c = memory.transpose() * alpha;
    Eigen::VectorXd z = (w_cs_ * state + w_cc_ * c + bc_.col(0)).array().tanh();
    Eigen::VectorXd o = w_out_ * z + bout_.col(0);
    return (o.array() - log_sum_exp(o)).matrix();
}

double ToyDecoder::loss_only(const Eigen::MatrixXd& memory,
                             const std::vector<int>& target_ids) const {
    Eigen::VectorXd state = Eigen::VectorXd::Zero(hidden_);
    double loss = 0.0;
    for (size_t t = 0; t < target_ids.size(); ++t) {
        int prev = t == 0 ? ToyVocab::kBos : target_ids[t - 1];
        Eigen::VectorXd lp = step_logprobs(memory, prev, static_cast<int>(t), state);
        loss -= lp(target_ids[t]);
    }
    return loss / double(target_ids.size());
}

std::vector<int> ToyDecoder::generate(const Eigen::MatrixXd& memory,
                                      const DecodeParams& decode) const {
    struct Beam {
        Eigen::VectorXd state;
        std::vector<int> ids;
        double logp = 0.0;
        bool done = false;
    };

    const int max_steps =
        std::min<long>(decode.max_len, memory.rows() + 10) > 0
            ? static_cast<int>(std::min<long>(decode.max_len, memory.rows() + 10))
            : 1;

    std::vector<Beam> beams{Beam{Eigen::VectorXd::Zero(hidden_), {}, 0.0, false}};
    for (int step = 0; step < max_steps; ++step) {
        bool any_live = false;
        std::vector<Beam> next;
        for (const Beam& b : beams) {
            if (b.done) {
                next.push_back(b);
                continue;
            }
            any_live = true;
            int prev = b.ids.empty() ? ToyVocab::kBos : b.ids.back();
            Eigen::VectorXd state = b.state;
            Eigen::VectorXd lp = step_logprobs(memory, prev, step, state);

            // rank tokens, then apply the top-k and nucleus filters
            std::vector<int> order(static_cast<size_t>(vocab_));
            for (int i = 0; i < vocab_; ++i) order[static_cast<size_t>(i)] = i;
            std::sort(order.begin(), order.end(), [&](int a, int bb) {
                if (lp(a) != lp(bb)) return lp(a) > lp(bb);
                return a < bb;
            });
            size_t keep = std::min<size_t>(order.size(), static_cast<size_t>(decode.top_k));
            double cum = 0.0;
            size_t nucleus = 0;
            while (nucleus < keep) {
                cum += std::exp(lp(order[nucleus]));
                ++nucleus;
                if (cum >= decode.top_p) break;
            }
            for (size_t k = 0; k < nucleus; ++k) {
                int tok = order[k];
                Beam nb;
                nb.state = state;
                nb.ids = b.ids;
                nb.ids.push_back(tok);
                nb.logp = b.logp + lp(tok);
                nb.done = tok == ToyVocab::kEos;
                next.push_back(std::move(nb));
            }
        }
        if (!any_live) break;
        std::sort(next.begin(), next.end(), [](const Beam& a, const Beam& b) {
            if (a.logp != b.logp) return a.logp > b.logp;
            return a.ids < b.ids;
        });
        if (next.size() > static_cast<size_t>(decode.beams)) next.resize(static_cast<size_t>(decode.beams));
        beams = std::move(next);
        bool all_done = true;
        for (const Beam& b : beams) all_done = all_done && b.done;
        if (all_done) break;
    }

    const Beam* best = nullptr;
    for (const Beam& b : beams) {
        if (!best || (b.done && !best->done) ||
            (b.done == best->done && b.logp > best->logp))
            best = &b;
    }
    std::vector<int> ids = best ? best->ids : std::vector<int>{};
    if (!ids.empty() && ids.back() == ToyVocab::kEos) ids.pop_back();
    return ids;
}

std::vector<TensorRef> ToyDecoder::params() {
    return {{&emb_, &g_emb_},   {&w_xs_, &g_w_xs_}, {&w_ss_, &g_w_ss_}, {&bs_, &g_bs_},
            {&w_a_, &g_w_a_},   {&w_cs_, &g_w_cs_}, {&w_cc_, &g_w_cc_}, {&bc_, &g_bc_},
            {&w_out_, &g_w_out_}, {&bout_, &g_bout_}};
}

json ToyDecoder::to_json() const {
    json j;
    j["vocab"] = vocab_;
    j["emb_dim"] = emb_dim_;
    j["hidden"] = hidden_;
    j["mem_dim"] = mem_dim_;
    j["align_sigma"] = align_sigma_;
    j["emb"] = mat_to_json(emb_);
    j["w_xs"] = mat_to_json(w_xs_);
    j["w_ss"] = mat_to_json(w_ss_);
    j["bs"] = mat_to_json(bs_);
    j["w_a"] = mat_to_json(w_a_);
    j["w_cs"] = mat_to_json(w_cs_);
    j["w_cc"] = mat_to_json(w_cc_);
    j["bc"] = mat_to_json(bc_);
    j["w_out"] = mat_to_json(w_out_);
    j["bout"] = mat_to_json(bout_);
    return j;
}

void ToyDecoder::from_json(const nlohmann::json& j) {
    vocab_ = j.at("vocab").get<int>();
    emb_dim_ = j.at("emb_dim").get<int>();
    hidden_ = j.at("hidden").get<int>();
    mem_dim_ = j.at("mem_dim").get<int>();
    align_sigma_ = j.at("align_sigma").get<double>();
    emb_ = mat_from_json(j.at("emb"));
    w_xs_ = mat_from_json(j.at("w_xs"));
    w_ss_ = mat_from_json(j.at("w_ss"));
    bs_ = mat_from_json(j.at("bs"));
    w_a_ = mat_from_json(j.at("w_a"));
    w_cs_ = mat_from_json(j.at("w_cs"));
    w_cc_ = mat_from_json(j.at("w_cc"));
    bc_ = mat_from_json(j.at("bc"));
    w_out_ = mat_from_json(j.at("w_out"));
    bout_ = mat_from_json(j.at("bout"));
    auto zero_like = [](const Eigen::MatrixXd& m) {
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    };
    g_emb_ = zero_like(emb_);
    g_w_xs_ = zero_like(w_xs_);
    g_w_ss_ = zero_like(w_ss_);
    g_bs_ = zero_like(bs_);
    g_w_a_ = zero_like(w_a_);
    g_w_cs_ = zero_like(w_cs_);
    g_w_cc_ = zero_like(w_cc_);
    g_bc_ = zero_like(bc_);
    g_w_out_ = zero_like(w_out_);
    g_bout_ = zero_like(bout_);
}

// --- ToySeq2Seq -----------------------------------------------------------

ToySeq2Seq::ToySeq2Seq(uint64_t seed) : seed_(seed) {}

ToySeq2Seq::ToySeq2Seq(uint64_t seed, Config cfg) : seed_(seed), cfg_(cfg) {}

Capabilities ToySeq2Seq::capabilities() const {
    return Capabilities{cfg_.emb_dim, cfg_.max_len, true};
}

void ToySeq2Seq::materialize() {
    encoder_ = ToyEncoder(static_cast<int>(vocab_.size()), cfg_.emb_dim,
                          mix_seed(seed_, fnv1a("encoder")));
    decoder_ = ToyDecoder(static_cast<int>(vocab_.size()), cfg_.emb_dim, cfg_.hidden,
                          cfg_.emb_dim, mix_seed(seed_, fnv1a("decoder")), cfg_.align_sigma);
    materialized_ = true;
}

std::string ToySeq2Seq::generate(const Tokens& input, const DecodeParams& decode,
                                 uint64_t seed) const {
    (void)seed; // decoding is deterministic; the seed is part of the call contract
    if (!materialized_) throw BackendError("backend not loaded");
    if (static_cast<int>(input.size()) > cfg_.max_len) throw BackendError("input longer than max_len");
    Eigen::MatrixXd H = encoder_.forward(vocab_.encode(input));
    std::vector<int> out = decoder_.generate(H, decode);
    return detokenize(vocab_.decode(out));
}

std::vector<double> ToySeq2Seq::fine_tune(
    const std::vector<std::pair<std::string, std::string>>& pairs, const Hyperparams& hp) {
    if (pairs.empty()) throw BackendError("fine_tune: empty pair list");
    hp.check();

    std::vector<std::pair<std::vector<int>, std::vector<int>>> data;
    if (!materialized_) {
        std::vector<Tokens> corpus;
        for (const auto& [src, dst] : pairs) {
            corpus.push_back(tokenize(src));
            corpus.push_back(tokenize(dst));
        }
        vocab_.build(corpus, cfg_.max_vocab);
        materialize();
    }
    for (const auto& [src, dst] : pairs) {
        std::vector<int> tgt = vocab_.encode(tokenize(dst));
        tgt.push_back(ToyVocab::kEos);
        data.emplace_back(vocab_.encode(tokenize(src)), std::move(tgt));
    }

    Adam adam;
    auto refs = encoder_.params();
    for (auto r : decoder_.params()) refs.push_back(r);
    adam.attach(refs);

    int epochs = cfg_.epochs_override > 0 ? cfg_.epochs_override : hp.ucd_epochs;
    long total_steps =
        (static_cast<long>(data.size()) * epochs + hp.batch_size - 1) / hp.batch_size;
    long step = 0;
    std::vector<double> curve;
    Rng shuffle_rng(mix_seed(seed_, fnv1a("shuffle")));

    std::vector<size_t> idx(data.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    for (int e = 0; e < epochs; ++e) {
        for (size_t i = idx.size(); i > 1; --i) {
            size_t j = shuffle_rng.uniform(i);
            std::swap(idx[i - 1], idx[j]);
        }
        double epoch_loss = 0.0;
        int in_batch = 0;
        for (size_t k = 0; k < idx.size(); ++k) {
            const auto& [src, tgt] = data[idx[k]];
            Eigen::MatrixXd H = encoder_.forward(src);
            Eigen::MatrixXd dH(H.rows(), H.cols());
            double loss = decoder_.loss_and_grad(H, tgt, &dH);
            encoder_.backward(src, H, dH);
            if (!std::isfinite(loss))
                throw BackendError("fine_tune: NaN loss at step " + std::to_string(step));
            epoch_loss += loss;
            ++in_batch;
            if (in_batch == hp.batch_size || k + 1 == idx.size()) {
                adam.step(scheduled_lr(hp.ibt_lr, step, hp.warmup_steps, total_steps),
                          1.0 / double(in_batch));
                ++step;
                in_batch = 0;
            }
        }
        curve.push_back(epoch_loss / double(data.size()));
    }
    return curve;
}

size_t ToySeq2Seq::param_count() const {
    size_t n = 0;
    auto count = [&n](std::vector<TensorRef> refs) {
        for (const auto& r : refs) n += static_cast<size_t>(r.w->rows() * r.w->cols());
    };
    count(const_cast<ToySeq2Seq*>(this)->encoder_.params());
    count(const_cast<ToySeq2Seq*>(this)->decoder_.params());
    return n;
}

void ToySeq2Seq::save(const std::string& dir) const {
    if (!materialized_) throw BackendError("save: backend not loaded");
    std::filesystem::create_directories(dir);
    json j;
    j["backend"] = name();
    j["config"] = {{"emb_dim", cfg_.emb_dim},
                   {"hidden", cfg_.hidden},
                   {"max_vocab", cfg_.max_vocab},
                   {"max_len", cfg_.max_len},
                   {"align_sigma", cfg_.align_sigma}};
    j["seed"] = seed_;
    j["vocab"] = vocab_.to_json();
    j["encoder"] = encoder_.to_json();
    j["decoder"] = decoder_.to_json();
    std::ofstream out(dir + "/seq2seq.json");
    if (!out) throw BackendError("cannot write " + dir + "/seq2seq.json");
    out << j.dump() << '\n';
}

void ToySeq2Seq::load(const std::string& dir) {
    std::ifstream in(dir + "/seq2seq.json");
    if (!in) throw BackendError("cannot open " + dir + "/seq2seq.json");
    nlohmann::json j = nlohmann::json::parse(in);
    cfg_.emb_dim = j.at("config").at("emb_dim").get<int>();
    cfg_.hidden = j.at("config").at("hidden").get<int>();
    cfg_.max_vocab = j.at("config").at("max_vocab").get<size_t>();
    cfg_.max_len = j.at("config").at("max_len").get<int>();
    cfg_.align_sigma = j.at("config").at("align_sigma").get<double>();
    seed_ = j.at("seed").get<uint64_t>();
    vocab_.from_json(j.at("vocab"));
    encoder_.from_json(j.at("encoder"));
    decoder_.from_json(j.at("decoder"));
    materialized_ = true;
}

} // namespace isp
