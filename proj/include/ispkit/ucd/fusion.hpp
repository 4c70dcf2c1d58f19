#ifndef ISPKIT_UCD_FUSION_HPP
#define ISPKIT_UCD_FUSION_HPP

#include <Eigen/Dense>
#include <stdexcept>

#include "ispkit/core/rng.hpp"

namespace isp {

template <typename Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Parameters of the fusion stage: bilinear attention map, one highway layer
// over the concatenated [pooled; word] vector, and the output projection
// back to the encoder width.
template <typename Scalar>
struct FusionParams {
    DenseMat<Scalar> w_attn;       // ctx_dim x def_dim
    DenseMat<Scalar> w_h, w_t;     // (ctx+def) x (ctx+def)
    DenseMat<Scalar> b_h, b_t;     // (ctx+def) x 1
    DenseMat<Scalar> w_out;        // ctx_dim x (ctx+def)

    int ctx_dim() const { return static_cast<int>(w_attn.rows()); }
    int def_dim() const { return static_cast<int>(w_attn.cols()); }

    static FusionParams random(int ctx_dim, int def_dim, Rng& rng, Scalar scale = Scalar(0.3)) {
        const int f = ctx_dim + def_dim;
        FusionParams p;
        auto fill = [&rng, scale](DenseMat<Scalar>& m, int r, int c) {
            m.resize(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) m(i, j) = Scalar(rng.normal(0.0, double(scale)));
        };
        fill(p.w_attn, ctx_dim, def_dim);
        fill(p.w_h, f, f);
        fill(p.w_t, f, f);
        p.b_h = DenseMat<Scalar>::Zero(f, 1);
        p.b_t = DenseMat<Scalar>::Zero(f, 1);
        fill(p.w_out, ctx_dim, f);
        return p;
    }

    FusionParams zeros_like() const {
        FusionParams g;
        g.w_attn = DenseMat<Scalar>::Zero(w_attn.rows(), w_attn.cols());
        g.w_h = DenseMat<Scalar>::Zero(w_h.rows(), w_h.cols());
        g.w_t = DenseMat<Scalar>::Zero(w_t.rows(), w_t.cols());
        g.b_h = DenseMat<Scalar>::Zero(b_h.rows(), 1);
        g.b_t = DenseMat<Scalar>::Zero(b_t.rows(), 1);
        g.w_out = DenseMat<Scalar>::Zero(w_out.rows(), w_out.cols());
        return g;
    }
};

template <typename Scalar>
struct AttendResult {
    DenseVec<Scalar> weights; // length N, sums to 1
    DenseVec<Scalar> pooled;  // def_dim
};

// scores s_i = query^T W E_D[i]; weights = softmax(s); pooled = sum_i w_i E_D[i]
template <typename Scalar>
AttendResult<Scalar> attend_definitions(const DenseMat<Scalar>& def_embeddings,
                                        const DenseVec<Scalar>& query,
                                        const DenseMat<Scalar>& w_attn) {
    if (def_embeddings.rows() == 0) throw std::invalid_argument("attend: no definitions");
    if (query.size() != w_attn.rows() || def_embeddings.cols() != w_attn.cols())
        throw std::invalid_argument("attend: inconsistent shapes");

    DenseVec<Scalar> scores = def_embeddings * (w_attn.transpose() * query);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> e = (scores.array() - scores.maxCoeff()).exp();
    AttendResult<Scalar> r;
    r.weights = (e / e.sum()).matrix();
    r.pooled = def_embeddings.transpose() * r.weights;
    return r;
}

template <typename Scalar>
struct FuseCache {
    DenseVec<Scalar> x;      // [pooled; word]
    DenseVec<Scalar> t_gate; // sigmoid(W_t x + b_t)
    DenseVec<Scalar> h_pre;  // W_h x + b_h
    DenseVec<Scalar> h;      // relu(h_pre)
    DenseVec<Scalar> highway;
    DenseVec<Scalar> out;    // W_out * highway
};

// highway combination of the pooled definition vector and the masked word
// embedding, projected back to the encoder width:
//   x = [pooled; word], T = sigmoid(W_t x + b_t), h = relu(W_h x + b_h)
//   out = W_out (T .* h + (1-T) .* x)
template <typename Scalar>
FuseCache<Scalar> fuse_definition(const DenseVec<Scalar>& pooled,
                                  const DenseVec<Scalar>& word_embedding,
                                  const FusionParams<Scalar>& p) {
    if (pooled.size() + word_embedding.size() != p.w_h.rows())
        throw std::invalid_argument("fuse: inconsistent shapes");
    FuseCache<Scalar> c;
    c.x.resize(pooled.size() + word_embedding.size());
    c.x << pooled, word_embedding;
    c.t_gate = ((-(p.w_t * c.x + p.b_t.col(0)).array()).exp() + Scalar(1)).inverse().matrix();
    c.h_pre = p.w_h * c.x + p.b_h.col(0);
    c.h = c.h_pre.array().max(Scalar(0)).matrix();
    c.highway = c.t_gate.cwiseProduct(c.h) +
                (DenseVec<Scalar>::Ones(c.x.size()) - c.t_gate).cwiseProduct(c.x);
    c.out = p.w_out * c.highway;
    return c;
}

// replaces row mask_index with `fused`; everything else is bit-identical
template <typename Scalar>
DenseMat<Scalar> splice_embedding(const DenseMat<Scalar>& context, long mask_index,
                                  const DenseVec<Scalar>& fused) {
    if (mask_index < 0 || mask_index >= context.rows())
        throw std::invalid_argument("splice: mask_index out of range");
    if (fused.size() != context.cols())
        throw std::invalid_argument("splice: fused vector has wrong dimension");
    DenseMat<Scalar> out = context;
    out.row(mask_index) = fused.transpose();
    return out;
}

template <typename Scalar>
struct FusionGrads {
    FusionParams<Scalar> params; // same shapes, gradient values
    DenseVec<Scalar> d_pooled;
    DenseVec<Scalar> d_word;
    DenseMat<Scalar> d_defs;
    DenseVec<Scalar> d_query;
};

template <typename Scalar>
FusionGrads<Scalar> make_fusion_grads(const FusionParams<Scalar>& p) {
    FusionGrads<Scalar> g;
    g.params = p.zeros_like();
    g.d_pooled = DenseVec<Scalar>::Zero(p.def_dim());
    g.d_word = DenseVec<Scalar>::Zero(p.ctx_dim());
    g.d_query = DenseVec<Scalar>::Zero(p.ctx_dim());
    return g;
}

// backward through fuse_definition; accumulates into grads.params
template <typename Scalar>
void fuse_backward(const FuseCache<Scalar>& c, const FusionParams<Scalar>& p,
                   const DenseVec<Scalar>& d_out, long def_dim, FusionGrads<Scalar>& g) {
    g.params.w_out += d_out * c.highway.transpose();
    DenseVec<Scalar> d_highway = p.w_out.transpose() * d_out;

    DenseVec<Scalar> d_tgate = d_highway.cwiseProduct(c.h - c.x);
    DenseVec<Scalar> d_h = d_highway.cwiseProduct(c.t_gate);
    DenseVec<Scalar> d_x_carry =
        d_highway.cwiseProduct(DenseVec<Scalar>::Ones(c.x.size()) - c.t_gate);

    DenseVec<Scalar> d_pre_t = d_tgate.cwiseProduct(
        c.t_gate.cwiseProduct(DenseVec<Scalar>::Ones(c.x.size()) - c.t_gate));
    g.params.w_t += d_pre_t * c.x.transpose();
    g.params.b_t.col(0) += d_pre_t;

    DenseVec<Scalar> relu_mask =
        (c.h_pre.array() > Scalar(0)).template cast<Scalar>().matrix();
    DenseVec<Scalar> d_pre_h = d_h.cwiseProduct(relu_mask);
    g.params.w_h += d_pre_h * c.x.transpose();
    g.params.b_h.col(0) += d_pre_h;

    DenseVec<Scalar> d_x =
        p.w_t.transpose() * d_pre_t + p.w_h.transpose() * d_pre_h + d_x_carry;
    g.d_pooled = d_x.head(def_dim);
    g.d_word = d_x.tail(d_x.size() - def_dim);
}

// backward through attend_definitions; accumulates into grads
template <typename Scalar>
void attend_backward(const DenseMat<Scalar>& def_embeddings, const DenseVec<Scalar>& query,
                     const DenseMat<Scalar>& w_attn, const AttendResult<Scalar>& fwd,
                     const DenseVec<Scalar>& d_pooled, FusionGrads<Scalar>& g) {
    // pooled = E_D^T w
    DenseVec<Scalar> d_weights = def_embeddings * d_pooled;
    if (g.d_defs.rows() != def_embeddings.rows() || g.d_defs.cols() != def_embeddings.cols())
        g.d_defs = DenseMat<Scalar>::Zero(def_embeddings.rows(), def_embeddings.cols());
    g.d_defs += fwd.weights * d_pooled.transpose();

    // softmax jacobian
    Scalar inner = fwd.weights.dot(d_weights);
    DenseVec<Scalar> d_scores = fwd.weights.cwiseProduct((d_weights.array() - inner).matrix());

    // s_i = query^T W d_i
    DenseVec<Scalar> proj = def_embeddings.transpose() * d_scores; // def_dim
    g.params.w_attn += query * proj.transpose();
    if (g.d_query.size() != query.size()) g.d_query = DenseVec<Scalar>::Zero(query.size());
    g.d_query += w_attn * proj;
    g.d_defs += d_scores * (w_attn.transpose() * query).transpose();
}

// forward through attend -> fuse, returning everything needed for backward
template <typename Scalar>
struct FusionForward {
    AttendResult<Scalar> attend;
    FuseCache<Scalar> fuse;
};

template <typename Scalar>
FusionForward<Scalar> fusion_forward(const DenseMat<Scalar>& def_embeddings,
                                     const DenseVec<Scalar>& word_embedding,
                                     const FusionParams<Scalar>& p) {
    FusionForward<Scalar> f;
    f.attend = attend_definitions(def_embeddings, word_embedding, p.w_attn);
    f.fuse = fuse_definition(f.attend.pooled, word_embedding, p);
    return f;
}

// backward for the composite given dLoss/dFused; parameter gradients are
// accumulated into g.params
template <typename Scalar>
void fusion_backward(const DenseMat<Scalar>& def_embeddings,
                     const DenseVec<Scalar>& word_embedding, const FusionParams<Scalar>& p,
                     const FusionForward<Scalar>& fwd, const DenseVec<Scalar>& d_fused,
                     FusionGrads<Scalar>& g) {
    fuse_backward(fwd.fuse, p, d_fused, def_embeddings.cols(), g);
    attend_backward(def_embeddings, word_embedding, p.w_attn, fwd.attend, g.d_pooled, g);
    // the word embedding feeds both the highway input and the attention query
    g.d_word += g.d_query;
}

} // namespace isp

#endif
