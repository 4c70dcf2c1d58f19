#ifndef ISPKIT_BACKENDS_OPTIM_HPP
#define ISPKIT_BACKENDS_OPTIM_HPP

#include <Eigen/Dense>
#include <vector>

namespace isp {

// parameter matrix paired with its gradient accumulator
struct TensorRef {
    Eigen::MatrixXd* w = nullptr;
    Eigen::MatrixXd* g = nullptr;
};

// linear warmup to base_lr, then linear decay to zero at total_steps;
// constant after warmup when total_steps == 0
inline double scheduled_lr(double base_lr, long step, long warmup_steps, long total_steps) {
    if (warmup_steps > 0 && step < warmup_steps) {
        return base_lr * double(step + 1) / double(warmup_steps);
    }
    if (total_steps > warmup_steps) {
        double remain = double(total_steps - step) / double(total_steps - warmup_steps);
        return base_lr * (remain > 0.0 ? remain : 0.0);
    }
    return base_lr;
}

class Adam {
public:
    explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void attach(std::vector<TensorRef> refs) {
        refs_ = std::move(refs);
        m_.clear();
        v_.clear();
        for (const auto& r : refs_) {
            m_.push_back(Eigen::MatrixXd::Zero(r.w->rows(), r.w->cols()));
            v_.push_back(Eigen::MatrixXd::Zero(r.w->rows(), r.w->cols()));
        }
        t_ = 0;
    }

    void zero_grads() {
        for (auto& r : refs_) r.g->setZero();
    }

    // grad_scale averages accumulated per-instance gradients
    void step(double lr, double grad_scale = 1.0, double clip_norm = 5.0) {
        double sq = 0.0;
        for (const auto& r : refs_) sq += grad_scale * grad_scale * r.g->squaredNorm();
        double norm = std::sqrt(sq);
        double clip = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

        ++t_;
        double bc1 = 1.0 - std::pow(beta1_, double(t_));
        double bc2 = 1.0 - std::pow(beta2_, double(t_));
        for (size_t i = 0; i < refs_.size(); ++i) {
            Eigen::MatrixXd g = (*refs_[i].g) * (grad_scale * clip);
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
            Eigen::ArrayXXd mhat = m_[i].array() / bc1;
            Eigen::ArrayXXd vhat = v_[i].array() / bc2;
            refs_[i].w->array() -= lr * mhat / (vhat.sqrt() + eps_);
        }
        zero_grads();
    }

private:
    double beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<TensorRef> refs_;
    std::vector<Eigen::MatrixXd> m_, v_;
};

} // namespace isp

#endif
