#include "oraclenet/lstm.hpp"

#include <cmath>
#include <utility>

namespace oraclenet {

namespace {

template <class Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& x) {
    return 1.0 / (1.0 + (-x).exp());
}

}  // namespace

Eigen::VectorXd Normalizer::normalize(const Config& q) const {
    return (2.0 * (q - lo).array() / (hi - lo).array() - 1.0).matrix();
}

Config Normalizer::denormalize(const Eigen::VectorXd& y) const {
    return (lo.array() + (y.array() + 1.0) * 0.5 * (hi - lo).array()).matrix();
}

std::vector<std::span<double>> LstmParams::tensors() {
    std::vector<std::span<double>> out;
    for (auto& l : layers) {
        out.emplace_back(l.w_input.data(), static_cast<std::size_t>(l.w_input.size()));
        out.emplace_back(l.w_recurrent.data(), static_cast<std::size_t>(l.w_recurrent.size()));
        out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
    out.emplace_back(w_out.data(), static_cast<std::size_t>(w_out.size()));
    out.emplace_back(b_out.data(), static_cast<std::size_t>(b_out.size()));
    return out;
}

std::vector<std::span<const double>> LstmParams::tensors() const {
    std::vector<std::span<const double>> out;
    for (const auto& l : layers) {
        out.emplace_back(l.w_input.data(), static_cast<std::size_t>(l.w_input.size()));
        out.emplace_back(l.w_recurrent.data(), static_cast<std::size_t>(l.w_recurrent.size()));
        out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
    out.emplace_back(w_out.data(), static_cast<std::size_t>(w_out.size()));
    out.emplace_back(b_out.data(), static_cast<std::size_t>(b_out.size()));
    return out;
}

LstmParams LstmParams::zeros_like() const {
    LstmParams z;
    for (const auto& l : layers) {
        z.layers.push_back({Eigen::MatrixXd::Zero(l.w_input.rows(), l.w_input.cols()),
                            Eigen::MatrixXd::Zero(l.w_recurrent.rows(), l.w_recurrent.cols()),
                            Eigen::VectorXd::Zero(l.bias.size())});
    }
    z.w_out = Eigen::MatrixXd::Zero(w_out.rows(), w_out.cols());
    z.b_out = Eigen::VectorXd::Zero(b_out.size());
    return z;
}

std::size_t LstmParams::size() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) {
        n += t.size();
    }
    return n;
}

bool LstmParams::all_finite() const {
    for (const auto& t : tensors()) {
        for (double v : t) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
    }
    return true;
}

LstmNet::LstmNet(int dim, const std::vector<int>& hidden_sizes, Normalizer normalizer)
    : norm(std::move(normalizer)), dim_(dim) {
    if (dim < 1) {
        throw UsageError("network dimension must be positive");
    }
    if (hidden_sizes.empty()) {
        throw UsageError("network needs at least one LSTM layer");
    }
    if (norm.dim() != dim || norm.hi.size() != dim) {
        throw UsageError("normalizer dimension does not match the network");
    }
    int in = 2 * dim;
    for (int h : hidden_sizes) {
        if (h < 1) {
            throw UsageError("hidden size must be positive");
        }
        params.layers.push_back(
            {Eigen::MatrixXd::Zero(4 * h, in), Eigen::MatrixXd::Zero(4 * h, h), Eigen::VectorXd::Zero(4 * h)});
        in = h;
    }
    params.w_out = Eigen::MatrixXd::Zero(dim, in);
    params.b_out = Eigen::VectorXd::Zero(dim);
}

LstmNet LstmNet::initialized(int dim, const std::vector<int>& hidden_sizes, Normalizer norm, std::uint64_t seed) {
    LstmNet net(dim, hidden_sizes, std::move(norm));
    Rng rng(mix_seed(seed, 0x1d7));
    auto fill = [&](Eigen::MatrixXd& m, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                m(i, j) = (2.0 * uniform01(rng) - 1.0) * bound;
            }
        }
    };
    for (auto& l : net.params.layers) {
        fill(l.w_input, l.input_width());
        fill(l.w_recurrent, l.hidden());
        l.bias.segment(l.hidden(), l.hidden()).setOnes();
    }
    fill(net.params.w_out, static_cast<int>(net.params.w_out.cols()));
    return net;
}

std::vector<int> LstmNet::hidden_sizes() const {
    std::vector<int> out;
    for (const auto& l : params.layers) {
        out.push_back(l.hidden());
    }
    return out;
}

LstmState LstmState::zeros(const LstmNet& net) {
    LstmState s;
    for (const auto& l : net.params.layers) {
        s.h.push_back(Eigen::VectorXd::Zero(l.hidden()));
        s.c.push_back(Eigen::VectorXd::Zero(l.hidden()));
    }
    return s;
}

Eigen::VectorXd advance(const LstmNet& net, LstmState& state, const Eigen::VectorXd& x_aug) {
    if (x_aug.size() != net.input_dim()) {
        throw UsageError("step input has width " + std::to_string(x_aug.size()) + ", network expects " +
                         std::to_string(net.input_dim()));
    }
    if (!x_aug.allFinite()) {
        throw UsageError("step input is not finite");
    }
    if (state.h.size() != net.params.layers.size()) {
        throw UsageError("state does not match the network");
    }
    // Reused gate buffer: rollout steps then run without heap traffic apart from
    // the small output vector, which keeps per-step time flat.
    thread_local Eigen::VectorXd z;
    const Eigen::VectorXd* x = &x_aug;
    for (std::size_t li = 0; li < net.params.layers.size(); ++li) {
        const auto& l = net.params.layers[li];
        const int h = l.hidden();
        z = l.bias;
        z.noalias() += l.w_input * *x;
        z.noalias() += l.w_recurrent * state.h[li];
        auto i = z.segment(0, h).array();
        auto f = z.segment(h, h).array();
        auto g = z.segment(2 * h, h).array();
        auto o = z.segment(3 * h, h).array();
        i = sigmoid(i);
        f = sigmoid(f);
        g = g.tanh();
        o = sigmoid(o);
        state.c[li].array() = f * state.c[li].array() + i * g;
        state.h[li].array() = o * state.c[li].array().tanh();
        x = &state.h[li];
    }
    Eigen::VectorXd y = net.params.b_out;
    y.noalias() += net.params.w_out * *x;
    return y;
}

StepResult step(const LstmNet& net, const LstmState& state, const Eigen::VectorXd& x_aug) {
    StepResult out{Eigen::VectorXd(), state};
    out.y = advance(net, out.state, x_aug);
    return out;
}

std::vector<Eigen::VectorXd> forward_sequence(const LstmNet& net, const std::vector<Eigen::VectorXd>& inputs) {
    if (inputs.empty()) {
        throw UsageError("forward_sequence needs a nonempty sequence");
    }
    LstmState state = LstmState::zeros(net);
    std::vector<Eigen::VectorXd> out;
    out.reserve(inputs.size());
    for (const auto& x : inputs) {
        out.push_back(advance(net, state, x));
    }
    return out;
}

double mse_loss(const std::vector<Eigen::VectorXd>& pred, const std::vector<Eigen::VectorXd>& target,
                const std::vector<double>& mask) {
    if (pred.size() != target.size() || pred.size() != mask.size()) {
        throw UsageError("mse_loss: sequences differ in length");
    }
    double num = 0.0;
    double count = 0.0;
    Eigen::Index d = 0;
    for (std::size_t t = 0; t < pred.size(); ++t) {
        if (pred[t].size() != target[t].size()) {
            throw UsageError("mse_loss: prediction and target widths differ");
        }
        d = pred[t].size();
        num += mask[t] * (pred[t] - target[t]).squaredNorm();
        count += mask[t];
    }
    if (count == 0.0) {
        throw UsageError("mse_loss: mask selects no steps");
    }
    return num / (static_cast<double>(d) * count);
}

ForwardTape forward_batch(const LstmNet& net, const Eigen::MatrixXd& inputs, int steps, int batch) {
    if (inputs.rows() != net.input_dim() || inputs.cols() != static_cast<Eigen::Index>(steps) * batch) {
        throw UsageError("forward_batch: input shape does not match steps x batch");
    }
    ForwardTape tape;
    tape.steps = steps;
    tape.batch = batch;
    tape.inputs = inputs;
    const Eigen::MatrixXd* x = &tape.inputs;
    tape.layers.resize(net.params.layers.size());
    for (std::size_t li = 0; li < net.params.layers.size(); ++li) {
        const auto& l = net.params.layers[li];
        const int h = l.hidden();
        auto& lt = tape.layers[li];
        lt.gates.noalias() = l.w_input * (*x);
        lt.gates.colwise() += l.bias;
        lt.cell.resize(h, x->cols());
        lt.tanh_c.resize(h, x->cols());
        lt.hidden.resize(h, x->cols());
        for (int t = 0; t < steps; ++t) {
            auto z = lt.gates.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
            if (t > 0) {
                z.noalias() += l.w_recurrent * lt.hidden.middleCols(static_cast<Eigen::Index>(t - 1) * batch, batch);
            }
            z.topRows(h) = sigmoid(z.topRows(h).array()).matrix();
            z.middleRows(h, h) = sigmoid(z.middleRows(h, h).array()).matrix();
            z.middleRows(2 * h, h) = z.middleRows(2 * h, h).array().tanh().matrix();
            z.bottomRows(h) = sigmoid(z.bottomRows(h).array()).matrix();
            auto c = lt.cell.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
            c = (z.topRows(h).array() * z.middleRows(2 * h, h).array()).matrix();
            if (t > 0) {
                c.array() += z.middleRows(h, h).array() *
                             lt.cell.middleCols(static_cast<Eigen::Index>(t - 1) * batch, batch).array();
            }
            auto tc = lt.tanh_c.middleCols(static_cast<Eigen::Index>(t) * batch, batch);
            tc = c.array().tanh().matrix();
            lt.hidden.middleCols(static_cast<Eigen::Index>(t) * batch, batch) =
                (z.bottomRows(h).array() * tc.array()).matrix();
        }
        x = &lt.hidden;
    }
    tape.outputs.noalias() = net.params.w_out * (*x);
    tape.outputs.colwise() += net.params.b_out;
    return tape;
}

double mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target, const Eigen::VectorXd& mask) {
    const double count = mask.sum();
    if (count == 0.0) {
        throw UsageError("mse_loss: mask selects no steps");
    }
    const Eigen::RowVectorXd per_col = (pred - target).colwise().squaredNorm();
    return per_col.dot(mask) / (static_cast<double>(pred.rows()) * count);
}

Eigen::MatrixXd mse_loss_gradient(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
                                  const Eigen::VectorXd& mask) {
    const double count = mask.sum();
    if (count == 0.0) {
        throw UsageError("mse_loss: mask selects no steps");
    }
    const double scale = 2.0 / (static_cast<double>(pred.rows()) * count);
    return ((pred - target).array().rowwise() * (scale * mask.transpose().array())).matrix();
}

LstmParams backward(const LstmNet& net, const ForwardTape& tape, const Eigen::MatrixXd& d_outputs) {
    const int steps = tape.steps;
    const int batch = tape.batch;
    const auto tb = static_cast<Eigen::Index>(steps) * batch;
    LstmParams grads = net.params.zeros_like();

    const Eigen::MatrixXd& top = tape.layers.back().hidden;
    grads.w_out.noalias() = d_outputs * top.transpose();
    grads.b_out = d_outputs.rowwise().sum();
    Eigen::MatrixXd d_hidden = net.params.w_out.transpose() * d_outputs;

    for (std::size_t li = net.params.layers.size(); li-- > 0;) {
        const auto& l = net.params.layers[li];
        const auto& lt = tape.layers[li];
        const int h = l.hidden();
        Eigen::MatrixXd dz(4 * h, tb);
        Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(h, batch);
        Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(h, batch);
        for (int t = steps - 1; t >= 0; --t) {
            const auto col = static_cast<Eigen::Index>(t) * batch;
            const auto g = lt.gates.middleCols(col, batch);
            const auto i_g = g.topRows(h).array();
            const auto f_g = g.middleRows(h, h).array();
            const auto c_g = g.middleRows(2 * h, h).array();
            const auto o_g = g.bottomRows(h).array();
            const auto tc = lt.tanh_c.middleCols(col, batch).array();

            const Eigen::ArrayXXd dh = d_hidden.middleCols(col, batch).array() + dh_next.array();
            const Eigen::ArrayXXd dc = dh * o_g * (1.0 - tc.square()) + dc_next.array();
            auto dzt = dz.middleCols(col, batch);
            dzt.topRows(h) = (dc * c_g * i_g * (1.0 - i_g)).matrix();
            if (t > 0) {
                const auto c_prev = lt.cell.middleCols(col - batch, batch).array();
                dzt.middleRows(h, h) = (dc * c_prev * f_g * (1.0 - f_g)).matrix();
            } else {
                dzt.middleRows(h, h).setZero();
            }
            dzt.middleRows(2 * h, h) = (dc * i_g * (1.0 - c_g.square())).matrix();
            dzt.bottomRows(h) = (dh * tc * o_g * (1.0 - o_g)).matrix();
            dc_next = (dc * f_g).matrix();
            dh_next.noalias() = l.w_recurrent.transpose() * dzt;
        }
        const Eigen::MatrixXd& x = li == 0 ? tape.inputs : tape.layers[li - 1].hidden;
        auto& gl = grads.layers[li];
        gl.w_input.noalias() = dz * x.transpose();
        if (steps > 1) {
            gl.w_recurrent.noalias() =
                dz.rightCols(tb - batch) * lt.hidden.leftCols(tb - batch).transpose();
        }
        gl.bias = dz.rowwise().sum();
        if (li > 0) {
            d_hidden.noalias() = l.w_input.transpose() * dz;
        }
    }
    return grads;
}

void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               std::int64_t t, const AdamConfig& cfg) {
    if (t < 1) {
        throw UsageError("adam_step: step index must be >= 1");
    }
    if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
        throw UsageError("adam_step: tensor sizes differ");
    }
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grads[k];
        v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grads[k] * grads[k];
        const double m_hat = m[k] / bc1;
        const double v_hat = v[k] / bc2;
        params[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
}

void adam_step(LstmParams& params, const LstmParams& grads, LstmParams& m, LstmParams& v, std::int64_t t,
               const AdamConfig& cfg) {
    auto p = params.tensors();
    const auto g = grads.tensors();
    auto mm = m.tensors();
    auto vv = v.tensors();
    if (g.size() != p.size() || mm.size() != p.size() || vv.size() != p.size()) {
        throw UsageError("adam_step: parameter structures differ");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        adam_step(p[i], g[i], mm[i], vv[i], t, cfg);
    }
}

double clip_gradients(LstmParams& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& t : std::as_const(grads).tensors()) {
        for (double x : t) {
            sq += x * x;
        }
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (auto t : grads.tensors()) {
            for (double& x : t) {
                x *= scale;
            }
        }
    }
    return norm;
}

}  // namespace oraclenet
