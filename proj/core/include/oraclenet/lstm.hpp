#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oraclenet/types.hpp"

namespace oraclenet {

/// Per-axis affine map between c-space bounds and [-1, 1].
struct Normalizer {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    [[nodiscard]] Eigen::VectorXd normalize(const Config& q) const;
    [[nodiscard]] Config denormalize(const Eigen::VectorXd& y) const;
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(lo.size()); }
};

/// Gate rows are packed as [input; forget; cell; output], each `hidden` rows tall.
struct LstmLayer {
    Eigen::MatrixXd w_input;      // 4h x in
    Eigen::MatrixXd w_recurrent;  // 4h x h
    Eigen::VectorXd bias;         // 4h

    [[nodiscard]] int hidden() const noexcept { return static_cast<int>(w_recurrent.cols()); }
    [[nodiscard]] int input_width() const noexcept { return static_cast<int>(w_input.cols()); }
};

/// Every trainable tensor. Also used for gradients and Adam moments.
struct LstmParams {
    std::vector<LstmLayer> layers;
    Eigen::MatrixXd w_out;  // d x h_top
    Eigen::VectorXd b_out;  // d

    /// Tensors in serialization order: per layer (w_input, w_recurrent, bias), then w_out, b_out.
    [[nodiscard]] std::vector<std::span<double>> tensors();
    [[nodiscard]] std::vector<std::span<const double>> tensors() const;
    [[nodiscard]] LstmParams zeros_like() const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool all_finite() const;
};

/// Stacked LSTM with a fully connected output layer over the top hidden state.
/// Input width is 2d (current config and goal), output width is d.
class LstmNet {
public:
    /// Zero-initialized parameters.
    LstmNet(int dim, const std::vector<int>& hidden_sizes, Normalizer norm);

    /// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases, forget-gate bias 1.
    static LstmNet initialized(int dim, const std::vector<int>& hidden_sizes, Normalizer norm, std::uint64_t seed);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int input_dim() const noexcept { return 2 * dim_; }
    [[nodiscard]] int layer_count() const noexcept { return static_cast<int>(params.layers.size()); }
    [[nodiscard]] std::vector<int> hidden_sizes() const;

    LstmParams params;
    Normalizer norm;

private:
    int dim_;
};

struct LstmState {
    std::vector<Eigen::VectorXd> h;
    std::vector<Eigen::VectorXd> c;

    [[nodiscard]] static LstmState zeros(const LstmNet& net);
};

struct StepResult {
    Eigen::VectorXd y;
    LstmState state;
};

/// One recurrent step on a normalized augmented input. Pure.
/// Throws UsageError on a wrong width or non-finite input.
[[nodiscard]] StepResult step(const LstmNet& net, const LstmState& state, const Eigen::VectorXd& x_aug);

/// In-place variant for rollouts; same arithmetic as step().
[[nodiscard]] Eigen::VectorXd advance(const LstmNet& net, LstmState& state, const Eigen::VectorXd& x_aug);

/// Iterated step from the zero state.
[[nodiscard]] std::vector<Eigen::VectorXd> forward_sequence(const LstmNet& net,
                                                            const std::vector<Eigen::VectorXd>& inputs);

/// sum_t mask_t * |pred_t - target_t|^2 / (d * sum_t mask_t). Throws UsageError on an all-zero mask.
[[nodiscard]] double mse_loss(const std::vector<Eigen::VectorXd>& pred, const std::vector<Eigen::VectorXd>& target,
                              const std::vector<double>& mask);

// ---------------------------------------------------------------------------
// Batched training path. A batch of B padded sequences of length T is stored
// column-wise: column t * B + b holds step t of sequence b.

struct LayerTape {
    Eigen::MatrixXd gates;   // 4h x TB, activated
    Eigen::MatrixXd cell;    // h x TB
    Eigen::MatrixXd tanh_c;  // h x TB
    Eigen::MatrixXd hidden;  // h x TB
};

struct ForwardTape {
    int steps = 0;
    int batch = 0;
    Eigen::MatrixXd inputs;  // 2d x TB
    std::vector<LayerTape> layers;
    Eigen::MatrixXd outputs;  // d x TB
};

[[nodiscard]] ForwardTape forward_batch(const LstmNet& net, const Eigen::MatrixXd& inputs, int steps, int batch);

/// Masked MSE over batch columns; mask has TB entries.
[[nodiscard]] double mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target, const Eigen::VectorXd& mask);

/// d(mse_loss)/d(pred).
[[nodiscard]] Eigen::MatrixXd mse_loss_gradient(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
                                                const Eigen::VectorXd& mask);

/// Backpropagation through time over the whole tape.
[[nodiscard]] LstmParams backward(const LstmNet& net, const ForwardTape& tape, const Eigen::MatrixXd& d_outputs);

// ---------------------------------------------------------------------------

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected Adam update, element-wise; t >= 1.
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               std::int64_t t, const AdamConfig& cfg);

/// Applies adam_step to every tensor of `params`.
void adam_step(LstmParams& params, const LstmParams& grads, LstmParams& m, LstmParams& v, std::int64_t t,
               const AdamConfig& cfg);

/// Scales grads so their global L2 norm is at most max_norm; returns the norm before scaling.
double clip_gradients(LstmParams& grads, double max_norm);

// ---------------------------------------------------------------------------

/// Weight file: "ONWT", u32 version=1, u32 d, u32 layer count, u32 hidden per
/// layer, u8 float width (4 or 8), tensors row-major in LstmParams::tensors()
/// order, 2d f64 normalization bounds (lo then hi), trailing CRC32 of all prior bytes.
[[nodiscard]] std::string encode_weights(const LstmNet& net, int float_width = 8);
[[nodiscard]] LstmNet decode_weights(const std::string& bytes, std::optional<int> expected_dim = std::nullopt);
void save_weights(const LstmNet& net, const std::string& file, int float_width = 8);
[[nodiscard]] LstmNet load_weights(const std::string& file, std::optional<int> expected_dim = std::nullopt);

}  // namespace oraclenet
