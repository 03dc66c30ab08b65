#include "oraclenet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace oraclenet {

Normalizer normalizer_for(const Environment& env) {
    return Normalizer{env.lower(), env.upper()};
}

PackedBatch pack_paths(const LstmNet& net, const std::vector<const OraclePath*>& paths, int goal_hold_steps) {
    PackedBatch pb;
    pb.batch = static_cast<int>(paths.size());
    for (const auto* p : paths) {
        if (p->waypoints.size() < 2) {
            throw UsageError("training path has fewer than 2 waypoints");
        }
        pb.steps = std::max(pb.steps, static_cast<int>(p->waypoints.size()) - 1 + goal_hold_steps);
    }
    const int d = net.dim();
    const auto cols = static_cast<Eigen::Index>(pb.steps) * pb.batch;
    pb.inputs = Eigen::MatrixXd::Zero(2 * d, cols);
    pb.targets = Eigen::MatrixXd::Zero(d, cols);
    pb.mask = Eigen::VectorXd::Zero(cols);
    for (int b = 0; b < pb.batch; ++b) {
        const auto& w = paths[b]->waypoints;
        const Eigen::VectorXd goal = net.norm.normalize(w.back());
        Eigen::VectorXd cur = net.norm.normalize(w.front());
        for (std::size_t t = 0; t + 1 < w.size(); ++t) {
            const auto col = static_cast<Eigen::Index>(t) * pb.batch + b;
            const Eigen::VectorXd next = net.norm.normalize(w[t + 1]);
            pb.inputs.col(col).head(d) = cur;
            pb.inputs.col(col).tail(d) = goal;
            pb.targets.col(col) = next;
            pb.mask[col] = 1.0;
            cur = next;
        }
        for (int h = 0; h < goal_hold_steps; ++h) {
            const auto col = static_cast<Eigen::Index>(w.size() - 1 + h) * pb.batch + b;
            pb.inputs.col(col).head(d) = goal;
            pb.inputs.col(col).tail(d) = goal;
            pb.targets.col(col) = goal;
            pb.mask[col] = 1.0;
        }
    }
    return pb;
}

double evaluate_mse(const LstmNet& net, const std::vector<OraclePath>& paths, int batch_size) {
    if (paths.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double num = 0.0;
    double count = 0.0;
    for (std::size_t start = 0; start < paths.size(); start += static_cast<std::size_t>(batch_size)) {
        std::vector<const OraclePath*> chunk;
        for (std::size_t i = start; i < std::min(paths.size(), start + static_cast<std::size_t>(batch_size)); ++i) {
            chunk.push_back(&paths[i]);
        }
        const PackedBatch pb = pack_paths(net, chunk);
        const ForwardTape tape = forward_batch(net, pb.inputs, pb.steps, pb.batch);
        const double c = pb.mask.sum();
        num += mse_loss(tape.outputs, pb.targets, pb.mask) * c;
        count += c;
    }
    return num / count;
}

TrainResult train(LstmNet net, const std::vector<OraclePath>& train_paths, const std::vector<OraclePath>& val_paths,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
    if (train_paths.empty()) {
        throw UsageError("training set is empty");
    }
    if (cfg.batch_size < 1 || cfg.epochs < 0 || cfg.goal_hold_steps < 0) {
        throw UsageError("batch_size must be positive, epochs and goal_hold_steps non-negative");
    }
    for (const auto& p : train_paths) {
        if (!p.waypoints.empty() && p.waypoints.front().size() != net.dim()) {
            throw UsageError("training path dimension does not match the network");
        }
    }
    LstmParams m = net.params.zeros_like();
    LstmParams v = net.params.zeros_like();
    std::vector<std::size_t> order(train_paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    const auto batches_per_epoch =
        static_cast<std::int64_t>((train_paths.size() + cfg.batch_size - 1) / cfg.batch_size);
    const std::int64_t total_steps = batches_per_epoch * cfg.epochs;
    std::int64_t t = 0;

    TrainResult result{std::move(net), {}};
    LstmNet& model = result.net;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
            for (std::size_t i = order.size(); i > 1; --i) {
                std::swap(order[i - 1], order[uniform_index(rng, i)]);
            }
        }
        double num = 0.0;
        double count = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            std::vector<const OraclePath*> chunk;
            for (std::size_t i = start; i < std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
                 ++i) {
                chunk.push_back(&train_paths[order[i]]);
            }
            const PackedBatch pb = pack_paths(model, chunk, cfg.goal_hold_steps);
            const ForwardTape tape = forward_batch(model, pb.inputs, pb.steps, pb.batch);
            const double loss = mse_loss(tape.outputs, pb.targets, pb.mask);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "training diverged: non-finite loss at epoch " << epoch << ", batch "
                    << start / static_cast<std::size_t>(cfg.batch_size);
                throw DomainError(msg.str());
            }
            LstmParams grads = backward(model, tape, mse_loss_gradient(tape.outputs, pb.targets, pb.mask));
            clip_gradients(grads, cfg.clip_norm);

            AdamConfig step_cfg = cfg.adam;
            if (cfg.lr_final_fraction != 1.0 && total_steps > 1) {
                const double progress = static_cast<double>(t) / static_cast<double>(total_steps - 1);
                const double f = cfg.lr_final_fraction;
                step_cfg.lr = cfg.adam.lr * (f + (1.0 - f) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress)));
            }
            adam_step(model.params, grads, m, v, ++t, step_cfg);
            if (!model.params.all_finite()) {
                throw DomainError("training diverged: non-finite parameters at epoch " + std::to_string(epoch));
            }
            const double c = pb.mask.sum();
            num += loss * c;
            count += c;
        }
        EpochLoss el{epoch, num / count, evaluate_mse(model, val_paths)};
        result.curve.push_back(el);
        if (on_epoch && !on_epoch(el)) {
            break;
        }
    }
    return result;
}

ArchPreset arch_preset(const std::string& name) {
    if (name == "2d-paper") return {name, {256, 256, 256, 256}};
    if (name == "3link-paper") return {name, {256, 256, 256, 256, 256, 256}};
    if (name == "4link-paper" || name == "6link-paper") return {name, {400, 400, 400, 400, 400, 400}};
    if (name == "ci") return {name, {128, 128}};
    throw UsageError("unknown architecture preset '" + name + "'");
}

std::vector<std::string> arch_preset_names() {
    return {"2d-paper", "3link-paper", "4link-paper", "6link-paper", "ci"};
}

}  // namespace oraclenet
