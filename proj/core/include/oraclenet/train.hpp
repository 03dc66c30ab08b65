#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oraclenet/dataset.hpp"
#include "oraclenet/env.hpp"
#include "oraclenet/lstm.hpp"

namespace oraclenet {

struct TrainConfig {
    int epochs = 50;
    int batch_size = 16;
    AdamConfig adam;
    /// Learning rate at the last epoch as a fraction of adam.lr (cosine schedule); 1 disables decay.
    double lr_final_fraction = 1.0;
    double clip_norm = 5.0;
    std::uint64_t seed = 1;
    bool shuffle = true;
    /// Extra steps appended to every training sequence with input [goal, goal]
    /// and target goal, so the recurrent state learns to settle once it arrives.
    int goal_hold_steps = 0;
};

struct EpochLoss {
    int epoch = 0;
    double train_mse = 0.0;
    /// NaN when no validation paths were given.
    double val_mse = 0.0;
};

struct TrainResult {
    LstmNet net;
    std::vector<EpochLoss> curve;
};

/// Called after every epoch; return false to stop early.
using EpochCallback = std::function<bool(const EpochLoss&)>;

/// One path per sequence, state threaded through its steps, padded mini-batches
/// with masks. Targets and inputs are normalized with net.norm. Deterministic
/// for a fixed seed. Throws UsageError on an empty training set and
/// DomainError when the loss becomes non-finite.
[[nodiscard]] TrainResult train(LstmNet net, const std::vector<OraclePath>& train_paths,
                                const std::vector<OraclePath>& val_paths, const TrainConfig& cfg,
                                const EpochCallback& on_epoch = {});

/// Normalized sequence tensors for a set of paths, padded to the longest.
struct PackedBatch {
    int steps = 0;
    int batch = 0;
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd targets;
    Eigen::VectorXd mask;
};

/// `goal_hold_steps` appends that many [goal, goal] -> goal steps per path.
[[nodiscard]] PackedBatch pack_paths(const LstmNet& net, const std::vector<const OraclePath*>& paths,
                                     int goal_hold_steps = 0);

/// Masked MSE of the net over whole paths, in normalized units.
[[nodiscard]] double evaluate_mse(const LstmNet& net, const std::vector<OraclePath>& paths, int batch_size = 64);

struct ArchPreset {
    std::string name;
    std::vector<int> hidden;
};

/// "2d-paper" 4x256, "3link-paper" 6x256, "4link-paper" and "6link-paper" 6x400, "ci" 2x128.
[[nodiscard]] ArchPreset arch_preset(const std::string& name);
[[nodiscard]] std::vector<std::string> arch_preset_names();

[[nodiscard]] Normalizer normalizer_for(const Environment& env);

}  // namespace oraclenet
