#pragma once

#include "fedmap/grid_map.hpp"
#include "fedmap/train.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fedmap {

struct MetaConfig {
    double outer_step = 0.1;  // Reptile epsilon in (0,1]
    int inner_iters = 16;
    double inner_lr = 1e-4;
    int meta_iterations = 1000;
    int tasks_per_meta_step = 4;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const {
        if (!(outer_step > 0.0 && outer_step <= 1.0))
            throw ValidationError("MetaConfig: outer_step must be in (0,1]");
        if (inner_iters < 1) throw ValidationError("MetaConfig: inner_iters must be >= 1");
        if (!(inner_lr > 0.0)) throw ValidationError("MetaConfig: inner_lr must be > 0");
        if (meta_iterations < 0)
            throw ValidationError("MetaConfig: meta_iterations must be >= 0");
        if (tasks_per_meta_step < 1)
            throw ValidationError("MetaConfig: tasks_per_meta_step must be >= 1");
    }
};

/// Maps grouped by category label; categories partition the corpus into
/// meta-learning tasks.
struct TaskCorpus {
    struct Entry {
        GridMap map;
        std::string category;
    };
    std::vector<Entry> entries;

    void validate() const;
    std::vector<std::string> categories() const;
};

struct UnknownMapSpec {
    int width = 64;
    int height = 64;
    float unknown_value = 0.5f;

    void validate() const {
        if (width < 1 || height < 1) throw ValidationError("UnknownMapSpec: dims must be >= 1");
        if (!(unknown_value >= 0.0f && unknown_value <= 1.0f))
            throw ValidationError("UnknownMapSpec: unknown_value must be in [0,1]");
    }
};

/// Fits a fresh network to the constant unknown-value map so unexplored
/// regions render as unknown instead of artifacts. Aborts with NumericError
/// if loss exceeds 10x its initial value.
ModelParams pretrain_empty(const NetworkConfig& net_config, const FourierEncoder& encoder,
                           const UnknownMapSpec& spec, int iters, double lr, std::uint64_t seed,
                           FitStats* stats = nullptr);

/// One Reptile step: phi = fit(task, copy of theta, inner_lr, k iters);
/// returns theta + epsilon * (phi - theta) elementwise over trainables and
/// BatchNorm running statistics.
ModelParams reptile_step(const ModelParams& theta, const GridMap& task,
                         const FourierEncoder& encoder, int inner_iters, double inner_lr,
                         double outer_step);

/// Reptile meta-training: each round samples tasks uniformly over categories,
/// then uniformly within the category, and applies the averaged direction
/// theta += epsilon * mean(phi_T - theta). Task fits may run concurrently;
/// the update reduces in fixed task order.
ModelParams meta_train(const ModelParams& theta0, const TaskCorpus& corpus,
                       const FourierEncoder& encoder, const MetaConfig& cfg);

/// Renders PSNR against the map after `iters` full-batch adaptation steps
/// from the given initialization (the initialization itself is not mutated).
double adapt_psnr(const ModelParams& init, const GridMap& map, const FourierEncoder& encoder,
                  int iters, double lr);

/// Corpus manifest: JSON {"maps": [{"path": ..., "category": ...}]}. Paths
/// are resolved relative to the manifest location.
void save_corpus_manifest(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& path_categories);
TaskCorpus load_corpus_manifest(const std::filesystem::path& path);

}  // namespace fedmap
