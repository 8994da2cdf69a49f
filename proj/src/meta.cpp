#include "fedmap/meta.hpp"

#include "fedmap/map_io.hpp"
#include "fedmap/metrics.hpp"
#include "fedmap/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

namespace fedmap {

using nlohmann::json;

void TaskCorpus::validate() const {
    if (entries.empty()) throw ValidationError("TaskCorpus: no entries");
    for (const auto& e : entries) {
        e.map.validate();
        if (e.category.empty()) throw ValidationError("TaskCorpus: entry without category");
    }
}

std::vector<std::string> TaskCorpus::categories() const {
    std::vector<std::string> cats;
    for (const auto& e : entries)
        if (std::find(cats.begin(), cats.end(), e.category) == cats.end())
            cats.push_back(e.category);
    return cats;
}

ModelParams pretrain_empty(const NetworkConfig& net_config, const FourierEncoder& encoder,
                           const UnknownMapSpec& spec, int iters, double lr, std::uint64_t seed,
                           FitStats* stats) {
    spec.validate();
    ModelParams params = init_params<float>(net_config, seed);
    if (iters == 0) {
        if (stats) *stats = FitStats{};
        return params;
    }
    const GridMap empty =
        GridMap::filled(spec.width, spec.height, 1, spec.unknown_value);
    FitOptions opts;
    opts.iters = iters;
    opts.lr = lr;
    opts.divergence_factor = 10.0;
    fit(params, make_map_batch(empty, net_config.out_channels), encoder, opts, stats);
    return params;
}

namespace {

ModelParams fit_task(const ModelParams& theta, const GridMap& task, const FourierEncoder& encoder,
                     int inner_iters, double inner_lr) {
    ModelParams phi = theta;
    FitOptions opts;
    opts.iters = inner_iters;
    opts.lr = inner_lr;
    fit(phi, make_map_batch(task, theta.config.out_channels), encoder, opts);
    return phi;
}

// dst += coeff * (phi - base) over trainables and running statistics.
void accumulate_direction(ModelParams& dst, const ModelParams& base, const ModelParams& phi,
                          float coeff) {
    check_same_layout(dst, base);
    check_same_layout(dst, phi);
    auto d = collect_tensors(dst);
    const auto b = collect_tensors(base);
    const auto p = collect_tensors(phi);
    for (std::size_t t = 0; t < d.size(); ++t)
        for (std::size_t i = 0; i < d[t].size; ++i)
            d[t].data[i] += coeff * (p[t].data[i] - b[t].data[i]);
}

}  // namespace

ModelParams reptile_step(const ModelParams& theta, const GridMap& task,
                         const FourierEncoder& encoder, int inner_iters, double inner_lr,
                         double outer_step) {
    if (inner_iters < 1) throw ValidationError("reptile_step: inner_iters must be >= 1");
    const ModelParams phi = fit_task(theta, task, encoder, inner_iters, inner_lr);
    ModelParams out = theta;
    accumulate_direction(out, theta, phi, static_cast<float>(outer_step));
    return out;
}

ModelParams meta_train(const ModelParams& theta0, const TaskCorpus& corpus,
                       const FourierEncoder& encoder, const MetaConfig& cfg) {
    cfg.validate();
    corpus.validate();

    // Category-balanced sampling: uniform over categories, then uniform
    // within the chosen category.
    std::map<std::string, std::vector<std::size_t>> by_category;
    for (std::size_t i = 0; i < corpus.entries.size(); ++i)
        by_category[corpus.entries[i].category].push_back(i);
    std::vector<const std::vector<std::size_t>*> category_lists;
    for (const auto& cat : corpus.categories()) category_lists.push_back(&by_category.at(cat));

    std::mt19937_64 task_rng(substream_seed(cfg.seed, "tasks"));
    ModelParams theta = theta0;
    for (int round = 0; round < cfg.meta_iterations; ++round) {
        std::vector<std::size_t> picked(cfg.tasks_per_meta_step);
        for (auto& idx : picked) {
            const auto& list =
                *category_lists[task_rng() % category_lists.size()];
            idx = list[task_rng() % list.size()];
        }
        std::vector<ModelParams> phis(picked.size());
        parallel_for(static_cast<int>(picked.size()), cfg.jobs, [&](int t) {
            phis[t] = fit_task(theta, corpus.entries[picked[t]].map, encoder, cfg.inner_iters,
                               cfg.inner_lr);
        });
        // Averaged Reptile direction theta += eps * mean(phi - theta),
        // reduced in fixed task order against the pre-step theta.
        const ModelParams base = theta;
        const float coeff = static_cast<float>(cfg.outer_step) /
                            static_cast<float>(picked.size());
        for (const auto& phi : phis) accumulate_direction(theta, base, phi, coeff);
    }
    return theta;
}

double adapt_psnr(const ModelParams& init, const GridMap& map, const FourierEncoder& encoder,
                  int iters, double lr) {
    ModelParams adapted = init;
    if (iters > 0) {
        FitOptions opts;
        opts.iters = iters;
        opts.lr = lr;
        fit(adapted, make_map_batch(map, init.config.out_channels), encoder, opts);
    }
    const GridMap rendered = render(adapted, encoder, map.width, map.height);
    return psnr(to_single_channel(rendered), to_single_channel(map));
}

void save_corpus_manifest(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& path_categories) {
    json maps = json::array();
    for (const auto& [map_path, category] : path_categories)
        maps.push_back({{"path", map_path}, {"category", category}});
    json doc;
    doc["maps"] = maps;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

TaskCorpus load_corpus_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("corpus manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("maps") || !doc["maps"].is_array())
        throw ParseError("corpus manifest " + path.string() + ": expected {\"maps\": [...]}");
    TaskCorpus corpus;
    const auto base = path.parent_path();
    for (const auto& item : doc["maps"]) {
        if (!item.is_object() || !item.contains("path") || !item.contains("category"))
            throw ParseError("corpus manifest " + path.string() +
                             ": each entry needs path and category");
        std::filesystem::path map_path = item["path"].get<std::string>();
        if (map_path.is_relative()) map_path = base / map_path;
        TaskCorpus::Entry entry;
        entry.map = load_map(map_path);
        entry.category = item["category"].get<std::string>();
        corpus.entries.push_back(std::move(entry));
    }
    corpus.validate();
    return corpus;
}

}  // namespace fedmap
