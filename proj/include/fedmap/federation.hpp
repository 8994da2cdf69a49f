#pragma once

#include "fedmap/grid_map.hpp"
#include "fedmap/optim.hpp"
#include "fedmap/planning.hpp"
#include "fedmap/refine.hpp"
#include "fedmap/train.hpp"

#include <string>
#include <vector>

namespace fedmap {

struct ClientUpdate {
    int client_id = 0;
    ModelParams params;
    std::int64_t n_k = 0;  // observed-cell count
};

struct ClientState {
    int id = 0;
    Region region;
    ModelParams params;
    std::int64_t n_k = 0;
};

enum class Aggregator : std::uint8_t { FedAvg = 0, FedAdam = 1, FedYogi = 2 };

Aggregator aggregator_from_string(const std::string& s);
std::string aggregator_to_string(Aggregator a);

struct ServerState {
    ModelParams global_params;
    Aggregator aggregator = Aggregator::FedAvg;
    ServerOpts opts;
    // Per-trainable-tensor moments; empty for FedAvg.
    std::vector<VectorF> m;
    std::vector<VectorF> v;
};

ServerState make_server(const ModelParams& global_params, Aggregator aggregator,
                        const ServerOpts& opts = {});

/// Client adopts the broadcast parameters (optimizer state resets), trains
/// `epochs` full-batch iterations on its observed region in the global
/// frame, and returns its parameters with the sample count.
ClientUpdate local_round(ClientState& client, const GridMap& global_map,
                         const FourierEncoder& encoder, const ModelParams& global_params,
                         int epochs, double lr, FitStats* stats = nullptr);

/// Sample-weighted average sum_k (n_k/n) theta_k over trainables and BN
/// running statistics. Updates are summed in ascending client-id order, so
/// the result is bitwise independent of arrival order.
ModelParams fedavg(const std::vector<ClientUpdate>& updates);

/// Adaptive server aggregation: delta = fedavg(updates) - global; moments
/// update Adam-style (FedAdam) or Yogi-style (FedYogi); trainables move by
/// eta*m/(sqrt(v)+tau). Running statistics adopt the weighted average
/// directly (server moments mirror trainables only).
ModelParams fedadam(ServerState& server, const std::vector<ClientUpdate>& updates);
ModelParams fedyogi(ServerState& server, const std::vector<ClientUpdate>& updates);

/// Dispatches on server.aggregator and installs the result as the new
/// global parameters.
ModelParams aggregate(ServerState& server, const std::vector<ClientUpdate>& updates);

struct RoundClientReport {
    int client_id = 0;
    std::size_t uplink_bytes = 0;
    std::size_t downlink_bytes = 0;
};

struct RoundReport {
    int round = 0;
    std::vector<RoundClientReport> clients;
    double psnr = 0.0;  // rendered global map vs ground truth
    double ssim = 0.0;
    double f1 = 0.0;  // planning F1 on the refined global map
};

struct FederationRunConfig {
    int rounds = 1;
    int local_epochs = 100;
    double lr = 1e-4;
    RefineConfig refine;
    int n_routes = 75;
    std::uint64_t route_seed = 0;
    int jobs = 1;
};

struct World {
    GridMap global_map;
    FourierEncoder encoder;
    std::vector<ClientState> clients;
};

/// Builds clients over a partition of the global map; every region cell
/// counts as observed.
World make_world(GridMap global_map, const FourierEncoder& encoder,
                 const ModelParams& initial_params, int n_agents,
                 PartitionLayout layout = PartitionLayout::Grid);

/// Runs R communication rounds: concurrent client rounds, fixed-order
/// aggregation, broadcast, then metrics against the ground-truth map.
/// Byte counts come from actual fp16 container sizes.
std::pair<ModelParams, std::vector<RoundReport>> run_rounds(World& world, ServerState& server,
                                                            const FederationRunConfig& cfg);

struct BandwidthRow {
    std::string format;
    int width = 0;
    int height = 0;
    int bytes_per_cell = 0;
    std::size_t raw_bytes = 0;
    std::size_t model_bytes = 0;
    double reduction_pct = 0.0;
    std::string note;
};

/// Raw-map formats versus the transmitted model payload:
/// grayscale 2000x2000 @1 B/cell, OMG 400^2/600^2 @6 B/cell,
/// CCM 400^2/600^2 @18 B/cell. Reductions computed from exact bytes.
std::vector<BandwidthRow> bandwidth_report(std::size_t model_bytes);

}  // namespace fedmap
