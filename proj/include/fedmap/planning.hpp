#pragma once

#include "fedmap/grid_map.hpp"

#include <cstdint>
#include <vector>

namespace fedmap {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

struct Route {
    Cell start;
    Cell goal;
};

struct PathResult {
    bool found = false;
    std::vector<Cell> cells;  // start..goal when found
    double cost = 0.0;
};

struct PlanMetrics {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Optimal grid path under unit straight / sqrt(2) diagonal step costs with
/// the octile-distance heuristic. Ties break deterministically on
/// (f, h, cell index). Out-of-bounds endpoints throw; non-traversable
/// endpoints report found=false.
PathResult astar(const OccupancyGrid& occ, Cell start, Cell goal, int connectivity = 8);

/// Checks PathResult invariants: consecutive cells adjacent under the given
/// connectivity, all cells traversable, endpoints match, cost consistent
/// with the step sequence.
bool validate_path(const OccupancyGrid& occ, const PathResult& path, Cell start, Cell goal,
                   int connectivity = 8);

/// Samples n routes with traversable, reachable endpoints separated by at
/// least 10% of the map diagonal. Throws after 100*n failed attempts,
/// reporting how many routes were achieved.
std::vector<Route> sample_routes(const OccupancyGrid& gt_occ, int n, std::uint64_t seed);

struct RouteOutcome {
    int route_id = 0;
    bool found = false;
    bool gt_valid = false;  // found and every cell traversable in ground truth
    double cost_learned = 0.0;
    double cost_gt = 0.0;
};

struct PathEvaluation {
    PlanMetrics metrics;
    std::vector<RouteOutcome> outcomes;
};

/// Plans every route on the learned grid: TP when the path exists and stays
/// traversable in ground truth, FP when it crosses non-traversable ground
/// truth, FN when no path is found. `jobs` bounds planning parallelism;
/// results are index-ordered and independent of scheduling.
PathEvaluation path_metrics(const OccupancyGrid& gt_occ, const OccupancyGrid& learned_occ,
                            const std::vector<Route>& routes, int jobs = 1);

}  // namespace fedmap
