#include "fedmap/planning.hpp"

#include "fedmap/common.hpp"
#include "fedmap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace fedmap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double octile(Cell a, Cell b) {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    return (dx + dy) + (kSqrt2 - 2.0) * std::min(dx, dy);
}

struct OpenEntry {
    double f;
    double h;
    std::int64_t id;
    double g;
};

struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        return a.id > b.id;
    }
};

}  // namespace

PathResult astar(const OccupancyGrid& occ, Cell start, Cell goal, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw ValidationError("astar: connectivity must be 4 or 8");
    if (!occ.in_bounds(start.y, start.x) || !occ.in_bounds(goal.y, goal.x))
        throw ValidationError("astar: start or goal out of bounds");

    PathResult result;
    if (!occ.at(start.y, start.x) || !occ.at(goal.y, goal.x)) return result;
    if (start == goal) {
        result.found = true;
        result.cells = {start};
        result.cost = 0.0;
        return result;
    }

    const int w = occ.width;
    const std::int64_t n = static_cast<std::int64_t>(w) * occ.height;
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);
    auto id_of = [w](Cell c) { return static_cast<std::int64_t>(c.y) * w + c.x; };

    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    const std::int64_t start_id = id_of(start);
    const std::int64_t goal_id = id_of(goal);
    g[start_id] = 0.0;
    open.push({octile(start, goal), octile(start, goal), start_id, 0.0});

    static constexpr int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int moves = connectivity == 8 ? 8 : 4;

    while (!open.empty()) {
        const OpenEntry cur = open.top();
        open.pop();
        if (closed[cur.id]) continue;  // stale duplicate
        if (cur.g != g[cur.id]) continue;
        closed[cur.id] = 1;
        if (cur.id == goal_id) break;

        const Cell c{static_cast<int>(cur.id % w), static_cast<int>(cur.id / w)};
        for (int m = 0; m < moves; ++m) {
            const Cell nb{c.x + dx8[m], c.y + dy8[m]};
            if (!occ.in_bounds(nb.y, nb.x) || !occ.at(nb.y, nb.x)) continue;
            const std::int64_t nb_id = id_of(nb);
            if (closed[nb_id]) continue;
            const double step = m < 4 ? 1.0 : kSqrt2;
            const double cand = g[cur.id] + step;
            if (cand < g[nb_id]) {
                g[nb_id] = cand;
                parent[nb_id] = cur.id;
                const double h = octile(nb, goal);
                open.push({cand + h, h, nb_id, cand});
            }
        }
    }

    if (!closed[goal_id]) return result;
    result.found = true;
    result.cost = g[goal_id];
    for (std::int64_t id = goal_id; id != -1; id = parent[id])
        result.cells.push_back({static_cast<int>(id % w), static_cast<int>(id / w)});
    std::reverse(result.cells.begin(), result.cells.end());
    return result;
}

bool validate_path(const OccupancyGrid& occ, const PathResult& path, Cell start, Cell goal,
                   int connectivity) {
    if (!path.found) return true;
    if (path.cells.empty()) return false;
    if (!(path.cells.front() == start) || !(path.cells.back() == goal)) return false;
    double cost = 0.0;
    for (std::size_t i = 0; i < path.cells.size(); ++i) {
        const Cell c = path.cells[i];
        if (!occ.in_bounds(c.y, c.x) || !occ.at(c.y, c.x)) return false;
        if (i == 0) continue;
        const int dx = std::abs(c.x - path.cells[i - 1].x);
        const int dy = std::abs(c.y - path.cells[i - 1].y);
        if (dx > 1 || dy > 1 || (dx == 0 && dy == 0)) return false;
        if (connectivity == 4 && dx + dy != 1) return false;
        cost += (dx + dy == 2) ? kSqrt2 : 1.0;
    }
    return std::abs(cost - path.cost) <= 1e-9 * std::max(1.0, path.cost);
}

std::vector<Route> sample_routes(const OccupancyGrid& gt_occ, int n, std::uint64_t seed) {
    if (n < 0) throw ValidationError("sample_routes: n must be >= 0");
    std::vector<std::int64_t> traversable_ids;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(gt_occ.traversable.size()); ++i)
        if (gt_occ.traversable[i]) traversable_ids.push_back(i);
    if (traversable_ids.size() < 2)
        throw ValidationError("sample_routes: fewer than 2 traversable cells");

    const double min_separation =
        0.1 * std::hypot(static_cast<double>(gt_occ.width), static_cast<double>(gt_occ.height));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, traversable_ids.size() - 1);
    auto cell_of = [&gt_occ](std::int64_t id) {
        return Cell{static_cast<int>(id % gt_occ.width), static_cast<int>(id / gt_occ.width)};
    };

    std::vector<Route> routes;
    routes.reserve(n);
    const std::int64_t max_attempts = 100LL * std::max(1, n);
    std::int64_t attempts = 0;
    while (static_cast<int>(routes.size()) < n) {
        if (attempts >= max_attempts)
            throw ValidationError("sample_routes: attempt cap " + std::to_string(max_attempts) +
                                  " exceeded with " + std::to_string(routes.size()) + " of " +
                                  std::to_string(n) + " routes sampled");
        ++attempts;
        const Cell start = cell_of(traversable_ids[pick(rng)]);
        const Cell goal = cell_of(traversable_ids[pick(rng)]);
        const double dist = std::hypot(static_cast<double>(start.x - goal.x),
                                       static_cast<double>(start.y - goal.y));
        if (dist < min_separation) continue;
        if (!astar(gt_occ, start, goal).found) continue;
        routes.push_back({start, goal});
    }
    return routes;
}

PathEvaluation path_metrics(const OccupancyGrid& gt_occ, const OccupancyGrid& learned_occ,
                            const std::vector<Route>& routes, int jobs) {
    if (gt_occ.width != learned_occ.width || gt_occ.height != learned_occ.height)
        throw ShapeError("path_metrics: grid dimensions differ");

    PathEvaluation eval;
    eval.outcomes.resize(routes.size());
    parallel_for(static_cast<int>(routes.size()), jobs, [&](int i) {
        const Route& route = routes[i];
        RouteOutcome out;
        out.route_id = i;
        const PathResult learned = astar(learned_occ, route.start, route.goal);
        const PathResult gt = astar(gt_occ, route.start, route.goal);
        out.cost_gt = gt.found ? gt.cost : -1.0;
        out.found = learned.found;
        if (learned.found) {
            out.cost_learned = learned.cost;
            out.gt_valid = true;
            for (const Cell& c : learned.cells)
                if (!gt_occ.at(c.y, c.x)) {
                    out.gt_valid = false;
                    break;
                }
        } else {
            out.cost_learned = -1.0;
        }
        eval.outcomes[i] = out;
    });

    PlanMetrics& m = eval.metrics;
    for (const auto& out : eval.outcomes) {
        if (out.found && out.gt_valid)
            ++m.tp;
        else if (out.found)
            ++m.fp;
        else
            ++m.fn;
    }
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return eval;
}

}  // namespace fedmap
