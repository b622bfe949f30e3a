#include "minent/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace minent {

namespace {

constexpr int kMaxSweeps = 100000;
constexpr double kFixedPointTol = 1e-12;

std::string cell_str(Cell c) {
    return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
}

bool in_grid(const GridWorldSpec& spec, Cell c) {
    return c.x >= 0 && c.x < spec.width && c.y >= 0 && c.y < spec.height;
}

bool is_wall(const GridWorldSpec& spec, Cell c) {
    return std::find(spec.walls.begin(), spec.walls.end(), c) != spec.walls.end();
}

Cell shifted(Cell c, Move m) {
    switch (m) {
        case Move::up: return {c.x, c.y + 1};
        case Move::down: return {c.x, c.y - 1};
        case Move::left: return {c.x - 1, c.y};
        case Move::right: return {c.x + 1, c.y};
        case Move::stay: return c;
    }
    return c;
}

// Lateral (perpendicular) neighbors of a directed move; slip mass goes there.
std::pair<Move, Move> lateral(Move m) {
    if (m == Move::up || m == Move::down) return {Move::left, Move::right};
    return {Move::up, Move::down};
}

struct Geometry {
    std::vector<Cell> cells;       // open cells ascending by (y, x)
    std::map<Cell, int> index_of;  // open-cell index
};

Geometry open_cells(const GridWorldSpec& spec) {
    Geometry geo;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            Cell c{x, y};
            if (!is_wall(spec, c)) {
                geo.index_of[c] = static_cast<int>(geo.cells.size());
                geo.cells.push_back(c);
            }
        }
    }
    return geo;
}

// Destination of an attempted step; bumping into a wall or the boundary
// keeps the robot in place.
Cell resolve(const GridWorldSpec& spec, Cell from, Move m) {
    Cell to = shifted(from, m);
    if (!in_grid(spec, to) || is_wall(spec, to)) return from;
    return to;
}

// Slip-dynamics outcome distribution of choosing `m` in `from`, merged by
// destination cell. The stay move is slip-free.
std::vector<std::pair<Cell, double>> move_outcomes(const GridWorldSpec& spec, Cell from,
                                                   Move m) {
    std::vector<std::pair<Cell, double>> outcomes;
    auto add = [&](Cell c, double p) {
        for (auto& [cell, mass] : outcomes) {
            if (cell == c) {
                mass += p;
                return;
            }
        }
        outcomes.emplace_back(c, p);
    };
    if (m == Move::stay) {
        add(from, 1.0);
        return outcomes;
    }
    add(resolve(spec, from, m), 1.0 - spec.slip_prob);
    auto [lat1, lat2] = lateral(m);
    add(resolve(spec, from, lat1), spec.slip_prob / 2.0);
    add(resolve(spec, from, lat2), spec.slip_prob / 2.0);

    // Pin the total to exactly 1 so compiled columns are stochastic to the
    // last bit.
    double total = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        total += outcomes[i].second;
        if (outcomes[i].second > outcomes[largest].second) largest = i;
    }
    outcomes[largest].second += 1.0 - total;
    return outcomes;
}

void validate(const GridWorldSpec& spec) {
    if (spec.width < 1 || spec.height < 1) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    for (Cell w : spec.walls) {
        if (!in_grid(spec, w)) {
            throw std::invalid_argument("wall cell " + cell_str(w) + " is outside the grid");
        }
    }
    if (spec.robot_types.empty()) throw std::invalid_argument("at least one robot type required");
    for (std::size_t i = 0; i < spec.robot_types.size(); ++i) {
        const RobotType& rt = spec.robot_types[i];
        for (auto [cell, what] : {std::pair{rt.start, "start"}, std::pair{rt.goal, "goal"}}) {
            if (!in_grid(spec, cell)) {
                throw std::invalid_argument("type " + std::to_string(i + 1) + " " + what +
                                            " cell " + cell_str(cell) + " is outside the grid");
            }
            if (is_wall(spec, cell)) {
                throw std::invalid_argument("type " + std::to_string(i + 1) + " " + what +
                                            " cell " + cell_str(cell) + " is a wall");
            }
        }
    }
    if (spec.sensors.empty()) throw std::invalid_argument("at least one sensor required");
    for (const Sensor& s : spec.sensors) {
        if (s.cells.empty()) {
            throw std::invalid_argument("sensor '" + s.id + "' covers no cells");
        }
        for (Cell c : s.cells) {
            if (!in_grid(spec, c)) {
                throw std::invalid_argument("sensor '" + s.id + "' cell " + cell_str(c) +
                                            " is outside the grid");
            }
        }
    }
    if (spec.detection_prob < 0.0 || spec.detection_prob > 1.0) {
        throw std::invalid_argument("detection_prob must lie in [0, 1]");
    }
    if (spec.slip_prob < 0.0 || spec.slip_prob >= 1.0) {
        throw std::invalid_argument("slip_prob must lie in [0, 1)");
    }
    if (spec.type_prior.size() != spec.robot_types.size()) {
        throw std::invalid_argument("type_prior length must match the number of robot types");
    }
    double prior_sum = 0.0;
    for (double p : spec.type_prior) {
        if (p < 0.0) throw std::invalid_argument("type_prior entries must be non-negative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-12) {
        throw std::invalid_argument("type_prior must sum to 1");
    }
}

}  // namespace

RobotPlan robot_policy(const GridWorldSpec& spec, int type) {
    validate(spec);
    if (type < 0 || type >= static_cast<int>(spec.robot_types.size())) {
        throw std::domain_error("robot type index " + std::to_string(type) + " out of range");
    }
    Geometry geo = open_cells(spec);
    const int goal = geo.index_of.at(spec.robot_types[type].goal);
    const int n = static_cast<int>(geo.cells.size());
    constexpr Move kMoves[] = {Move::up, Move::down, Move::left, Move::right, Move::stay};

    // Max-reachability fixed point: value = probability of eventually
    // hitting the absorbing goal.
    std::vector<double> value(n, 0.0);
    value[goal] = 1.0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double delta = 0.0;
        for (int c = 0; c < n; ++c) {
            if (c == goal) continue;
            double best = 0.0;
            for (Move m : kMoves) {
                double v = 0.0;
                for (auto [dest, p] : move_outcomes(spec, geo.cells[c], m)) {
                    v += p * value[geo.index_of.at(dest)];
                }
                best = std::max(best, v);
            }
            delta = std::max(delta, std::abs(best - value[c]));
            value[c] = best;
        }
        if (delta < kFixedPointTol) break;
    }

    RobotPlan plan;
    plan.cells = geo.cells;
    plan.reach_probs = value;
    plan.moves.assign(n, Move::stay);
    for (int c = 0; c < n; ++c) {
        if (c == goal) continue;  // absorbing
        double best = -1.0;
        for (Move m : kMoves) {
            double v = 0.0;
            for (auto [dest, p] : move_outcomes(spec, geo.cells[c], m)) {
                v += p * value[geo.index_of.at(dest)];
            }
            if (v > best) {
                best = v;
                plan.moves[c] = m;
            }
        }
    }

    if (value[geo.index_of.at(spec.robot_types[type].start)] <= 0.0) {
        throw std::invalid_argument("goal of type " + std::to_string(type + 1) +
                                    " is unreachable from its start");
    }
    return plan;
}

int CompiledEnvironment::state_id(int type, Cell cell) const {
    for (std::size_t i = 0; i < state_type.size(); ++i) {
        if (state_type[i] == type && state_cell[i] == cell) return static_cast<int>(i);
    }
    throw std::domain_error("no state for type " + std::to_string(type + 1) + " at " +
                            std::to_string(cell.x) + "," + std::to_string(cell.y));
}

CompiledEnvironment compile(const GridWorldSpec& spec) {
    validate(spec);
    Geometry geo = open_cells(spec);
    const int cells = static_cast<int>(geo.cells.size());
    const int types = static_cast<int>(spec.robot_types.size());
    const int n = types * cells;

    std::vector<std::string> observations;
    std::vector<std::string> actions;
    for (const Sensor& s : spec.sensors) {
        observations.push_back(s.id);
        actions.push_back("query_" + s.id);
    }
    observations.push_back("n");

    Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
    for (int type = 0; type < types; ++type) {
        RobotPlan plan = robot_policy(spec, type);
        for (int c = 0; c < cells; ++c) {
            int from = type * cells + c;
            for (auto [dest, p] : move_outcomes(spec, geo.cells[c], plan.moves[c])) {
                transition(type * cells + geo.index_of.at(dest), from) += p;
            }
        }
    }

    std::vector<Eigen::MatrixXd> emissions;
    const int null_obs = static_cast<int>(spec.sensors.size());
    for (std::size_t sensor = 0; sensor < spec.sensors.size(); ++sensor) {
        Eigen::MatrixXd emis = Eigen::MatrixXd::Zero(null_obs + 1, n);
        for (int type = 0; type < types; ++type) {
            for (int c = 0; c < cells; ++c) {
                int state = type * cells + c;
                bool covered =
                    std::find(spec.sensors[sensor].cells.begin(),
                              spec.sensors[sensor].cells.end(),
                              geo.cells[c]) != spec.sensors[sensor].cells.end();
                if (covered) {
                    emis(static_cast<int>(sensor), state) = spec.detection_prob;
                    emis(null_obs, state) = 1.0 - spec.detection_prob;
                } else {
                    emis(null_obs, state) = 1.0;
                }
            }
        }
        emissions.push_back(std::move(emis));
    }

    Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(n);
    for (int type = 0; type < types; ++type) {
        mu0(type * cells + geo.index_of.at(spec.robot_types[type].start)) =
            spec.type_prior[type];
    }

    CompiledEnvironment env{
        Hmm(std::move(observations), std::move(actions), std::move(transition),
            std::move(emissions), std::move(mu0)),
        {},
        {}};
    env.state_type.reserve(n);
    env.state_cell.reserve(n);
    for (int type = 0; type < types; ++type) {
        for (int c = 0; c < cells; ++c) {
            env.state_type.push_back(type);
            env.state_cell.push_back(geo.cells[c]);
        }
    }
    return env;
}

GridWorldSpec bundled_environment() {
    GridWorldSpec spec;
    spec.width = 6;
    spec.height = 4;
    spec.slip_prob = 0.2;
    spec.detection_prob = 0.9;
    spec.robot_types = {
        {{0, 3}, {5, 0}},  // type 1: top-left corner toward bottom-right
        {{3, 0}, {0, 2}},  // type 2: bottom-middle toward the left edge
        {{5, 2}, {1, 3}},  // type 3: right edge toward the top-left
    };
    spec.type_prior = {0.1, 0.4, 0.5};
    spec.sensors = {
        {"1", {{0, 3}, {1, 3}, {0, 2}}},          // type 1 start region
        {"2", {{3, 0}, {2, 0}, {3, 1}}},          // type 2 start region
        {"3", {{5, 2}, {5, 1}, {4, 2}}},          // type 3 start region
        {"4", {{2, 2}, {3, 2}, {2, 3}, {3, 3}}},  // central corridor
        {"5", {{4, 0}, {5, 0}, {4, 1}}},          // bottom-right corner
    };
    return spec;
}

}  // namespace minent
