#pragma once

#include <string>
#include <vector>

#include "minent/hmm.hpp"

namespace minent {

/// Grid cell. x grows rightward in [0, width), y grows upward in [0, height).
struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
    auto operator<=>(const Cell&) const = default;
};

struct RobotType {
    Cell start;
    Cell goal;
};

struct Sensor {
    std::string id;
    std::vector<Cell> cells;
};

/// Declarative surveillance environment: one robot of unknown type moves
/// through a grid toward its goal while an observer queries one sensor per
/// step. Compiles into a controllable-emission HMM whose initial state
/// encodes the robot type.
struct GridWorldSpec {
    int width = 0;
    int height = 0;
    std::vector<Cell> walls;
    std::vector<RobotType> robot_types;
    double slip_prob = 0.2;
    std::vector<Sensor> sensors;
    double detection_prob = 0.9;
    std::vector<double> type_prior;
};

enum class Move { up, down, left, right, stay };

/// Deterministic per-cell move choice maximizing the probability of
/// eventually reaching the type's goal under the slip dynamics, with the
/// goal absorbing. Ties break in the order up, down, left, right, stay.
struct RobotPlan {
    std::vector<Cell> cells;            // open cells, ascending (y, x)
    std::vector<Move> moves;            // per open cell
    std::vector<double> reach_probs;    // fixed-point values per open cell
};

RobotPlan robot_policy(const GridWorldSpec& spec, int type);

struct CompiledEnvironment {
    Hmm hmm;
    std::vector<int> state_type;   // per HMM state
    std::vector<Cell> state_cell;  // per HMM state

    int state_id(int type, Cell cell) const;
};

/// Builds the product HMM over (type, cell) states. The motion kernel is
/// block-diagonal by type; querying sensor i reports "i" with
/// detection_prob when the robot is covered and "n" otherwise.
/// Invariant violations surface as std::invalid_argument naming the cell.
CompiledEnvironment compile(const GridWorldSpec& spec);

/// The bundled 6x4 three-robot reproduction environment (slip 0.2,
/// detection 0.9, prior 0.1/0.4/0.5, five sensors). Sensor ranges and goal
/// cells are this project's reconstruction; data/gridworld_6x4.json holds
/// the same spec as a file.
GridWorldSpec bundled_environment();

}  // namespace minent
