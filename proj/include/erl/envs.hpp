#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erl/task.hpp"

namespace erl {

enum class CellKind { free_cell, wall, goal, start };

enum class GoalSide { left, right };

/// Rectangular grid description of a navigation task. Goal cells are
/// absorbing; entering one pays that cell's reward.
struct GridSpec {
    struct Cell {
        CellKind kind = CellKind::free_cell;
        double reward = 0.0;  // paid on entering; goals only
    };

    int width = 0;
    int height = 0;
    std::vector<Cell> cells;  // row-major
    double slip_prob = 0.0;
    double step_reward = 0.0;
    double goal_reward = 1.0;  // default reward for parsed goal cells

    Cell& cell(int row, int col) { return cells[static_cast<std::size_t>(row) * width + col]; }
    const Cell& cell(int row, int col) const {
        return cells[static_cast<std::size_t>(row) * width + col];
    }
    bool walkable(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width &&
               cell(row, col).kind != CellKind::wall;
    }
};

/// Grid actions, also the task's action indices.
enum GridAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kNumGridActions = 4;

/// Cell index (row-major) of each task state, in state order.
std::vector<int> free_cell_indices(const GridSpec& spec);

/// State index of a walkable cell, or -1.
int state_at(const GridSpec& spec, int row, int col);

/// Encodes the grid as a task: states are the non-wall cells, the intended
/// move succeeds with probability 1 - slip_prob with lateral slips sharing
/// the rest, blocked moves stay put, goal cells self-loop with reward zero.
Task grid_to_task(const GridSpec& spec, double gamma, double beta,
                  const std::optional<PolicyTable>& prior = std::nullopt);

/// True when some goal cell is reachable from every non-goal cell.
bool goals_reachable(const GridSpec& spec);

/// Square maze with a central vertical wall rising from one unit above the
/// bottom row. Both bottom corners are absorbing; only the requested side
/// pays a reward, so the left/right pair is reward varying.
GridSpec simple_wall_maze(int size, int wall_height, GoalSide goal);

/// Spiral corridor maze with one gap per wall ring. Returns the reward-varying
/// subtask pair: reach the left wall / reach the bottom wall. All wall-adjacent
/// border goals are absorbing in both specs; each spec pays only its own side.
std::pair<GridSpec, GridSpec> spiral_maze(int size);

/// Parses '#' wall, '.' free, 'G' goal, 'S' start; rows separated by newlines.
GridSpec parse_grid(std::string_view text);

/// Renders the spec back to the parse_grid character form.
std::string grid_to_text(const GridSpec& spec);

}  // namespace erl
