#include "erl/envs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace erl {

namespace {

void require_spec(const GridSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("grid: empty dimensions");
    if (spec.cells.size() != static_cast<std::size_t>(spec.width) * spec.height)
        throw std::invalid_argument("grid: cell count does not match dimensions");
    if (!(spec.slip_prob >= 0.0 && spec.slip_prob < 1.0))
        throw std::invalid_argument("grid: slip probability must be in [0,1)");
    bool any_free = false;
    for (const auto& c : spec.cells)
        if (c.kind != CellKind::wall) any_free = true;
    if (!any_free) throw std::invalid_argument("grid: no free cells");
}

constexpr int kRowDelta[kNumGridActions] = {-1, 1, 0, 0};
constexpr int kColDelta[kNumGridActions] = {0, 0, -1, 1};
// Lateral slip directions per action.
constexpr int kLateral[kNumGridActions][2] = {{kLeft, kRight}, {kLeft, kRight},
                                              {kUp, kDown},    {kUp, kDown}};

}  // namespace

std::vector<int> free_cell_indices(const GridSpec& spec) {
    std::vector<int> out;
    for (int i = 0; i < spec.width * spec.height; ++i)
        if (spec.cells[i].kind != CellKind::wall) out.push_back(i);
    return out;
}

int state_at(const GridSpec& spec, int row, int col) {
    if (!spec.walkable(row, col)) return -1;
    int state = 0;
    for (int i = 0; i < row * spec.width + col; ++i)
        if (spec.cells[i].kind != CellKind::wall) ++state;
    return state;
}

Task grid_to_task(const GridSpec& spec, double gamma, double beta,
                  const std::optional<PolicyTable>& prior) {
    require_spec(spec);

    std::vector<int> cells = free_cell_indices(spec);
    const int ns = static_cast<int>(cells.size());
    const int na = kNumGridActions;

    std::vector<int> cell_to_state(static_cast<std::size_t>(spec.width) * spec.height, -1);
    for (int s = 0; s < ns; ++s) cell_to_state[cells[s]] = s;

    Task task;
    task.dynamics = TabularDynamics(ns, na);
    task.reward = RewardTable(ns, na);
    task.gamma = gamma;
    task.beta = beta;
    task.prior = prior ? *prior : uniform_prior(ns, na);
    if (task.prior.num_states() != ns || task.prior.num_actions() != na)
        throw std::invalid_argument("grid_to_task: prior shape mismatch");

    auto move_target = [&](int row, int col, int dir) {
        int nr = row + kRowDelta[dir];
        int nc = col + kColDelta[dir];
        if (!spec.walkable(nr, nc)) return cell_to_state[row * spec.width + col];
        return cell_to_state[nr * spec.width + nc];
    };

    for (int s = 0; s < ns; ++s) {
        int row = cells[s] / spec.width;
        int col = cells[s] % spec.width;
        bool is_goal = spec.cells[cells[s]].kind == CellKind::goal;
        for (int a = 0; a < na; ++a) {
            if (is_goal) {
                task.dynamics.transition(s, a, s) = 1.0;
                continue;
            }
            task.dynamics.transition(s, a, move_target(row, col, a)) += 1.0 - spec.slip_prob;
            if (spec.slip_prob > 0.0) {
                for (int lat : kLateral[a])
                    task.dynamics.transition(s, a, move_target(row, col, lat)) +=
                        spec.slip_prob / 2.0;
            }
        }
        for (int a = 0; a < na; ++a) {
            auto r = task.reward.values.row(s, a);
            if (is_goal) continue;  // absorbing self-loops pay nothing
            for (int sp = 0; sp < ns; ++sp) {
                const auto& target = spec.cells[cells[sp]];
                r[sp] = target.kind == CellKind::goal ? target.reward : spec.step_reward;
            }
        }
    }
    return task;
}

bool goals_reachable(const GridSpec& spec) {
    require_spec(spec);
    // Backward BFS from the goal cells over walkable neighbors.
    std::vector<char> seen(spec.cells.size(), 0);
    std::deque<int> frontier;
    bool has_goal = false;
    for (std::size_t i = 0; i < spec.cells.size(); ++i)
        if (spec.cells[i].kind == CellKind::goal) {
            seen[i] = 1;
            frontier.push_back(static_cast<int>(i));
            has_goal = true;
        }
    if (!has_goal) return false;
    while (!frontier.empty()) {
        int i = frontier.front();
        frontier.pop_front();
        int row = i / spec.width;
        int col = i % spec.width;
        for (int d = 0; d < kNumGridActions; ++d) {
            int nr = row + kRowDelta[d];
            int nc = col + kColDelta[d];
            if (!spec.walkable(nr, nc)) continue;
            int j = nr * spec.width + nc;
            if (!seen[j] && spec.cells[j].kind != CellKind::goal) {
                seen[j] = 1;
                frontier.push_back(j);
            }
        }
    }
    for (std::size_t i = 0; i < spec.cells.size(); ++i)
        if (spec.cells[i].kind != CellKind::wall && !seen[i]) return false;
    return true;
}

GridSpec simple_wall_maze(int size, int wall_height, GoalSide goal) {
    if (size < 5 || size % 2 == 0)
        throw std::invalid_argument("simple_wall_maze: size must be odd and >= 5");
    if (wall_height < 1 || wall_height > size - 2)
        throw std::invalid_argument("simple_wall_maze: wall height out of range");

    GridSpec spec;
    spec.width = size;
    spec.height = size;
    spec.cells.assign(static_cast<std::size_t>(size) * size, {});

    int mid = size / 2;
    for (int row = size - 1 - wall_height; row <= size - 2; ++row)
        spec.cell(row, mid).kind = CellKind::wall;

    spec.cell(0, mid).kind = CellKind::start;

    auto& left = spec.cell(size - 1, 0);
    auto& right = spec.cell(size - 1, size - 1);
    left.kind = CellKind::goal;
    right.kind = CellKind::goal;
    left.reward = goal == GoalSide::left ? spec.goal_reward : 0.0;
    right.reward = goal == GoalSide::right ? spec.goal_reward : 0.0;
    return spec;
}

std::pair<GridSpec, GridSpec> spiral_maze(int size) {
    if (size < 7) throw std::invalid_argument("spiral_maze: size must be >= 7");

    GridSpec base;
    base.width = size;
    base.height = size;
    base.cells.assign(static_cast<std::size_t>(size) * size, {});

    // Concentric wall rings at odd offsets with one corridor gap per ring.
    // The outermost gap opens onto the top border so neither goal wall is
    // forced on the way out; inner gaps alternate sides.
    int ring = 0;
    for (int d = 1; 2 * d < size - 1; d += 2, ++ring) {
        for (int row = d; row <= size - 1 - d; ++row)
            for (int col = d; col <= size - 1 - d; ++col) {
                int offset = std::min(std::min(row, col), std::min(size - 1 - row, size - 1 - col));
                if (offset == d) base.cell(row, col).kind = CellKind::wall;
            }
        if (ring % 2 == 0)
            base.cell(d, size - 2 - d).kind = CellKind::free_cell;  // top gap
        else
            base.cell(size - 1 - d, d + 1).kind = CellKind::free_cell;  // bottom gap
    }

    // Staging pocket beside the bottom-left corner: the corner, where both
    // goal walls meet, must stay enterable from ordinary corridor cells once
    // the walls absorb. Two ring cells open a path from the first interior
    // corridor down to the pocket.
    base.cell(size - 3, 1).kind = CellKind::free_cell;
    base.cell(size - 2, 1).kind = CellKind::free_cell;

    if (base.cell(size / 2, size / 2).kind == CellKind::free_cell)
        base.cell(size / 2, size / 2).kind = CellKind::start;

    // Both subtasks absorb on the union of the two goal walls; the reward
    // marks only the subtask's own wall, so the pair shares its dynamics.
    // The pocket cells (size-2, 0) and (size-1, 1) stay free, keeping the
    // corner reachable.
    for (int row = 0; row < size - 2; ++row) base.cell(row, 0).kind = CellKind::goal;
    for (int col = 2; col < size; ++col) base.cell(size - 1, col).kind = CellKind::goal;
    base.cell(size - 1, 0).kind = CellKind::goal;

    GridSpec left = base;
    GridSpec down = base;
    for (int row = 0; row < size - 2; ++row) left.cell(row, 0).reward = left.goal_reward;
    left.cell(size - 1, 0).reward = left.goal_reward;
    for (int col = 2; col < size; ++col) down.cell(size - 1, col).reward = down.goal_reward;
    down.cell(size - 1, 0).reward = down.goal_reward;
    return {std::move(left), std::move(down)};
}

GridSpec parse_grid(std::string_view text) {
    GridSpec spec;
    std::vector<std::string> rows;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty()) rows.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) rows.push_back(current);
    if (rows.empty()) throw std::invalid_argument("parse_grid: empty input");

    spec.height = static_cast<int>(rows.size());
    spec.width = static_cast<int>(rows.front().size());
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != spec.width)
            throw std::invalid_argument("parse_grid: ragged rows");

    for (const auto& row : rows)
        for (char c : row) {
            GridSpec::Cell cell;
            switch (c) {
                case '#': cell.kind = CellKind::wall; break;
                case '.': cell.kind = CellKind::free_cell; break;
                case 'S': cell.kind = CellKind::start; break;
                case 'G':
                    cell.kind = CellKind::goal;
                    cell.reward = spec.goal_reward;
                    break;
                default:
                    throw std::invalid_argument(std::string("parse_grid: unknown character '") +
                                                c + "'");
            }
            spec.cells.push_back(cell);
        }
    require_spec(spec);
    return spec;
}

std::string grid_to_text(const GridSpec& spec) {
    std::string out;
    for (int row = 0; row < spec.height; ++row) {
        for (int col = 0; col < spec.width; ++col) {
            switch (spec.cell(row, col).kind) {
                case CellKind::wall: out.push_back('#'); break;
                case CellKind::free_cell: out.push_back('.'); break;
                case CellKind::start: out.push_back('S'); break;
                case CellKind::goal: out.push_back('G'); break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace erl
