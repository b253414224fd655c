#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "hrr/task.hpp"
#include "hrr/tasks/dde.hpp"
#include "hrr/tasks/maze.hpp"
#include "hrr/tasks/sudoku.hpp"

namespace hrr {

enum class TaskKind { sudoku, maze, dde };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> task_from_string(std::string_view name);

// Deterministic in (kind, seed, difficulty).
std::unique_ptr<Task> make_task(TaskKind kind, std::uint64_t seed,
                                Difficulty difficulty = Difficulty::standard);

// Instance files. Schemas:
//   sudoku: {"task":"sudoku","box":3,"cells":[81 ints, 0 = blank]}
//   maze:   {"task":"maze","rows":R,"cols":C,"blocked":[R*C bools],"start":i,"goal":j}
//   dde:    {"task":"dde","family":"linear2","theta":[a,b],"x":[10 numbers]}
nlohmann::json to_json(const SudokuInstance& inst);
nlohmann::json to_json(const MazeInstance& inst);
nlohmann::json to_json(const DdeInstance& inst);
// Builds the adapter for whichever task the document names.
std::unique_ptr<Task> task_from_json(const nlohmann::json& doc);

}  // namespace hrr
