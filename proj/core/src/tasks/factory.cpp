#include "hrr/tasks/factory.hpp"

#include <nlohmann/json.hpp>

#include "hrr/errors.hpp"

namespace hrr {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::sudoku:
      return "sudoku";
    case TaskKind::maze:
      return "maze";
    case TaskKind::dde:
      return "dde";
  }
  return "unknown";
}

std::optional<TaskKind> task_from_string(std::string_view name) {
  if (name == "sudoku") return TaskKind::sudoku;
  if (name == "maze") return TaskKind::maze;
  if (name == "dde") return TaskKind::dde;
  return std::nullopt;
}

std::unique_ptr<Task> make_task(TaskKind kind, std::uint64_t seed, Difficulty difficulty) {
  switch (kind) {
    case TaskKind::sudoku:
      return std::make_unique<SudokuTask>(generate_sudoku(seed, difficulty));
    case TaskKind::maze:
      return std::make_unique<MazeTask>(generate_maze(seed));
    case TaskKind::dde:
      return std::make_unique<DdeTask>(generate_dde(seed));
  }
  throw TaskError("unknown task kind");
}

nlohmann::json to_json(const SudokuInstance& inst) {
  return {{"task", "sudoku"}, {"box", inst.box}, {"cells", inst.cells}};
}

nlohmann::json to_json(const MazeInstance& inst) {
  return {{"task", "maze"},         {"rows", inst.rows},   {"cols", inst.cols},
          {"blocked", inst.blocked}, {"start", inst.start}, {"goal", inst.goal}};
}

nlohmann::json to_json(const DdeInstance& inst) {
  return {{"task", "dde"}, {"family", inst.family}, {"theta", inst.theta}, {"x", inst.x}};
}

std::unique_ptr<Task> task_from_json(const nlohmann::json& doc) {
  try {
    const std::string task = doc.at("task").get<std::string>();
    if (task == "sudoku") {
      SudokuInstance inst;
      inst.box = doc.value("box", 3);
      if (doc.at("cells").is_string()) {
        inst = parse_sudoku(doc.at("cells").get<std::string>());
      } else {
        inst.cells = doc.at("cells").get<std::vector<int>>();
      }
      return std::make_unique<SudokuTask>(std::move(inst));
    }
    if (task == "maze") {
      MazeInstance inst;
      inst.rows = doc.at("rows").get<int>();
      inst.cols = doc.at("cols").get<int>();
      inst.blocked = doc.at("blocked").get<std::vector<bool>>();
      inst.start = doc.at("start").get<int>();
      inst.goal = doc.at("goal").get<int>();
      return std::make_unique<MazeTask>(std::move(inst));
    }
    if (task == "dde") {
      DdeInstance inst;
      inst.family = doc.value("family", std::string("linear2"));
      if (inst.family != "linear2") throw TaskError("dde: only the linear2 family is supported");
      inst.theta = doc.at("theta").get<Theta>();
      inst.x = doc.at("x").get<std::array<double, 10>>();
      return std::make_unique<DdeTask>(std::move(inst));
    }
    throw TaskError("unknown task '" + task + "'");
  } catch (const nlohmann::json::exception& e) {
    throw TaskError(std::string("instance: ") + e.what());
  }
}

}  // namespace hrr
