#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ottoforge/runner.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  long long seed = -1;
  std::string machine;
  std::string qubit_list;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool many_qubit) {
  cmd->add_option("--config", args.config, "scenario config file (JSON)")->required();
  cmd->add_option("--out", args.out, "output directory")->required();
  cmd->add_option("--set", args.overrides, "override a config field, dotted path: key.path=value");
  cmd->add_option("--seed", args.seed, "override optimizer.seed");
  if (many_qubit) {
    cmd->add_option("--machine", args.machine, "engine | fridge");
    cmd->add_option("--n", args.qubit_list, "comma-separated qubit counts");
  }
}

int execute(const std::string& task_kind, const CommonArgs& args) {
  std::ifstream in(args.config);
  if (!in) {
    std::cerr << "ottoforge: cannot open config '" << args.config << "'\n";
    return 2;
  }
  ottoforge::Json j;
  try {
    j = ottoforge::Json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "ottoforge: config is not valid JSON: " << e.what() << "\n";
    return 2;
  }

  try {
    j["task"]["kind"] = task_kind;
    if (args.seed >= 0) ottoforge::apply_override(j, "optimizer.seed=" + std::to_string(args.seed));
    if (!args.machine.empty()) ottoforge::apply_override(j, "task.machine=" + args.machine);
    if (!args.qubit_list.empty()) {
      std::string arr = "[";
      for (char c : args.qubit_list) arr += (c == ',') ? ',' : c;
      arr += "]";
      ottoforge::apply_override(j, "task.n=" + arr);
    }
    for (const std::string& ov : args.overrides) ottoforge::apply_override(j, ov);
  } catch (const std::exception& e) {
    std::cerr << "ottoforge: " << e.what() << "\n";
    return 2;
  }

  return ottoforge::run_task(j, args.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ottoforge - fast-driving thermal machine optimization"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {"validate", "optimize", "sweep-period", "contour",
                                          "many-qubit"};
  std::vector<CommonArgs> args(kinds.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(kinds[i], "run the " + kinds[i] + " task");
    add_common(cmd, args[i], kinds[i] == "many-qubit");
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (cmds[i]->parsed()) return execute(kinds[i], args[i]);
  }
  return 1;
}
