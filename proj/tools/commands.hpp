#pragma once

#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "cli_common.hpp"

namespace cli {

struct Command {
  CLI::App* app = nullptr;
  std::function<void(Run&)> action;
};

void add_levelset(CLI::App& root, std::vector<Command>& commands);
void add_zeta(CLI::App& root, std::vector<Command>& commands);
void add_lemmas(CLI::App& root, std::vector<Command>& commands);

}  // namespace cli
