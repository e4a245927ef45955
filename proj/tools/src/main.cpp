// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "synthforge/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return synthforge::cli::run_cli(args, std::cout, std::cerr);
}
