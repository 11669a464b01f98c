// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "life/cli.hpp"

int main(int argc, char** argv) { return life::run_cli(argc, argv, std::cout, std::cerr); }
