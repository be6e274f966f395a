// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "eigv/cli/run.hpp"

int main(int argc, char** argv) { return eigv::cli::run(argc, argv, std::cout, std::cerr); }
