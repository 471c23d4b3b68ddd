//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "fgc/cli.hpp"

int main(int argc, char **argv) {
  return fgc::cli::cli_main(argc, argv, std::cout, std::cerr);
}
