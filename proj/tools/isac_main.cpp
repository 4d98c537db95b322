// SPDX-License-Identifier: Apache-2.0

#include "isac/cli.hpp"

int main(int argc, char** argv) { return isac::cli_run(argc, argv); }
