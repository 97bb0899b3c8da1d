// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include "attrib/cli.hpp"

int main(int argc, char** argv) { return attrib::cli::run(argc, argv); }
