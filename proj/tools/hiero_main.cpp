// Copyright 2026 The HieroAQA Authors
// SPDX-License-Identifier: Apache-2.0

#include "hiero/cli.hpp"

int main(int argc, char** argv) { return hiero::cli::run(argc, argv); }
