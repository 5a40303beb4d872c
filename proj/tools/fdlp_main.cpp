// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// fdlp_main.cpp

#include "fdlp/cli.hpp"

int main(int argc, char** argv) { return fdlp::cli_dispatch(argc, argv); }
