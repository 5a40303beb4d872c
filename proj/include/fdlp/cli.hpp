// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// cli.hpp

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdlp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;

// Runs one `fdlp` invocation; args[0] is the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv);

}  // namespace fdlp
