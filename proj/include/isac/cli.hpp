// SPDX-License-Identifier: Apache-2.0
//
// cli.hpp - command-line front end.
//
// Exit codes: 0 success, 1 solver failure, 2 configuration/usage error.

#pragma once

namespace isac {

int cli_run(int argc, const char* const* argv);

} // namespace isac
