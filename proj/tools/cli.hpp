// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace cpir::cli {

enum ExitCode : int {
    kOk = 0,
    kBadParams = 2,
    kIoError = 3,
    kMismatch = 4,
    kAuditFailure = 5,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cpir::cli
