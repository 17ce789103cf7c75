#pragma once

#include <ostream>

namespace tlab::cli {

// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;          // a check failed or the library raised
inline constexpr int kInconclusive = 2;  // an endpoint limit could not be classified
inline constexpr int kUsage = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tlab::cli
