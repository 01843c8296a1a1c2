#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace isocrys::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitExhausted = 3;
inline constexpr int kExitUsage = 64;

inline constexpr const char* kVersion = "isocrys 0.1.0";

// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Digest of a certificate with "digest" and "created" removed.
std::string certificate_digest(const nlohmann::json& cert);

}  // namespace isocrys::cli
