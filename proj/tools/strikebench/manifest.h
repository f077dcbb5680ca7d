#ifndef STRIKEBENCH_TOOLS_MANIFEST_H_
#define STRIKEBENCH_TOOLS_MANIFEST_H_

#include <filesystem>
#include <map>
#include <string>

#include "commands.h"

namespace strikebench::cli {

// Lowercase hex SHA-256 of a file's bytes; a directory hashes its regular
// files in name order. Throws IoError when unreadable.
std::string sha256_file(const std::filesystem::path& path);

void write_manifest(const std::string& command, const std::map<std::string, std::string>& flags,
                    const Outcome& outcome, double seconds);

}  // namespace strikebench::cli

#endif  // STRIKEBENCH_TOOLS_MANIFEST_H_
