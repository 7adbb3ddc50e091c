// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace molbench {

// Writes to "<path>.partial" and renames over `path`, so readers never see a
// half-written file. A leftover .partial marks an interrupted write.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::filesystem::path partial_path(const std::filesystem::path& path);

// Throws std::runtime_error when unreadable.
std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace molbench
