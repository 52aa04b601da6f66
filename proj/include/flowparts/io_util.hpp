#pragma once

#include <string>
#include <string_view>

namespace flowparts {

// Write-temp-then-rename. Concurrent writers of distinct paths never
// interleave; readers see either the old file or the complete new one.
void atomic_write_file(const std::string& path, std::string_view bytes);

std::string read_file(const std::string& path);

}  // namespace flowparts
