#pragma once

#include <filesystem>
#include <string>

namespace nzsdg {

// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

// Throw IoError on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace nzsdg
