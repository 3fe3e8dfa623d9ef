#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace decsum {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();
bool set_log_level(std::string_view name);  // "error", "warn", "info", "debug"

void log_error(std::string_view msg);
void log_warn(std::string_view msg);
void log_info(std::string_view msg);
void log_debug(std::string_view msg);

// FNV-1a, used for content fingerprints in manifests and posterior files.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace decsum
