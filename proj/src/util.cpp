#include "decsum/util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace decsum {

namespace {
LogLevel g_level = LogLevel::kWarn;

void emit(const char* tag, std::string_view msg) {
  std::fprintf(stderr, "[%s] %.*s\n", tag, int(msg.size()), msg.data());
}
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

bool set_log_level(std::string_view name) {
  if (name == "error") g_level = LogLevel::kError;
  else if (name == "warn") g_level = LogLevel::kWarn;
  else if (name == "info") g_level = LogLevel::kInfo;
  else if (name == "debug") g_level = LogLevel::kDebug;
  else return false;
  return true;
}

void log_error(std::string_view msg) { emit("error", msg); }
void log_warn(std::string_view msg) {
  if (g_level >= LogLevel::kWarn) emit("warn", msg);
}
void log_info(std::string_view msg) {
  if (g_level >= LogLevel::kInfo) emit("info", msg);
}
void log_debug(std::string_view msg) {
  if (g_level >= LogLevel::kDebug) emit("debug", msg);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  return fnv1a64(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace decsum
