#pragma once

#include "common.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Code of the graphpd::Error thrown by f, or "" if it returned normally.
template <typename F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const graphpd::Error& e) {
    return e.code();
  }
  return "";
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("graphpd_" + name + "_" + std::to_string(rng() % 1000000000ULL));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
