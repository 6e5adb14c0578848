#pragma once

// Checked-in fixture store (runs IGA, IRM, MBDG, identical, shifted) and
// golden files.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace rise::testing {

inline std::filesystem::path fixture_dir() { return RISE_FIXTURE_DIR; }
inline std::filesystem::path fixture_store() { return fixture_dir() / "store"; }

inline std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writable copy of the fixture store.
inline void copy_fixture_store(const std::filesystem::path& to) {
  std::filesystem::copy(fixture_store(), to, std::filesystem::copy_options::recursive);
}

}  // namespace rise::testing
