#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dzeta/zeros.hpp"

namespace dzeta::fixtures {

inline std::filesystem::path data_dir() { return DZETA_TEST_DATA_DIR; }

inline const std::vector<ZetaZero>& zeros_120() {
  static const auto z = load_zero_file(data_dir() / "zeros_1-32_120d.txt", 120);
  return z;
}

inline const std::vector<ZetaZero>& zeros_850() {
  static const auto z = load_zero_file(data_dir() / "zeros_1-300_850d.txt", 850);
  return z;
}

// Fresh scratch directory per test, removed by the caller when convenient.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dzeta_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace dzeta::fixtures
