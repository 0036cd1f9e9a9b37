#pragma once

#include <stdexcept>
#include <string>

namespace jpegvpr {

/// Invalid user input: flags, level lists, parameter ranges. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing data on disk: manifests, images, descriptor files. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

}  // namespace jpegvpr
