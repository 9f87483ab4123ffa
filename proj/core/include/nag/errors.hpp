#pragma once

#include <stdexcept>
#include <string>

namespace nag {

inline constexpr const char* kVersion = "1.0.0";

// Exit-code contract used by the CLI: 2 input, 3 resource, 4 numerical.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 2;
};

class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 3;
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 4;
};

}  // namespace nag
