#pragma once

#include <stdexcept>
#include <string>

namespace samplemine {

// Input data is malformed or unreadable (bad FIMI token, missing file, ...).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource guard tripped (subset-enumeration budget, counter-array
// cap).  Deliberately distinct from data_error: callers may retry with a
// smaller w or a bigger budget, and the CLI maps it to its own exit code.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace samplemine
