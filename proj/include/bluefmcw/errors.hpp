#pragma once

#include <stdexcept>
#include <string>

namespace bluefmcw {

/// Invalid chirp, scenario or campaign configuration. `key()` names the
/// offending configuration entry (a dotted path such as "chirp.n_sub").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Failure to read or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bluefmcw
