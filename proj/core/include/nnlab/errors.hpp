#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nnlab {

// Invalid parameters, arity mismatches, bad topologies. CLI exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/malformed files, unknown labels, schema violations. CLI exit code 2.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Training blew up (non-finite values or runaway weights). CLI exit code 3.
class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(const std::string& what, std::int64_t epoch)
        : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    std::int64_t epoch() const { return epoch_; }

  private:
    std::int64_t epoch_;
};

} // namespace nnlab
