#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace sepsim {

// Bad arguments to an operation (precondition violated by the caller).
class UsageError : public std::invalid_argument {
public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid run configuration; message carries "file:line:" when known.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A backward trace exceeded its step cap (the cemetery value surfaced
// where a finite answer was required).
class ExplosionError : public std::runtime_error {
public:
  explicit ExplosionError(int site)
      : std::runtime_error("trace exploded at site " + std::to_string(site)),
        site_(site) {}
  int site() const { return site_; }

private:
  int site_;
};

// A window component grew past the configured cap: the subcriticality
// assumption failed empirically for this log.
class ComponentBlowupError : public std::runtime_error {
public:
  ComponentBlowupError(int window_index, std::size_t size)
      : std::runtime_error("component of size " + std::to_string(size) +
                           " in window " + std::to_string(window_index) +
                           " exceeds the cap"),
        window_index_(window_index), size_(size) {}
  int window_index() const { return window_index_; }
  std::size_t size() const { return size_; }

private:
  int window_index_;
  std::size_t size_;
};

// State space too large for an exact-matrix operation.
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Decimal with 17 significant digits; round-trips any double.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sepsim
