#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace tailrisk::cli {

/// Flat, ordered key/value record written as report.txt and report.json.
class Report {
 public:
  using Value = std::variant<std::string, std::int64_t, double, bool>;

  /// Replaces the value in place if the key exists, else appends.
  template <class T>
  void set(std::string key, const T& value) {
    if constexpr (std::is_same_v<T, bool>) put(std::move(key), Value(value));
    else if constexpr (std::is_integral_v<T>) put(std::move(key), Value(static_cast<std::int64_t>(value)));
    else if constexpr (std::is_floating_point_v<T>) put(std::move(key), Value(static_cast<double>(value)));
    else put(std::move(key), Value(std::string(value)));
  }

  const std::vector<std::pair<std::string, Value>>& entries() const noexcept { return entries_; }
  const Value* find(const std::string& key) const;

  std::string to_text() const;
  std::string to_json() const;

 private:
  void put(std::string key, Value value);

  std::vector<std::pair<std::string, Value>> entries_;
};

}  // namespace tailrisk::cli
