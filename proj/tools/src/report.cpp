#include "report.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "table.hpp"

namespace tailrisk::cli {

void Report::put(std::string key, Value value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

const Report::Value* Report::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

std::string value_text(const Report::Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) return x;
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else return format_number(x);
      },
      v);
}

}  // namespace

std::string Report::to_text() const {
  std::size_t width = 0;
  for (const auto& [k, v] : entries_) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out.append(width - k.size() + 2, ' ');
    out += value_text(v);
    out += '\n';
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          // JSON has no inf/nan; those go out as strings.
          if constexpr (std::is_same_v<T, double>) {
            if (std::isfinite(x)) j[k] = x;
            else j[k] = format_number(x);
          } else {
            j[k] = x;
          }
        },
        v);
  }
  return j.dump(2) + "\n";
}

}  // namespace tailrisk::cli
