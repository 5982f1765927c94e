#pragma once

#include "svlift/kernels.h"
#include "svlift/quadrature.h"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace svlift {

struct ConfigTable;

/// One value of the key/value config format: number, string, boolean, array or (inline) table.
struct ConfigValue {
  enum class Kind { Number, String, Bool, Array, Table };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;
  bool boolean = false;
  std::vector<ConfigValue> array;
  std::shared_ptr<ConfigTable> table;
  int line = 0;

  const char* kind_name() const;
};

struct ConfigTable {
  std::map<std::string, ConfigValue> entries;
  int line = 0;

  const ConfigValue* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  /// Positive integer value (throws if fractional or out of range).
  std::size_t count(const std::string& key) const;
  std::size_t count_or(const std::string& key, std::size_t fallback) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;
  /// Sub-table (a [section] or an inline table); nullptr if absent.
  const ConfigTable* table(const std::string& key) const;
  const ConfigTable& require_table(const std::string& key) const;
};

/// Parses the config text. Supported: `# comments`, `[section]` / `[a.b]` headers, `key = value` with
/// numbers, "strings", true/false, [arrays] (may span lines) and { inline = tables }.
ConfigTable parse_config(const std::string& text);
ConfigTable load_config(const std::string& path);

/// Kernel from a table such as { variant = "gamma", alpha = 0.7, rate = 2 }.
Kernel parse_kernel(const ConfigTable& t);
/// Kernel stored under `key`, either as an inline table or as a [key] section.
Kernel kernel_at(const ConfigTable& root, const std::string& key);
PartitionSpec parse_partition(const ConfigTable* t);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace svlift
