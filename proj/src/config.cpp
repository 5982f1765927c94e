#include "svlift/config.h"

#include "svlift/errors.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace svlift {

const char* ConfigValue::kind_name() const {
  switch (kind) {
    case Kind::Number: return "number";
    case Kind::String: return "string";
    case Kind::Bool: return "boolean";
    case Kind::Array: return "array";
    case Kind::Table: return "table";
  }
  return "?";
}

const ConfigValue* ConfigTable::find(const std::string& key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

namespace {

const ConfigValue& expect(const ConfigTable& t, const std::string& key, ConfigValue::Kind kind, const char* what) {
  const ConfigValue* v = t.find(key);
  if (!v) throw ConfigError("missing key '" + key + "'", t.line);
  if (v->kind != kind) throw ConfigError("key '" + key + "' must be a " + what + ", got " + v->kind_name(), v->line);
  return *v;
}

}  // namespace

double ConfigTable::number(const std::string& key) const {
  return expect(*this, key, ConfigValue::Kind::Number, "number").number;
}

double ConfigTable::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t ConfigTable::count(const std::string& key) const {
  const ConfigValue& v = expect(*this, key, ConfigValue::Kind::Number, "number");
  if (!(v.number >= 1.0) || v.number != std::floor(v.number) || v.number > 1e15)
    throw ConfigError("key '" + key + "' must be a positive integer", v.line);
  return static_cast<std::size_t>(v.number);
}

std::size_t ConfigTable::count_or(const std::string& key, std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::string ConfigTable::string(const std::string& key) const {
  return expect(*this, key, ConfigValue::Kind::String, "string").text;
}

std::string ConfigTable::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool ConfigTable::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? expect(*this, key, ConfigValue::Kind::Bool, "boolean").boolean : fallback;
}

std::vector<double> ConfigTable::numbers(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) throw ConfigError("missing key '" + key + "'", line);
  if (v->kind == ConfigValue::Kind::Number) return {v->number};
  if (v->kind != ConfigValue::Kind::Array) throw ConfigError("key '" + key + "' must be a number array", v->line);
  std::vector<double> out;
  for (const auto& e : v->array) {
    if (e.kind != ConfigValue::Kind::Number) throw ConfigError("key '" + key + "' must hold numbers only", e.line);
    out.push_back(e.number);
  }
  return out;
}

std::vector<double> ConfigTable::numbers_or(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

const ConfigTable* ConfigTable::table(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) return nullptr;
  if (v->kind != ConfigValue::Kind::Table) throw ConfigError("key '" + key + "' must be a table", v->line);
  return v->table.get();
}

const ConfigTable& ConfigTable::require_table(const std::string& key) const {
  const ConfigTable* t = table(key);
  if (!t) throw ConfigError("missing section '" + key + "'", line);
  return *t;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ConfigTable parse() {
    ConfigTable root;
    root.line = 1;
    ConfigTable* current = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        current = open_section(root);
      } else {
        const int key_line = line_;
        std::string key = parse_key();
        skip_spaces();
        if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
        ++pos_;
        skip_spaces();
        ConfigValue v = parse_value();
        insert(*current, key, std::move(v), key_line);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(msg, line_); }
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }
  void skip_comment() {
    if (!eof() && peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  // Whitespace, comments and newlines (used inside arrays).
  void skip_all() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (!eof() && peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      break;
    }
  }
  void skip_blank_lines() { skip_all(); }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail(std::string("unexpected character '") + peek() + "'");
    ++pos_;
    ++line_;
  }

  std::string parse_key() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (pos_ == start) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  ConfigTable* open_section(ConfigTable& root) {
    ++pos_;
    ConfigTable* t = &root;
    const int header_line = line_;
    while (true) {
      skip_spaces();
      std::string name = parse_key();
      ConfigValue* existing = t->entries.count(name) ? &t->entries[name] : nullptr;
      if (existing && existing->kind != ConfigValue::Kind::Table) fail("section '" + name + "' redefines a key");
      if (!existing) {
        ConfigValue v;
        v.kind = ConfigValue::Kind::Table;
        v.table = std::make_shared<ConfigTable>();
        v.table->line = header_line;
        v.line = header_line;
        existing = &(t->entries[name] = std::move(v));
      }
      t = existing->table.get();
      skip_spaces();
      if (!eof() && peek() == '.') {
        ++pos_;
        continue;
      }
      break;
    }
    if (eof() || peek() != ']') fail("expected ']' to close the section header");
    ++pos_;
    if (!defined_.insert(t).second) throw ConfigError("section defined twice", header_line);
    return t;
  }

  void insert(ConfigTable& t, const std::string& key, ConfigValue v, int key_line) {
    if (t.entries.count(key)) throw ConfigError("duplicate key '" + key + "'", key_line);
    v.line = key_line;
    t.entries.emplace(key, std::move(v));
  }

  ConfigValue parse_value() {
    if (eof()) fail("expected a value");
    ConfigValue v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.kind = ConfigValue::Kind::String;
      v.text = parse_string();
    } else if (c == '[') {
      v.kind = ConfigValue::Kind::Array;
      ++pos_;
      skip_all();
      while (!eof() && peek() != ']') {
        v.array.push_back(parse_value());
        skip_all();
        if (!eof() && peek() == ',') {
          ++pos_;
          skip_all();
        } else if (eof()) {
          break;
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      if (eof()) throw ConfigError("unterminated array", v.line);
      ++pos_;
    } else if (c == '{') {
      v.kind = ConfigValue::Kind::Table;
      v.table = std::make_shared<ConfigTable>();
      v.table->line = line_;
      ++pos_;
      skip_spaces();
      while (!eof() && peek() != '}') {
        const int key_line = line_;
        std::string key = parse_key();
        skip_spaces();
        if (eof() || peek() != '=') fail("expected '=' in inline table");
        ++pos_;
        skip_spaces();
        insert(*v.table, key, parse_value(), key_line);
        skip_spaces();
        if (!eof() && peek() == ',') {
          ++pos_;
          skip_spaces();
        } else if (eof()) {
          break;
        } else if (peek() != '}') {
          fail("expected ',' or '}' in inline table");
        }
      }
      if (eof()) throw ConfigError("unterminated inline table", v.table->line);
      ++pos_;
    } else if (text_.compare(pos_, 4, "true") == 0) {
      v.kind = ConfigValue::Kind::Bool;
      v.boolean = true;
      pos_ += 4;
    } else if (text_.compare(pos_, 5, "false") == 0) {
      v.kind = ConfigValue::Kind::Bool;
      pos_ += 5;
    } else {
      v.kind = ConfigValue::Kind::Number;
      const std::size_t start = pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '+' ||
                        peek() == '-' || peek() == '_'))
        ++pos_;
      std::string token = text_.substr(start, pos_ - start);
      token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
      std::size_t used = 0;
      try {
        v.number = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (token.empty() || used != token.size() || !std::isfinite(v.number)) fail("invalid value '" + token + "'");
    }
    return v;
  }

  std::string parse_string() {
    ++pos_;
    std::string out;
    while (!eof() && peek() != '"') {
      char c = peek();
      if (c == '\n') fail("unterminated string");
      if (c == '\\') {
        ++pos_;
        if (eof()) fail("unterminated string");
        const char e = peek();
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      out.push_back(c);
      ++pos_;
    }
    if (eof()) fail("unterminated string");
    ++pos_;
    return out;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<const ConfigTable*> defined_;
};

}  // namespace

ConfigTable parse_config(const std::string& text) { return Parser(text).parse(); }

ConfigTable load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Kernel parse_kernel(const ConfigTable& t) {
  const std::string variant = t.string("variant");
  try {
    if (variant == "exp_sum") {
      const auto weights = t.numbers("weights");
      const auto rates = t.numbers("rates");
      if (weights.size() != rates.size()) throw ConfigError("exp_sum: weights and rates differ in length", t.line);
      std::vector<ExpTerm> terms;
      for (std::size_t i = 0; i < weights.size(); ++i) terms.push_back({weights[i], rates[i]});
      return Kernel::exp_sum(std::move(terms));
    }
    if (variant == "fractional") return Kernel::fractional(t.number("alpha"));
    if (variant == "gamma") return Kernel::gamma(t.number("alpha"), t.number("rate"));
    if (variant == "damped") return Kernel::damped(parse_kernel(t.require_table("base")), t.number("rate"));
    if (variant == "shifted") return Kernel::shifted(parse_kernel(t.require_table("base")), t.number("delta"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), t.line);
  }
  throw ConfigError("unknown kernel variant '" + variant + "'", t.find("variant")->line);
}

Kernel kernel_at(const ConfigTable& root, const std::string& key) { return parse_kernel(root.require_table(key)); }

PartitionSpec parse_partition(const ConfigTable* t) {
  PartitionSpec p;
  if (!t) return p;
  p.n_cells = t->count_or("n_atoms", p.n_cells);
  p.x_min = t->number_or("x_min", p.x_min);
  p.x_max = t->number_or("x_max", p.x_max);
  p.lump_below = t->boolean_or("lump_below", p.lump_below);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), t->line);
  }
  return p;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace svlift
