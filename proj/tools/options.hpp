#pragma once

// Config-file + flag layering shared by all subcommands. Every key of a
// subcommand's JSON config gets a `--kebab-case` flag; precedence is
// defaults < --config file < flags.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uamcts/common/format.hpp"

namespace uamcts::cli {

enum class KeyType { kInt, kUInt, kNumber, kOptNumber, kString, kOptString, kBool, kIntList, kStringList, kNumberList };

struct KeySpec {
  std::string key;
  KeyType type;
  std::string help;
};

inline std::string kebab(std::string s) {
  for (char& c : s)
    if (c == '_') c = '-';
  return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

inline double to_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  if (!parse_double(text, v)) throw std::invalid_argument("--" + kebab(key) + ": '" + text + "' is not a number");
  return v;
}

inline long long to_integer(const std::string& key, const std::string& text) {
  const double v = to_number(key, text);
  if (v != static_cast<double>(static_cast<long long>(v)))
    throw std::invalid_argument("--" + kebab(key) + ": '" + text + "' is not an integer");
  return static_cast<long long>(v);
}

inline nlohmann::json parse_flag_value(const KeySpec& spec, const std::string& text) {
  switch (spec.type) {
    case KeyType::kInt: return to_integer(spec.key, text);
    case KeyType::kUInt: {
      const long long v = to_integer(spec.key, text);
      if (v < 0) throw std::invalid_argument("--" + kebab(spec.key) + " must be >= 0");
      return static_cast<std::uint64_t>(v);
    }
    case KeyType::kNumber: return to_number(spec.key, text);
    case KeyType::kOptNumber:
      if (text == "null" || text == "none") return nullptr;
      return to_number(spec.key, text);
    case KeyType::kString: return text;
    case KeyType::kOptString:
      if (text.empty()) return nullptr;
      return text;
    case KeyType::kBool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw std::invalid_argument("--" + kebab(spec.key) + ": expected true or false");
    case KeyType::kIntList: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& item : split_list(text)) a.push_back(to_integer(spec.key, item));
      return a;
    }
    case KeyType::kStringList: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& item : split_list(text)) a.push_back(item);
      return a;
    }
    case KeyType::kNumberList: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& item : split_list(text)) a.push_back(to_number(spec.key, item));
      return a;
    }
  }
  return nullptr;
}

/// Flags and the config file for one subcommand.
class ConfigLayer {
 public:
  ConfigLayer(CLI::App* app, nlohmann::json defaults, std::vector<KeySpec> keys)
      : defaults_(std::move(defaults)), keys_(std::move(keys)) {
    app->add_option("--config", config_path_, "JSON config file; flags override its values");
    app->add_option("--out", out_dir_, "output directory")->capture_default_str();
    for (const auto& k : keys_) {
      const std::string flag = "--" + kebab(k.key);
      if (k.type == KeyType::kBool)
        opts_[k.key] = app->add_flag(flag + "{true}", raw_[k.key], k.help);
      else
        opts_[k.key] = app->add_option(flag, raw_[k.key], k.help);
    }
  }

  /// Effective config after layering; throws std::invalid_argument on
  /// unknown keys or malformed values.
  nlohmann::json resolve() const {
    nlohmann::json cfg = defaults_;
    if (!config_path_.empty()) {
      std::ifstream is(config_path_, std::ios::binary);
      if (!is) throw std::invalid_argument("cannot open config file '" + config_path_ + "'");
      nlohmann::json file;
      try {
        file = nlohmann::json::parse(is);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config file '" + config_path_ + "': " + e.what());
      }
      if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (!cfg.contains(key)) throw std::invalid_argument("config file: unknown key '" + key + "'");
        cfg[key] = value;
      }
    }
    for (const auto& k : keys_) {
      if (opts_.at(k.key)->count() > 0) cfg[k.key] = parse_flag_value(k, raw_.at(k.key));
    }
    return cfg;
  }

  const std::string& out_dir() const { return out_dir_; }

 private:
  nlohmann::json defaults_;
  std::vector<KeySpec> keys_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> opts_;
  std::string config_path_;
  std::string out_dir_ = "out";
};

}  // namespace uamcts::cli
