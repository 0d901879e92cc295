#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coulomb::app {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigurationError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigurationError("not a number: '" + s + "'");
  return v;
}

// value of a flag, typed after the default
Json typed(const std::string& key, const std::string& raw, const Json& def) {
  if (def.is_boolean()) return raw == "true" || raw == "1";
  if (def.is_number_integer() || def.is_number_unsigned()) {
    const double v = to_double(raw);
    if (v != std::floor(v) || v < 0) throw ConfigurationError("--" + key + " expects a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }
  if (def.is_number()) return to_double(raw);
  if (def.is_array()) {
    Json arr = Json::array();
    const bool ints = !def.empty() && def.front().is_number_integer();
    for (const auto& part : split(raw, ',')) {
      const double v = to_double(part);
      if (ints)
        arr.push_back(static_cast<std::uint64_t>(v));
      else
        arr.push_back(v);
    }
    return arr;
  }
  return raw;
}

}  // namespace

Potential parse_potential(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "ginibre" && arg.empty()) return Potential::ginibre();
  if ((name == "mittag-leffler" || name == "ml") && !arg.empty()) return Potential::mittag_leffler(to_double(arg));
  if (name == "ellipse" && !arg.empty()) return Potential::ellipse(to_double(arg));
  throw ConfigurationError("unknown potential '" + spec + "' (ginibre, mittag-leffler:<p>, ellipse:<t>)");
}

Complex parse_complex(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {to_double(parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
  throw ConfigurationError("expected 'x' or 'x,y', got '" + s + "'");
}

std::vector<double> parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigurationError("expected a:b:h, got '" + s + "'");
  const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
  if (!(h > 0.0) || b < a) throw ConfigurationError("bad range '" + s + "'");
  const auto steps = static_cast<long>(std::floor((b - a) / h + 1e-9));
  std::vector<double> out;
  for (long i = 0; i <= steps; ++i) out.push_back(a + double(i) * h);
  return out;
}

double parse_real(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  return to_double(s);
}

bool is_output_key(const std::string& key) { return key == "out" || key == "csv" || key == "report"; }

Json hashed_view(const Json& cfg) {
  Json v = Json::object();
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!is_output_key(it.key())) v[it.key()] = it.value();
  return v;
}

std::string config_hash(const Json& cfg) {
  const std::string s = hashed_view(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json conventions() {
  return {{"laplacian", "one quarter of the standard Laplacian"},
          {"area", "dA = d^2z / pi"},
          {"energy", "sum over ordered pairs of log 1/|z_j - z_k| + n sum Q(z_j)"}};
}

Json envelope(const std::string& command, const Json& cfg, const std::string& status, Json result) {
  Json j;
  j["command"] = command;
  j["config"] = hashed_view(cfg);
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.value("seed", std::uint64_t{0});
  j["conventions"] = conventions();
  j["status"] = status;
  j["result"] = std::move(result);
  return j;
}

std::string csv_preamble(const std::string& command, const Json& cfg) {
  std::ostringstream os;
  os << "# command=" << command << " config_hash=" << config_hash(cfg)
     << " seed=" << cfg.value("seed", std::uint64_t{0}) << "\n";
  os << "# conventions: Laplacian = 1/4 standard; dA = d^2z/pi\n";
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigurationError("cannot write '" + path + "'");
  f << text;
}

CommandOptions::CommandOptions(CLI::App* sub, Json defaults, const std::map<std::string, std::string>& help)
    : defaults_(std::move(defaults)) {
  sub->add_option("--config", config_path_, "JSON file with values for any of the options below");
  for (auto it = defaults_.begin(); it != defaults_.end(); ++it) {
    const std::string key = it.key();
    const auto h = help.find(key);
    const std::string desc = h == help.end() ? "" : h->second;
    if (it.value().is_boolean()) {
      flags_[key] = false;
      opts_[key] = sub->add_flag("--" + key, flags_[key], desc);
      continue;
    }
    std::string def = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    if (it.value().is_array()) {
      def.clear();
      for (const auto& v : it.value()) def += (def.empty() ? "" : ",") + v.dump();
    }
    opts_[key] = sub->add_option("--" + key, raw_[key], desc)->default_str(def);
  }
}

Json CommandOptions::resolve() const {
  Json cfg = defaults_;
  if (!config_path_.empty()) {
    std::ifstream f(config_path_);
    if (!f) throw ConfigurationError("cannot read config '" + config_path_ + "'");
    Json file;
    try {
      f >> file;
    } catch (const std::exception& e) {
      throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!file.is_object()) throw ConfigurationError("config must be a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      if (!defaults_.contains(it.key())) throw ConfigurationError("unknown config key '" + it.key() + "'");
      const Json& def = defaults_[it.key()];
      const Json& v = it.value();
      const bool ok = (def.is_boolean() && v.is_boolean()) || (def.is_number() && v.is_number()) ||
                      (def.is_string() && v.is_string()) || (def.is_array() && v.is_array());
      if (!ok) throw ConfigurationError("config key '" + it.key() + "' has the wrong type");
      cfg[it.key()] = v;
    }
  }
  for (const auto& [key, opt] : opts_) {
    if (opt->count() == 0) continue;
    if (defaults_[key].is_boolean())
      cfg[key] = flags_.at(key);
    else
      cfg[key] = typed(key, raw_.at(key), defaults_[key]);
  }
  return cfg;
}

}  // namespace coulomb::app
