#pragma once

// Experiment configs: every subcommand declares its parameters as a JSON
// object of defaults. Values come from the defaults, then an optional
// --config file, then flags given on the command line. The resolved object
// (minus output paths) is hashed and embedded in every artifact.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coulomb/common.hpp"
#include "coulomb/potentials.hpp"

namespace coulomb::app {

using Json = nlohmann::json;

/// "ginibre", "mittag-leffler:<p>" (or "ml:<p>"), "ellipse:<t>"
Potential parse_potential(const std::string& spec);

/// "x" or "x,y"
Complex parse_complex(const std::string& s);
/// "a:b:h" inclusive of b up to rounding
std::vector<double> parse_range(const std::string& s);
/// "+inf"/"inf" or a number
double parse_real(const std::string& s);

/// Keys that name output files; excluded from the hash.
bool is_output_key(const std::string& key);

/// FNV-1a 64 over the compact dump of the config without output keys.
std::string config_hash(const Json& cfg);
Json hashed_view(const Json& cfg);

Json conventions();

/// Standard JSON artifact.
Json envelope(const std::string& command, const Json& cfg, const std::string& status, Json result);

/// Comment lines for CSV artifacts.
std::string csv_preamble(const std::string& command, const Json& cfg);

/// Writes to `path`, or to `fallback` when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback);
std::string dump(const Json& j);

/// Registers one flag per key of `defaults` on `sub` plus --config.
class CommandOptions {
 public:
  CommandOptions(CLI::App* sub, Json defaults, const std::map<std::string, std::string>& help = {});
  /// defaults <- config file <- explicit flags
  Json resolve() const;

 private:
  Json defaults_;
  std::string config_path_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> opts_;
  std::map<std::string, bool> flags_;
};

}  // namespace coulomb::app
