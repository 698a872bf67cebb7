#ifndef RATCHET_CONFIG_HPP
#define RATCHET_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "ratchet/multistate.hpp"
#include "ratchet/potential.hpp"

namespace ratchet {

/// One `key = value` entry with its source position.
struct ConfigEntry {
  std::string key;
  std::string raw;
  int line = 0, column = 0;
};

/// Flat structured text: `key = value` scalars, `[table]` sections and
/// repeated `[[list]]` sections.  Declaration order is preserved.
struct ConfigNode {
  std::vector<ConfigEntry> entries;
  std::vector<std::pair<std::string, ConfigNode>> tables;
  std::vector<std::pair<std::string, std::vector<ConfigNode>>> lists;

  const ConfigEntry* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double dflt) const;
  int get_int_or(const std::string& key, int dflt) const;
  std::vector<double> get_double_list(const std::string& key) const;
  const ConfigNode* table(const std::string& name) const;
  const std::vector<ConfigNode>* list(const std::string& name) const;
};

/// Parses config text; throws config_error with line/column on bad input.
ConfigNode parse_config(const std::string& text);
ConfigNode parse_config_file(const std::string& path);

/// Spatial force field specs:
///   const <c>
///   trig <c> <a1> <b1> [<a2> <b2> ...]   (c + sum a_k cos + b_k sin of 2 pi k x)
///   potential <potential spec...>        (F = -psi')
///   tilted <omega> <potential spec...>   (F = -psi' - omega)
SpatialField parse_field(const std::vector<std::string>& tokens);
SpatialField parse_field(const std::string& spec);

/// Builds a ForceProtocol from keys `potential`, `sigma` (ignored here),
/// `[[segment]]` (duration + tilt | force) and `[traveling]` (omega).
ForceProtocol protocol_from_config(const ConfigNode& cfg);

/// Two-or-more-state system from `sigma`, `[[state]]` (force | potential +
/// tilt) and `[rates]` (nu<i><j> = field).
MultiStateSystem multistate_from_config(const ConfigNode& cfg);

}  // namespace ratchet

#endif
