#include "ratchet/config.hpp"

#include <cctype>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ratchet/util.hpp"

namespace ratchet {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const ConfigEntry& e, const std::string& raw) {
  try {
    std::size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw config_error("expected a number for '" + e.key + "', got '" + raw + "'",
                       e.line, e.column);
  }
}

}  // namespace

const ConfigEntry* ConfigNode::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::string ConfigNode::get_string(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) throw config_error("missing required key '" + key + "'", 0, 0);
  return e->raw;
}

std::string ConfigNode::get_string_or(const std::string& key,
                                      const std::string& dflt) const {
  const ConfigEntry* e = find(key);
  return e ? e->raw : dflt;
}

double ConfigNode::get_double(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) throw config_error("missing required key '" + key + "'", 0, 0);
  return to_double(*e, e->raw);
}

double ConfigNode::get_double_or(const std::string& key, double dflt) const {
  const ConfigEntry* e = find(key);
  return e ? to_double(*e, e->raw) : dflt;
}

int ConfigNode::get_int_or(const std::string& key, int dflt) const {
  return static_cast<int>(get_double_or(key, dflt));
}

std::vector<double> ConfigNode::get_double_list(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) throw config_error("missing required key '" + key + "'", 0, 0);
  std::vector<double> out;
  for (const std::string& tok : tokenize(e->raw)) out.push_back(to_double(*e, tok));
  return out;
}

const ConfigNode* ConfigNode::table(const std::string& name) const {
  for (const auto& [k, node] : tables)
    if (k == name) return &node;
  return nullptr;
}

const std::vector<ConfigNode>* ConfigNode::list(const std::string& name) const {
  for (const auto& [k, nodes] : lists)
    if (k == name) return &nodes;
  return nullptr;
}

ConfigNode parse_config(const std::string& text) {
  ConfigNode root;
  ConfigNode* target = &root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (t.front() == '[') {
      const bool is_list = t.size() > 1 && t[1] == '[';
      const std::string closer = is_list ? "]]" : "]";
      const std::size_t end = t.find(closer);
      if (end == std::string::npos || trim(t.substr(end + closer.size())) != "")
        throw config_error("malformed section header", lineno, col);
      const std::string name = trim(t.substr(is_list ? 2 : 1, end - (is_list ? 2 : 1)));
      if (name.empty()) throw config_error("empty section name", lineno, col);
      if (is_list) {
        std::vector<ConfigNode>* bucket = nullptr;
        for (auto& [k, nodes] : root.lists)
          if (k == name) bucket = &nodes;
        if (!bucket) {
          root.lists.emplace_back(name, std::vector<ConfigNode>{});
          bucket = &root.lists.back().second;
        }
        bucket->emplace_back();
        target = &bucket->back();
      } else {
        ConfigNode* node = nullptr;
        for (auto& [k, tab] : root.tables)
          if (k == name) node = &tab;
        if (!node) {
          root.tables.emplace_back(name, ConfigNode{});
          node = &root.tables.back().second;
        }
        target = node;
      }
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("expected 'key = value'", lineno, col);
    ConfigEntry e;
    e.key = trim(t.substr(0, eq));
    e.raw = trim(t.substr(eq + 1));
    e.line = lineno;
    e.column = col;
    if (e.key.empty()) throw config_error("empty key", lineno, col);
    if (e.raw.empty()) throw config_error("empty value for '" + e.key + "'", lineno, col);
    target->entries.push_back(std::move(e));
  }
  return root;
}

ConfigNode parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SpatialField parse_field(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty field spec");
  const std::string& kind = tokens[0];
  auto num = [&](std::size_t i) {
    if (i >= tokens.size())
      throw std::invalid_argument("field spec '" + kind + "': missing argument");
    try {
      return std::stod(tokens[i]);
    } catch (const std::exception&) {
      throw std::invalid_argument("field spec '" + kind + "': bad number '" + tokens[i] +
                                  "'");
    }
  };
  if (kind == "const") {
    const double c = num(1);
    return [c](double) { return c; };
  }
  if (kind == "trig") {
    const double c = num(1);
    std::vector<std::pair<double, double>> harmonics;
    for (std::size_t i = 2; i + 1 < tokens.size(); i += 2)
      harmonics.emplace_back(num(i), num(i + 1));
    return [c, harmonics](double x) {
      double v = c;
      for (std::size_t k = 0; k < harmonics.size(); ++k) {
        const double ph = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * x;
        v += harmonics[k].first * std::cos(ph) + harmonics[k].second * std::sin(ph);
      }
      return v;
    };
  }
  if (kind == "potential" || kind == "tilted") {
    std::size_t start = kind == "tilted" ? 2 : 1;
    const double tilt = kind == "tilted" ? num(1) : 0.0;
    PotentialPtr psi =
        parse_potential(std::vector<std::string>(tokens.begin() + start, tokens.end()));
    return [psi, tilt](double x) { return -psi->deriv(x) - tilt; };
  }
  throw std::invalid_argument("unknown field spec '" + kind + "'");
}

SpatialField parse_field(const std::string& spec) { return parse_field(tokenize(spec)); }

ForceProtocol protocol_from_config(const ConfigNode& cfg) {
  PotentialPtr psi = parse_potential(cfg.get_string_or("potential", "zero"));
  if (const ConfigNode* trav = cfg.table("traveling")) {
    const double omega = trav->get_double("omega");
    return ForceProtocol::traveling(psi, omega);
  }
  const std::vector<ConfigNode>* segs = cfg.list("segment");
  if (!segs || segs->empty())
    throw config_error("protocol needs [[segment]] blocks or a [traveling] table", 0, 0);
  bool all_tilts = true;
  for (const ConfigNode& s : *segs)
    if (!s.has("tilt")) all_tilts = false;
  if (all_tilts) {
    TiltProtocol tp;
    tp.base = psi;
    for (const ConfigNode& s : *segs)
      tp.segments.emplace_back(s.get_double("duration"), s.get_double("tilt"));
    return tilt_to_force(tp);
  }
  ForceProtocol p;
  p.base = psi;
  for (const ConfigNode& s : *segs) {
    ForceProtocol::Segment seg;
    seg.duration = s.get_double("duration");
    if (!(seg.duration > 0)) {
      const ConfigEntry* e = s.find("duration");
      throw config_error("segment durations must be positive", e ? e->line : 0,
                         e ? e->column : 0);
    }
    if (s.has("tilt")) {
      const double tilt = s.get_double("tilt");
      seg.tilt = tilt;
      seg.from_tilt = true;
      PotentialPtr base = psi;
      seg.force = [base, tilt](double x) { return -base->deriv(x) - tilt; };
    } else {
      seg.force = parse_field(s.get_string("force"));
    }
    p.segments.push_back(std::move(seg));
  }
  return p;
}

MultiStateSystem multistate_from_config(const ConfigNode& cfg) {
  const std::vector<ConfigNode>* states = cfg.list("state");
  if (!states || states->size() < 2)
    throw config_error("multistate config needs at least two [[state]] blocks", 0, 0);
  MultiStateSystem sys;
  sys.num_states = static_cast<int>(states->size());
  sys.sigma = cfg.get_double_or("sigma", 1.0);
  for (const ConfigNode& s : *states) {
    if (s.has("force")) {
      sys.forces.push_back(parse_field(s.get_string("force")));
    } else {
      PotentialPtr psi = parse_potential(s.get_string("potential"));
      const double tilt = s.get_double_or("tilt", 0.0);
      sys.forces.push_back([psi, tilt](double x) { return -psi->deriv(x) - tilt; });
    }
  }
  sys.rates.assign(sys.num_states, std::vector<SpatialField>(sys.num_states));
  const ConfigNode* rates = cfg.table("rates");
  if (!rates) throw config_error("multistate config needs a [rates] table", 0, 0);
  for (const ConfigEntry& e : rates->entries) {
    if (e.key.size() != 4 || e.key.compare(0, 2, "nu") != 0 ||
        !std::isdigit(static_cast<unsigned char>(e.key[2])) ||
        !std::isdigit(static_cast<unsigned char>(e.key[3])))
      throw config_error("rate keys look like nu12, nu21, ...", e.line, e.column);
    const int i = e.key[2] - '1';
    const int j = e.key[3] - '1';
    if (i < 0 || j < 0 || i >= sys.num_states || j >= sys.num_states || i == j)
      throw config_error("rate key '" + e.key + "' out of range", e.line, e.column);
    try {
      sys.rates[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          parse_field(e.raw);
    } catch (const std::invalid_argument& ex) {
      throw config_error(ex.what(), e.line, e.column);
    }
  }
  return sys;
}

}  // namespace ratchet
