#include "hyfso/scenario.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyfso {
namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> split_on(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& ctx, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument(ctx + ": not a number: " + v);
  }
}

long parse_long(const std::string& ctx, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw std::invalid_argument(ctx + ": not an integer: " + v);
  }
}

std::uint64_t parse_u64(const std::string& ctx, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size() || v[0] == '-') throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw std::invalid_argument(ctx + ": not an unsigned integer: " + v);
  }
}

const std::map<std::string, double FsoLinkParams::*>& fso_fields() {
  static const std::map<std::string, double FsoLinkParams::*> fields = {
      {"responsivity", &FsoLinkParams::responsivity},
      {"aperture_radius", &FsoLinkParams::aperture_radius},
      {"divergence", &FsoLinkParams::divergence},
      {"distance", &FsoLinkParams::distance},
      {"attenuation", &FsoLinkParams::attenuation},
      {"turb_shape_a", &FsoLinkParams::turb_shape_a},
      {"turb_shape_b", &FsoLinkParams::turb_shape_b},
      {"noise_variance", &FsoLinkParams::noise_variance},
      {"tx_intensity", &FsoLinkParams::tx_intensity},
      {"bandwidth", &FsoLinkParams::bandwidth},
  };
  return fields;
}

const std::map<std::string, double RfLinkParams::*>& rf_fields() {
  static const std::map<std::string, double RfLinkParams::*> fields = {
      {"wavelength", &RfLinkParams::wavelength},
      {"tx_gain", &RfLinkParams::tx_gain},
      {"rx_gain", &RfLinkParams::rx_gain},
      {"ref_distance", &RfLinkParams::ref_distance},
      {"distance", &RfLinkParams::distance},
      {"path_loss_exp", &RfLinkParams::path_loss_exp},
      {"rician_k", &RfLinkParams::rician_k},
      {"fading_power", &RfLinkParams::fading_power},
      {"noise_psd_dbm_mhz", &RfLinkParams::noise_psd_dbm_mhz},
      {"noise_figure_db", &RfLinkParams::noise_figure_db},
      {"tx_power", &RfLinkParams::tx_power},
      {"bandwidth", &RfLinkParams::bandwidth},
  };
  return fields;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

// Key grammar: <medium><hop?>[.<relay>].<param>, e.g. fso.attenuation,
// rf2.tx_power, fso1.2.distance. Hop and relay are 1-based.
void apply_link_override(Scenario& s, const std::string& key, double value) {
  const std::string ctx = "links." + key;
  const std::vector<std::string> tokens = split_on(key, '.');
  if (tokens.size() != 2 && tokens.size() != 3)
    throw std::invalid_argument(ctx +
                                ": expected medium.param or medium.relay.param");

  std::string medium = tokens[0];
  std::vector<int> hops = {0, 1};
  bool is_fso;
  if (medium.rfind("fso", 0) == 0) {
    is_fso = true;
    medium = medium.substr(3);
  } else if (medium.rfind("rf", 0) == 0) {
    is_fso = false;
    medium = medium.substr(2);
  } else {
    throw std::invalid_argument(ctx + ": unknown link group '" + tokens[0] +
                                "'");
  }
  if (medium == "1")
    hops = {0};
  else if (medium == "2")
    hops = {1};
  else if (!medium.empty())
    throw std::invalid_argument(ctx + ": unknown link group '" + tokens[0] +
                                "'");

  std::vector<int> relays;
  if (tokens.size() == 3) {
    if (!all_digits(tokens[1]))
      throw std::invalid_argument(ctx + ": relay index must be a number");
    const int idx = static_cast<int>(parse_long(ctx, tokens[1]));
    if (idx < 1 || idx > s.base.relay_count)
      throw std::invalid_argument(ctx + ": relay index out of range");
    relays = {idx - 1};
  } else {
    for (int m = 0; m < s.base.relay_count; ++m) relays.push_back(m);
  }

  const std::string& param = tokens.back();
  if (is_fso) {
    const auto it = fso_fields().find(param);
    if (it == fso_fields().end())
      throw std::invalid_argument(ctx + ": unknown parameter '" + param + "'");
    for (int hop : hops)
      for (int m : relays) s.base.fso[hop][m].*(it->second) = value;
  } else {
    const auto it = rf_fields().find(param);
    if (it == rf_fields().end())
      throw std::invalid_argument(ctx + ": unknown parameter '" + param + "'");
    for (int hop : hops)
      for (int m : relays) s.base.rf[hop][m].*(it->second) = value;
  }
}

SweepAxis parse_axis(const std::string& v) {
  for (SweepAxis axis :
       {SweepAxis::kNone, SweepAxis::kAttenuation, SweepAxis::kRfPower,
        SweepAxis::kRelayCount, SweepAxis::kQmax}) {
    if (v == axis_name(axis)) return axis;
  }
  throw std::invalid_argument("sweep.axis: unknown axis '" + v + "'");
}

LinkRef parse_link_ref(const std::string& token) {
  const std::vector<std::string> parts = split_on(token, ':');
  if (parts.size() != 2 || !all_digits(parts[0]) || !all_digits(parts[1]))
    throw std::invalid_argument(
        "sweep.links: expected hop:relay with hop 1 or 2, got '" + token + "'");
  const int hop = static_cast<int>(parse_long("sweep.links", parts[0]));
  const int relay = static_cast<int>(parse_long("sweep.links", parts[1]));
  if (hop < 1 || hop > 2 || relay < 1)
    throw std::invalid_argument(
        "sweep.links: expected hop:relay with hop 1 or 2, got '" + token + "'");
  return LinkRef{hop - 1, relay - 1};
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  std::vector<Entry> entries;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "network" && section != "links" && section != "sweep" &&
          section != "policies" && section != "run")
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected key = value");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    if (e.key.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected key = value");
    entries.push_back(std::move(e));
  }

  // Network geometry first (later sections need the relay count), then the
  // rest; file order is free.
  int relays = 1;
  double d1 = 800.0, d2 = 800.0;
  std::uint64_t seed = 1;
  for (const Entry& e : entries) {
    if (e.section != "network") continue;
    const std::string ctx = e.section + "." + e.key;
    if (e.key == "relays") {
      const long n = parse_long(ctx, e.value);
      if (n < 1)
        throw std::invalid_argument(ctx + ": must be a positive integer");
      relays = static_cast<int>(n);
    } else if (e.key == "d1" || e.key == "d2") {
      const double d = parse_double(ctx, e.value);
      if (!(d > 0.0)) throw std::invalid_argument(ctx + ": must be > 0");
      (e.key == "d1" ? d1 : d2) = d;
    } else if (e.key == "seed") {
      seed = parse_u64(ctx, e.value);
    } else {
      throw std::invalid_argument(ctx + ": unknown key");
    }
  }

  Scenario s;
  s.base = make_network(relays, d1, d2, 1, seed);

  for (const Entry& e : entries) {
    const std::string ctx = e.section + "." + e.key;
    if (e.section == "network") continue;
    if (e.section == "links") {
      apply_link_override(s, e.key, parse_double(ctx, e.value));
    } else if (e.section == "sweep") {
      if (e.key == "axis") {
        s.axis = parse_axis(e.value);
      } else if (e.key == "values") {
        s.axis_values.clear();
        for (const std::string& tok : split_list(e.value))
          s.axis_values.push_back(parse_double("sweep.values", tok));
      } else if (e.key == "links") {
        s.axis_links.clear();
        for (const std::string& tok : split_list(e.value))
          s.axis_links.push_back(parse_link_ref(tok));
      } else {
        throw std::invalid_argument(ctx + ": unknown key");
      }
    } else if (e.section == "policies") {
      if (e.key == "list") {
        s.policies.clear();
        for (const std::string& tok : split_list(e.value)) {
          try {
            s.policies.push_back(policy_from_name(tok));
          } catch (const std::invalid_argument& err) {
            throw std::invalid_argument("policies.list: " +
                                        std::string(err.what()));
          }
        }
      } else {
        throw std::invalid_argument(ctx + ": unknown key");
      }
    } else if (e.section == "run") {
      if (e.key == "slots") {
        const long n = parse_long(ctx, e.value);
        if (n < 0) throw std::invalid_argument(ctx + ": must be >= 0");
        s.slots = n;
      } else if (e.key == "seeds") {
        s.seeds.clear();
        for (const std::string& tok : split_list(e.value))
          s.seeds.push_back(parse_u64("run.seeds", tok));
      } else if (e.key == "q_max") {
        s.q_max = parse_double(ctx, e.value);
      } else if (e.key == "weights") {
        s.weights_file = e.value;
      } else if (e.key == "train_iterations") {
        const long n = parse_long(ctx, e.value);
        if (n < 1) throw std::invalid_argument(ctx + ": must be >= 1");
        s.train.max_iterations = static_cast<int>(n);
      } else if (e.key == "train_trials") {
        const long n = parse_long(ctx, e.value);
        if (n < 1) throw std::invalid_argument(ctx + ": must be >= 1");
        s.train.trials_per_iteration = static_cast<int>(n);
      } else if (e.key == "train_eps0") {
        const double v = parse_double(ctx, e.value);
        if (!(v >= 0.0)) throw std::invalid_argument(ctx + ": must be >= 0");
        s.train.eps0 = v;
      } else if (e.key == "train_tolerance") {
        const double v = parse_double(ctx, e.value);
        if (!(v > 0.0)) throw std::invalid_argument(ctx + ": must be > 0");
        s.train.tolerance = v;
      } else if (e.key == "train_seed") {
        s.train.seed = parse_u64(ctx, e.value);
      } else {
        throw std::invalid_argument(ctx + ": unknown key");
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open())
    throw std::runtime_error("scenario file not found: " + path);
  return parse_scenario(in);
}

}  // namespace hyfso
