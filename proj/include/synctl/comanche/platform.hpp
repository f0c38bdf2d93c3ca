#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "synctl/errors.hpp"

namespace synctl::comanche {

/// How the lifecycle `fe` input is derived from the monitored FIFO signal.
enum class FeWiring {
  InputNot,   // fe = not f  (f under threshold means the queue has drained)
  FullState,  // fe = full   (the fifo automaton's threshold state, verbatim
              //              from the composition listing)
};

/// Execution-platform parameters: PE count, inter-PE communication
/// distances, per-PE workload bounds, and the monitor/executor knobs used
/// by the simulator.
struct PlatformConfig {
  int pe_count = 4;
  std::vector<int> processor_of;          // core -> processor pairing
  int64_t dist_same_core = 200;
  int64_t dist_same_processor = 500;
  int64_t dist_cross_processor = 1000;
  std::vector<int64_t> max_load;          // Max_i per PE
  FeWiring fe_wiring = FeWiring::InputNot;
  int64_t fifo_threshold = 8;             // queue length at which "full" raises
  int64_t start_latency = 4;              // ticks for a start command to land

  static PlatformConfig defaults() {
    PlatformConfig c;
    c.processor_of = {0, 0, 1, 1};
    c.max_load = {24000, 8000, 8000, 16000};
    return c;
  }

  int64_t distance(int pe_client, int pe_server) const {
    if (pe_client == pe_server) return dist_same_core;
    if (processor_of[static_cast<size_t>(pe_client)] ==
        processor_of[static_cast<size_t>(pe_server)])
      return dist_same_processor;
    return dist_cross_processor;
  }

  void check() const {
    if (pe_count != 2 && pe_count != 4)
      throw ConfigError("pe_count must be 2 or 4");
    if (static_cast<int>(processor_of.size()) != pe_count ||
        static_cast<int>(max_load.size()) != pe_count)
      throw ConfigError("processor pairing / max bounds must cover every PE");
    for (int64_t m : max_load)
      if (m <= 0) throw ConfigError("per-PE workload bound must be positive");
    if (fifo_threshold <= 0) throw ConfigError("fifo threshold must be positive");
    if (start_latency < 0) throw ConfigError("start latency must be >= 0");
  }
};

/// One client->server binding with its call frequency and server cost.
struct BindingSpec {
  std::string client;
  std::string client_iface;
  std::string server;
  int64_t freq = 10;
  int64_t cost = 5;
};

/// A component of the managed application.
struct ComponentSpec {
  std::string name;        // F, A, D, FS1, FS2, L
  int initial_pe = 0;
  bool migratable = false;
  bool lifecycle = false;  // has a lifecycle automaton (otherwise required)
  std::string fifo_event;  // model input fed by this component's queue monitor
  std::string tag;         // flow tag inside the model: S1, S2, L, ...
  std::string cmd_tag;     // command-output tag: H2 for FS2, L for the logger
  std::string mig_tag;     // migration-output tag: f1, f2, d
  int64_t service_cost = 1;
};

struct ComancheTopology {
  std::vector<ComponentSpec> components;
  std::vector<BindingSpec> bindings;

  static ComancheTopology defaults() {
    ComancheTopology t;
    t.components = {
        {"F", 0, false, false, "", "F", "", "", 1},
        {"A", 0, false, false, "", "A", "", "", 1},
        {"FS1", 1, true, false, "fifoH1F", "S1", "", "f1", 2},
        {"FS2", 3, true, true, "fifoH2F", "S2", "H2", "f2", 2},
        {"D", 3, true, false, "", "D", "", "d", 1},
        {"L", 3, false, true, "fifoL2F", "L", "L", "l", 1},
    };
    t.bindings = {
        {"F", "out", "A", 10, 5},   {"A", "disp", "D", 10, 5},
        {"A", "log", "L", 10, 5},   {"D", "fs1", "FS1", 10, 5},
        {"D", "fs2", "FS2", 10, 5},
    };
    return t;
  }

  const ComponentSpec& component(const std::string& name) const {
    for (const auto& c : components)
      if (c.name == name) return c;
    throw ConfigError("unknown component: " + name);
  }
  int index_of(const std::string& name) const {
    for (size_t i = 0; i < components.size(); ++i)
      if (components[i].name == name) return static_cast<int>(i);
    return -1;
  }

  void check(const PlatformConfig& cfg) const {
    for (const auto& c : components) {
      if (c.initial_pe < 0 || c.initial_pe >= cfg.pe_count)
        throw ConfigError("component " + c.name + " placed on unknown PE");
      if (c.migratable && c.mig_tag.empty())
        throw ConfigError("migratable component " + c.name + " needs a migration tag");
      if (c.lifecycle && c.cmd_tag.empty())
        throw ConfigError("lifecycle component " + c.name + " needs a command tag");
    }
    for (const auto& b : bindings) {
      if (index_of(b.client) < 0 || index_of(b.server) < 0)
        throw ConfigError("binding references undeclared component " + b.client +
                          " -> " + b.server);
      if (b.freq < 0 || b.cost < 0)
        throw ConfigError("binding parameters must be non-negative");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline int parse_pe(const std::string& s, int pe_count) {
  if (s.size() == 3 && s.compare(0, 2, "pe") == 0 && isdigit(s[2])) {
    int pe = s[2] - '0';
    if (pe >= 0 && pe < pe_count) return pe;
  }
  throw ConfigError("not a processing element id: " + s);
}

}  // namespace detail

/// Parses a `key = value` sectioned config file and overlays it on the
/// defaults. Sections: [platform], [placement], [bindings], [components].
inline void load_config(std::istream& in, PlatformConfig& cfg, ComancheTopology& topo) {
  std::string line, section = "platform";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    auto eqp = t.find('=');
    if (eqp == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(t.substr(0, eqp));
    std::string val = detail::trim(t.substr(eqp + 1));
    auto as_int = [&](const std::string& v) {
      try {
        return static_cast<int64_t>(std::stoll(v));
      } catch (...) {
        throw ConfigError("config line " + std::to_string(lineno) + ": not a number: " + v);
      }
    };

    if (section == "platform") {
      if (key == "pe_count") cfg.pe_count = static_cast<int>(as_int(val));
      else if (key == "same_core") cfg.dist_same_core = as_int(val);
      else if (key == "same_processor") cfg.dist_same_processor = as_int(val);
      else if (key == "cross_processor") cfg.dist_cross_processor = as_int(val);
      else if (key == "threshold") cfg.fifo_threshold = as_int(val);
      else if (key == "latency_start") cfg.start_latency = as_int(val);
      else if (key == "lifecycle_fe") {
        if (val == "input-not") cfg.fe_wiring = FeWiring::InputNot;
        else if (val == "full-state") cfg.fe_wiring = FeWiring::FullState;
        else throw ConfigError("lifecycle_fe must be input-not or full-state");
      } else if (key == "pairs") {
        // e.g. pairs = pe0:pe1, pe2:pe3
        cfg.processor_of.assign(static_cast<size_t>(cfg.pe_count), 0);
        std::stringstream ss(val);
        std::string group;
        int proc = 0;
        while (std::getline(ss, group, ',')) {
          std::stringstream gs(group);
          std::string pe;
          while (std::getline(gs, pe, ':'))
            cfg.processor_of[static_cast<size_t>(
                detail::parse_pe(detail::trim(pe), cfg.pe_count))] = proc;
          ++proc;
        }
      } else if (key.compare(0, 4, "max_") == 0) {
        int pe = detail::parse_pe(key.substr(4), cfg.pe_count);
        if (static_cast<int>(cfg.max_load.size()) != cfg.pe_count)
          cfg.max_load.assign(static_cast<size_t>(cfg.pe_count), 20000);
        cfg.max_load[static_cast<size_t>(pe)] = as_int(val);
      } else {
        throw ConfigError("unknown platform key: " + key);
      }
    } else if (section == "placement") {
      int idx = topo.index_of(key);
      if (idx < 0) throw ConfigError("placement of unknown component " + key);
      topo.components[static_cast<size_t>(idx)].initial_pe =
          detail::parse_pe(val, cfg.pe_count);
    } else if (section == "bindings") {
      // key: client.iface   value: server freq cost
      auto dot = key.find('.');
      if (dot == std::string::npos)
        throw ConfigError("binding key must be client.iface");
      BindingSpec b;
      b.client = key.substr(0, dot);
      b.client_iface = key.substr(dot + 1);
      std::stringstream vs(val);
      vs >> b.server >> b.freq >> b.cost;
      if (b.server.empty()) throw ConfigError("binding value must name a server");
      bool replaced = false;
      for (auto& ex : topo.bindings)
        if (ex.client == b.client && ex.client_iface == b.client_iface) {
          ex = b;
          replaced = true;
        }
      if (!replaced) topo.bindings.push_back(b);
    } else if (section == "components") {
      // key: name.field  value per field (service_cost only, for the sim)
      auto dot = key.find('.');
      if (dot == std::string::npos)
        throw ConfigError("component key must be name.field");
      int idx = topo.index_of(key.substr(0, dot));
      if (idx < 0) throw ConfigError("unknown component " + key.substr(0, dot));
      std::string field = key.substr(dot + 1);
      if (field == "service_cost")
        topo.components[static_cast<size_t>(idx)].service_cost = as_int(val);
      else
        throw ConfigError("unknown component field: " + field);
    } else {
      throw ConfigError("unknown config section: " + section);
    }
  }
  cfg.check();
  topo.check(cfg);
}

inline void load_config_file(const std::string& path, PlatformConfig& cfg,
                             ComancheTopology& topo) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  load_config(in, cfg, topo);
}

}  // namespace synctl::comanche
