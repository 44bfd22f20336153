#include "exo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace exo {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + key + "' (expected " +
                    expected + ")");
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v, "true or false");
}

template <typename Int>
Int to_int(const std::string& key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

Vec4 to_vec4(const std::string& key, std::string_view v) {
  const auto parts = split_list(v);
  if (parts.size() != kJoints) bad_value(key, v, "four comma-separated numbers");
  Vec4 out;
  for (int j = 0; j < kJoints; ++j) out[j] = to_double(key, parts[j]);
  return out;
}

Interval to_interval(const std::string& key, std::string_view v) {
  const auto parts = split_list(v);
  if (parts.size() != 2) bad_value(key, v, "two comma-separated numbers");
  return Interval{to_double(key, parts[0]), to_double(key, parts[1])};
}

JointMask to_mask(const std::string& key, std::string_view v) {
  const auto parts = split_list(v);
  if (parts.size() != kJoints) bad_value(key, v, "four comma-separated booleans");
  JointMask out{};
  for (int j = 0; j < kJoints; ++j) out[j] = to_bool(key, parts[j]);
  return out;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(const Vec4& v) {
  return fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ", " + fmt(v[3]);
}
std::string fmt(const Interval& i) { return fmt(i.lo) + ", " + fmt(i.hi); }
std::string fmt(const JointMask& m) {
  return fmt(m[0]) + ", " + fmt(m[1]) + ", " + fmt(m[2]) + ", " + fmt(m[3]);
}

struct Field {
  std::string key;
  std::function<void(Scenario&, const std::string&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

// Builds a Field for a member reached through `access`, which maps a Scenario
// reference to the member reference.
template <typename Access>
Field number(std::string key, Access access) {
  return Field{std::move(key),
               [access](Scenario& s, const std::string& k, std::string_view v) {
                 access(s) = to_double(k, v);
               },
               [access](const Scenario& s) { return fmt(access(s)); }};
}

template <typename Access>
Field vec4(std::string key, Access access) {
  return Field{std::move(key),
               [access](Scenario& s, const std::string& k, std::string_view v) {
                 access(s) = to_vec4(k, v);
               },
               [access](const Scenario& s) { return fmt(access(s)); }};
}

template <typename Access>
Field boolean(std::string key, Access access) {
  return Field{std::move(key),
               [access](Scenario& s, const std::string& k, std::string_view v) {
                 access(s) = to_bool(k, v);
               },
               [access](const Scenario& s) { return fmt(access(s)); }};
}

template <typename Access>
Field interval(std::string key, Access access) {
  return Field{std::move(key),
               [access](Scenario& s, const std::string& k, std::string_view v) {
                 access(s) = to_interval(k, v);
               },
               [access](const Scenario& s) { return fmt(access(s)); }};
}

void add_link(std::vector<Field>& f, const std::string& prefix, int leg, bool shank) {
  auto link = [leg, shank](auto& s) -> auto& {
    return shank ? s.plant.legs[leg].shank : s.plant.legs[leg].thigh;
  };
  f.push_back(number(prefix + ".mass", [link](auto& s) -> auto& { return link(s).mass; }));
  f.push_back(number(prefix + ".length", [link](auto& s) -> auto& { return link(s).length; }));
  f.push_back(number(prefix + ".com", [link](auto& s) -> auto& { return link(s).com; }));
  f.push_back(number(prefix + ".inertia", [link](auto& s) -> auto& { return link(s).inertia; }));
}

std::vector<Field> build_fields() {
  std::vector<Field> f;

  // scenario.preset is handled separately: it selects the base before other keys apply.
  f.push_back(Field{"scenario.preset", nullptr, [](const Scenario& s) { return s.preset; }});
  f.push_back(number("scenario.duration", [](auto& s) -> auto& { return s.duration; }));
  f.push_back(number("scenario.step", [](auto& s) -> auto& { return s.step; }));
  f.push_back(Field{"scenario.seed",
                    [](Scenario& s, const std::string& k, std::string_view v) {
                      s.seed = to_int<std::uint64_t>(k, v);
                    },
                    [](const Scenario& s) { return std::to_string(s.seed); }});

  f.push_back(number("plant.gravity", [](auto& s) -> auto& { return s.plant.gravity; }));
  const char* legs[] = {"left", "right"};
  for (int leg = 0; leg < 2; ++leg) {
    add_link(f, std::string("plant.") + legs[leg] + ".thigh", leg, false);
    add_link(f, std::string("plant.") + legs[leg] + ".shank", leg, true);
  }
  f.push_back(vec4("plant.stiffness", [](auto& s) -> auto& { return s.plant.stiffness; }));
  f.push_back(number("plant.stiffness_width",
                     [](auto& s) -> auto& { return s.plant.stiffness_width; }));
  f.push_back(vec4("plant.damping", [](auto& s) -> auto& { return s.plant.damping; }));
  f.push_back(vec4("plant.rest", [](auto& s) -> auto& { return s.plant.rest; }));
  f.push_back(vec4("plant.stop_lower", [](auto& s) -> auto& { return s.plant.stop_lower; }));
  f.push_back(vec4("plant.stop_upper", [](auto& s) -> auto& { return s.plant.stop_upper; }));

  f.push_back(vec4("disturbance.amplitude",
                   [](auto& s) -> auto& { return s.plant.disturbance.amplitude; }));
  f.push_back(vec4("disturbance.frequency",
                   [](auto& s) -> auto& { return s.plant.disturbance.frequency; }));
  f.push_back(vec4("disturbance.phase",
                   [](auto& s) -> auto& { return s.plant.disturbance.phase; }));

  for (int n = 0; n < kMotors; ++n) {
    const std::string p = "motor." + std::to_string(n);
    auto m = [n](auto& s) -> auto& { return s.motors[n]; };
    f.push_back(number(p + ".inertia", [m](auto& s) -> auto& { return m(s).inertia; }));
    f.push_back(number(p + ".damping", [m](auto& s) -> auto& { return m(s).damping; }));
    f.push_back(number(p + ".effectiveness",
                       [m](auto& s) -> auto& { return m(s).effectiveness; }));
    f.push_back(number(p + ".ratio", [m](auto& s) -> auto& { return m(s).ratio; }));
    f.push_back(number(p + ".offset", [m](auto& s) -> auto& { return m(s).offset; }));
    f.push_back(number(p + ".friction_mean",
                       [m](auto& s) -> auto& { return m(s).disturbance.mean; }));
    f.push_back(number(p + ".friction_amplitude",
                       [m](auto& s) -> auto& { return m(s).disturbance.amplitude; }));
    f.push_back(number(p + ".friction_frequency",
                       [m](auto& s) -> auto& { return m(s).disturbance.frequency; }));
    f.push_back(number(p + ".friction_phase",
                       [m](auto& s) -> auto& { return m(s).disturbance.phase; }));
  }
  f.push_back(interval("motor.limits.inertia",
                       [](auto& s) -> auto& { return s.motor_limits.inertia; }));
  f.push_back(interval("motor.limits.damping",
                       [](auto& s) -> auto& { return s.motor_limits.damping; }));
  f.push_back(interval("motor.limits.friction",
                       [](auto& s) -> auto& { return s.motor_limits.disturbance; }));
  f.push_back(interval("motor.limits.effectiveness",
                       [](auto& s) -> auto& { return s.motor_limits.effectiveness; }));

  f.push_back(number("joint.k1", [](auto& s) -> auto& { return s.joint.k1; }));
  f.push_back(number("joint.epsilon", [](auto& s) -> auto& { return s.joint.epsilon; }));
  f.push_back(number("joint.alpha", [](auto& s) -> auto& { return s.joint.alpha; }));
  f.push_back(boolean("joint.rho_auto", [](auto& s) -> auto& { return s.rho_auto; }));
  f.push_back(number("joint.rho1", [](auto& s) -> auto& { return s.rho.rho1; }));
  f.push_back(number("joint.rho2", [](auto& s) -> auto& { return s.rho.rho2; }));
  f.push_back(number("joint.rho3", [](auto& s) -> auto& { return s.rho.rho3; }));
  f.push_back(number("joint.saturation", [](auto& s) -> auto& { return s.saturation; }));

  f.push_back(number("sync.k2", [](auto& s) -> auto& { return s.sync.k2; }));
  f.push_back(number("sync.k3", [](auto& s) -> auto& { return s.sync.k3; }));
  f.push_back(number("sync.k4", [](auto& s) -> auto& { return s.sync.k4; }));
  f.push_back(number("sync.beta", [](auto& s) -> auto& { return s.sync.beta; }));
  f.push_back(number("sync.boundary_layer",
                     [](auto& s) -> auto& { return s.boundary_layer; }));

  f.push_back(number("dwell.N0", [](auto& s) -> auto& { return s.dwell.N0; }));
  f.push_back(number("dwell.tau_a", [](auto& s) -> auto& { return s.dwell.tau_a; }));
  f.push_back(number("dwell.min_hold", [](auto& s) -> auto& { return s.dwell.min_hold; }));

  for (int j = 0; j < kJoints; ++j) {
    const std::string p = std::string("trajectory.") + joint_name(j);
    auto tr = [j](auto& s) -> auto& { return s.trajectory[j]; };
    f.push_back(boolean(p + ".active", [tr](auto& s) -> auto& { return tr(s).active; }));
    f.push_back(number(p + ".mid", [tr](auto& s) -> auto& { return tr(s).mid; }));
    f.push_back(number(p + ".amplitude", [tr](auto& s) -> auto& { return tr(s).amplitude; }));
    f.push_back(number(p + ".period", [tr](auto& s) -> auto& { return tr(s).period; }));
    f.push_back(number(p + ".phase", [tr](auto& s) -> auto& { return tr(s).phase; }));
  }

  f.push_back(Field{"actuation.clamped",
                    [](Scenario& s, const std::string& k, std::string_view v) {
                      s.clamped = to_mask(k, v);
                    },
                    [](const Scenario& s) { return fmt(s.clamped); }});

  f.push_back(vec4("init.xi", [](auto& s) -> auto& { return s.init.xi; }));
  f.push_back(vec4("init.eta", [](auto& s) -> auto& { return s.init.eta; }));
  f.push_back(vec4("init.sync_error", [](auto& s) -> auto& { return s.init.sync_error; }));

  f.push_back(boolean("monitor.guub", [](auto& s) -> auto& { return s.monitors.guub; }));
  f.push_back(boolean("monitor.sync", [](auto& s) -> auto& { return s.monitors.sync; }));
  f.push_back(boolean("monitor.dwell", [](auto& s) -> auto& { return s.monitors.dwell; }));

  f.push_back(Field{"bounds.grid_points",
                    [](Scenario& s, const std::string& k, std::string_view v) {
                      s.bounds.grid_points = to_int<int>(k, v);
                    },
                    [](const Scenario& s) { return std::to_string(s.bounds.grid_points); }});
  f.push_back(Field{"bounds.samples",
                    [](Scenario& s, const std::string& k, std::string_view v) {
                      s.bounds.samples = to_int<int>(k, v);
                    },
                    [](const Scenario& s) { return std::to_string(s.bounds.samples); }});
  f.push_back(number("bounds.margin", [](auto& s) -> auto& { return s.bounds.margin; }));
  f.push_back(number("bounds.velocity_limit",
                     [](auto& s) -> auto& { return s.bounds.velocity_limit; }));
  f.push_back(number("bounds.lead_margin",
                     [](auto& s) -> auto& { return s.bounds.lead_margin; }));
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = build_fields();
  return table;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ConfigError("cannot format number");
  return std::string(buf, ptr);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.push_back(f.key);
  return out;
}

Scenario parse_config(std::string_view text) {
  std::map<std::string, const Field*> index;
  for (const Field& f : fields()) index.emplace(f.key, &f);

  struct Entry {
    const Field* field;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::map<std::string, int> seen;
  std::string preset = "nominal";

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");

    const auto it = index.find(key);
    if (it == index.end())
      throw ConfigError("unknown key '" + key + "' on line " + std::to_string(line_no));
    if (const auto [s, inserted] = seen.emplace(key, line_no); !inserted)
      throw ConfigError("duplicate key '" + key + "' on line " + std::to_string(line_no) +
                        " (first on line " + std::to_string(s->second) + ")");
    if (key == "scenario.preset") {
      preset = value;
      continue;
    }
    entries.push_back({it->second, key, value});
  }

  Scenario s = make_preset(preset);
  for (const Entry& e : entries) e.field->set(s, e.key, e.value);
  return s;
}

void apply_overrides(Scenario& s, const std::vector<std::string>& assignments) {
  std::map<std::string, const Field*> index;
  for (const Field& f : fields()) index.emplace(f.key, &f);
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not 'key=value'");
    const std::string key(trim(std::string_view(a).substr(0, eq)));
    const std::string value(trim(std::string_view(a).substr(eq + 1)));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError("unknown key '" + key + "'");
    if (key == "scenario.preset")
      throw ConfigError("scenario.preset cannot be overridden; use --preset");
    it->second->set(s, key, value);
  }
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const Scenario& s) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(s) + "\n";
  return out;
}

}  // namespace exo
