#include "satflux/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "satflux/errors.hpp"

namespace satflux {

namespace {

struct Value {
  enum class Kind { number, string, boolean, null } kind = Kind::null;
  double number = 0.0;
  std::string text;
  bool boolean = false;
};

struct KeySpec {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const Value&, const std::string& where)> set;
  std::function<nlohmann::json(const RunConfig&)> get;
};

double as_number(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::number) throw ConfigError("expected a number", where);
  return v.number;
}

long long as_integer(const Value& v, const std::string& where) {
  const double x = as_number(v, where);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError("expected an integer", where);
  return static_cast<long long>(x);
}

std::string as_string(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::string) throw ConfigError("expected a quoted string", where);
  return v.text;
}

bool as_bool(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::boolean) throw ConfigError("expected true or false", where);
  return v.boolean;
}

#define NUM_KEY(sec, name, field) \
  KeySpec{sec, name, [](RunConfig& c, const Value& v, const std::string& w) { c.field = as_number(v, w); }, \
          [](const RunConfig& c) { return nlohmann::json(c.field); }}
#define STR_KEY(sec, name, field) \
  KeySpec{sec, name, [](RunConfig& c, const Value& v, const std::string& w) { c.field = as_string(v, w); }, \
          [](const RunConfig& c) { return nlohmann::json(c.field); }}
#define BOOL_KEY(sec, name, field) \
  KeySpec{sec, name, [](RunConfig& c, const Value& v, const std::string& w) { c.field = as_bool(v, w); }, \
          [](const RunConfig& c) { return nlohmann::json(c.field); }}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      STR_KEY("flux", "family", family),
      NUM_KEY("flux", "nu", nu),
      NUM_KEY("flux", "c", c),
      NUM_KEY("model", "a", a),
      NUM_KEY("model", "m", m),
      NUM_KEY("model", "M", M),
      KeySpec{"grid", "N",
              [](RunConfig& c, const Value& v, const std::string& w) {
                const long long n = as_integer(v, w);
                if (n < 8 || n > 100'000'000) throw ConfigError("N must be an integer in [8, 1e8]", w);
                c.scheme.N = static_cast<int>(n);
              },
              [](const RunConfig& c) { return nlohmann::json(c.scheme.N); }},
      KeySpec{"grid", "eps",
              [](RunConfig& c, const Value& v, const std::string& w) {
                if (v.kind == Value::Kind::null || (v.kind == Value::Kind::string && v.text == "auto")) {
                  c.scheme.eps.reset();
                } else {
                  c.scheme.eps = as_number(v, w);
                }
              },
              [](const RunConfig& c) { return c.scheme.eps ? nlohmann::json(*c.scheme.eps) : nlohmann::json(nullptr); }},
      NUM_KEY("grid", "kappa_bc", scheme.kappa_bc),
      NUM_KEY("grid", "lambda_env", scheme.lambda_env),
      NUM_KEY("grid", "cfl", scheme.cfl),
      KeySpec{"grid", "mean",
              [](RunConfig& c, const Value& v, const std::string& w) {
                try {
                  c.scheme.mean = interface_mean_from_string(as_string(v, w));
                } catch (const ParameterError& e) {
                  throw ConfigError(e.what(), w);
                }
              },
              [](const RunConfig& c) { return nlohmann::json(to_string(c.scheme.mean)); }},
      NUM_KEY("grid", "support_floor", scheme.support_floor),
      KeySpec{"grid", "max_steps",
              [](RunConfig& c, const Value& v, const std::string& w) { c.scheme.max_steps = as_integer(v, w); },
              [](const RunConfig& c) { return nlohmann::json(c.scheme.max_steps); }},
      NUM_KEY("time", "t_end", scheme.t_end),
      NUM_KEY("time", "snapshot_dt", scheme.snapshot_dt),
      STR_KEY("initial", "kind", initial.kind),
      NUM_KEY("initial", "value", initial.value),
      NUM_KEY("initial", "slope", initial.slope),
      NUM_KEY("initial", "v_edge", initial.v_edge),
      STR_KEY("initial", "file", initial.file),
      BOOL_KEY("initial", "compatibilize", initial.compatibilize),
      NUM_KEY("initial", "delta0", initial.delta0),
      NUM_KEY("initial", "xi_minus", initial.xi_minus),
      STR_KEY("output", "directory", output.directory),
      BOOL_KEY("output", "emit_svg", output.emit_svg),
  };
  return table;
}

#undef NUM_KEY
#undef STR_KEY
#undef BOOL_KEY

const KeySpec* find_key(const std::string& section, const std::string& key) {
  for (const auto& k : key_table()) {
    if (k.section == section && k.key == key) return &k;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& k : key_table()) {
    if (k.section == section) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

Value parse_value(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  Value v;
  if (s.empty()) throw ConfigError("missing value", where);
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError("unterminated string", where);
    v.kind = Value::Kind::string;
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        ++i;
        out += (s[i] == 'n') ? '\n' : s[i];
      } else {
        out += s[i];
      }
    }
    v.text = out;
    return v;
  }
  if (s == "true" || s == "false") {
    v.kind = Value::Kind::boolean;
    v.boolean = (s == "true");
    return v;
  }
  std::string digits;
  for (char ch : s) {
    if (ch != '_') digits += ch;
  }
  double x = 0.0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), x);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
    throw ConfigError("cannot parse value '" + s + "'", where);
  }
  if (!std::isfinite(x)) throw ConfigError("value must be finite", where);
  v.kind = Value::Kind::number;
  v.number = x;
  return v;
}

Value from_json_value(const nlohmann::json& j, const std::string& where) {
  Value v;
  if (j.is_null()) {
    v.kind = Value::Kind::null;
  } else if (j.is_boolean()) {
    v.kind = Value::Kind::boolean;
    v.boolean = j.get<bool>();
  } else if (j.is_number()) {
    v.kind = Value::Kind::number;
    v.number = j.get<double>();
  } else if (j.is_string()) {
    v.kind = Value::Kind::string;
    v.text = j.get<std::string>();
  } else {
    throw ConfigError("unsupported JSON value", where);
  }
  return v;
}

}  // namespace

ModelParams RunConfig::params() const {
  ModelParams p;
  p.a = a;
  p.m = m;
  p.M = M;
  p.flux = FluxModel::classical(nu, c);
  return p;
}

void RunConfig::validate() const {
  if (family != "classical") throw ConfigError("only the classical family is available from config files", "flux.family");
  if (!(nu > 0.0)) throw ConfigError("must be positive", "flux.nu");
  if (!(c > 0.0)) throw ConfigError("must be positive", "flux.c");
  if (!(a >= 0.0)) throw ConfigError("must be >= 0", "model.a");
  if (!(m >= 0.0)) throw ConfigError("must be >= 0", "model.m");
  if (!(M > 0.0)) throw ConfigError("must be positive", "model.M");
  try {
    scheme.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what(), "grid/time");
  }
  static const std::set<std::string> kinds = {"constant", "ramp", "jump_wave", "file"};
  if (!kinds.count(initial.kind)) throw ConfigError("must be constant, ramp, jump_wave or file", "initial.kind");
  if (initial.kind == "constant" && !(initial.value > 0.0)) throw ConfigError("must be positive", "initial.value");
  if (initial.kind == "ramp" && !(initial.value > 0.0 && initial.value + initial.slope * M > 0.0)) {
    throw ConfigError("ramp must stay positive on [0, M]", "initial.slope");
  }
  if (initial.kind == "jump_wave") {
    if (!(initial.v_edge > 0.0)) throw ConfigError("must be positive", "initial.v_edge");
    if (std::abs(a * M - 2.0 * c) > 1e-12 * c) throw ConfigError("jump_wave needs a*M = 2c", "initial.kind");
  }
  if (initial.kind == "file" && initial.file.empty()) throw ConfigError("file path required", "initial.file");
  if (initial.compatibilize && !(initial.delta0 > 0.0 && initial.delta0 < 0.5 * M)) {
    throw ConfigError("must lie in (0, M/2)", "initial.delta0");
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where_line = origin + ":" + std::to_string(lineno);
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", where_line);
      section = trim(s.substr(1, s.size() - 2));
      if (!known_section(section)) throw ConfigError("unknown section [" + section + "]", where_line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", where_line);
    const std::string key = trim(s.substr(0, eq));
    const std::string where = where_line + " " + (section.empty() ? key : section + "." + key);
    if (section.empty()) throw ConfigError("key outside of a section", where);
    const KeySpec* spec = find_key(section, key);
    if (!spec) throw ConfigError("unknown key", where);
    if (!seen.insert(section + "." + key).second) throw ConfigError("duplicate key", where);
    spec->set(cfg, parse_value(s.substr(eq + 1), where), where);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file", path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), path.string());
    }
    return run_config_from_json(j);
  }
  return parse_run_config(buf.str(), path.string());
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& k : key_table()) j[k.section][k.key] = k.get(cfg);
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& root) {
  const nlohmann::json& j = root.contains("config") ? root.at("config") : root;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  for (const auto& [section, body] : j.items()) {
    if (!known_section(section)) throw ConfigError("unknown section", section);
    if (!body.is_object()) throw ConfigError("section must be an object", section);
    for (const auto& [key, val] : body.items()) {
      const std::string where = section + "." + key;
      const KeySpec* spec = find_key(section, key);
      if (!spec) throw ConfigError("unknown key", where);
      spec->set(cfg, from_json_value(val, where), where);
    }
  }
  cfg.validate();
  return cfg;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const KeySpec* spec = nullptr;
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    spec = find_key(key.substr(0, dot), key.substr(dot + 1));
  } else {
    for (const auto& k : key_table()) {
      if (k.key == key) {
        if (spec) throw ConfigError("ambiguous key; use section.key", key);
        spec = &k;
      }
    }
  }
  if (!spec) throw ConfigError("unknown key", key);
  Value v;
  const std::string t = trim(value);
  if (!t.empty() && (std::isdigit(static_cast<unsigned char>(t.front())) || t.front() == '-' || t.front() == '+' ||
                     t.front() == '.' || t.front() == '"' || t == "true" || t == "false")) {
    v = parse_value(t, key);
  } else {
    v.kind = Value::Kind::string;
    v.text = t;
  }
  spec->set(cfg, v, key);
}

}  // namespace satflux
