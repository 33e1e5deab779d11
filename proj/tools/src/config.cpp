#include "gcm/app/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gcm::app {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing with source positions

// Input iterator that records the furthest offset the lexer has read.
class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* p, const char* base, std::size_t* furthest) : p_(p), base_(base), furthest_(furthest) {}

  reference operator*() const {
    *furthest_ = std::max(*furthest_, static_cast<std::size_t>(p_ - base_));
    return *p_;
  }
  TrackingIterator& operator++() {
    ++p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++p_;
    return old;
  }
  friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) { return a.p_ == b.p_; }

 private:
  const char* p_;
  const char* base_;
  std::size_t* furthest_;
};

struct Frame {
  bool is_array = false;
  std::string pointer;
  std::set<std::string> keys;
  int next_index = 0;
};

// Builds the DOM and records the source line of every value by JSON pointer.
class LocatingSax {
 public:
  LocatingSax(json& root, const std::string& text, const std::size_t* furthest)
      : dom_(root, true), text_(text), furthest_(furthest) {}

  std::map<std::string, int> lines;

  bool null() { return value(dom_.null()); }
  bool boolean(bool v) { return value(dom_.boolean(v)); }
  bool number_integer(json::number_integer_t v) { return value(dom_.number_integer(v)); }
  bool number_unsigned(json::number_unsigned_t v) { return value(dom_.number_unsigned(v)); }
  bool number_float(json::number_float_t v, const std::string& s) { return value(dom_.number_float(v, s)); }
  bool string(std::string& v) { return value(dom_.string(v)); }
  bool binary(json::binary_t& v) { return value(dom_.binary(v)); }

  bool start_object(std::size_t n) {
    frames_.push_back({false, open_child(), {}, 0});
    return dom_.start_object(n);
  }
  bool end_object() {
    frames_.pop_back();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    frames_.push_back({true, open_child(), {}, 0});
    return dom_.start_array(n);
  }
  bool end_array() {
    frames_.pop_back();
    return dom_.end_array();
  }
  bool key(std::string& k) {
    Frame& f = frames_.back();
    const std::string ptr = f.pointer + "/" + escape(k);
    if (!f.keys.insert(k).second) throw ConfigError(ptr, current_line(), "duplicate key");
    pending_ = ptr;
    lines[ptr] = current_line();
    return dom_.key(k);
  }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    const int line = 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + std::min(pos, text_.size()), '\n'));
    std::string what = ex.what();
    // Drop the library prefix "[json.exception.parse_error.101] ".
    if (const auto cut = what.find("] "); cut != std::string::npos) what = what.substr(cut + 2);
    throw ConfigError("", line, "syntax error: " + what);
  }

 private:
  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  int current_line() const {
    const std::size_t end = std::min(*furthest_ + 1, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
  }

  // Pointer of the value about to start, recording array element lines.
  std::string open_child() {
    if (frames_.empty()) {
      lines[""] = current_line();
      return "";
    }
    Frame& f = frames_.back();
    if (f.is_array) {
      const std::string ptr = f.pointer + "/" + std::to_string(f.next_index++);
      lines[ptr] = current_line();
      return ptr;
    }
    return pending_;
  }

  bool value(bool ok) {
    if (!frames_.empty() && frames_.back().is_array) open_child();
    return ok;
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  const std::string& text_;
  const std::size_t* furthest_;
  std::vector<Frame> frames_;
  std::string pending_;
};

// ---------------------------------------------------------------------------
// Typed field access

class Reader {
 public:
  Reader(const json& node, std::string pointer, const std::map<std::string, int>& lines)
      : node_(node), pointer_(std::move(pointer)), lines_(lines) {}

  const std::string& pointer() const { return pointer_; }
  const json& node() const { return node_; }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(pointer_, line(), message); }

  int line() const {
    const auto it = lines_.find(pointer_);
    return it == lines_.end() ? 0 : it->second;
  }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!node_.is_object()) fail("expected an object");
    for (const auto& [k, v] : node_.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end()) {
        child(k).fail("unknown field");
      }
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

  Reader child(const std::string& key) const { return {node_.at(key), pointer_ + "/" + key, lines_}; }
  Reader element(std::size_t i) const { return {node_.at(i), pointer_ + "/" + std::to_string(i), lines_}; }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    const double v = node_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    const auto v = node_.get<long long>();
    if (v < -1000000000 || v > 1000000000) fail("integer out of range");
    return static_cast<int>(v);
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }
  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  double number_or(const char* key, double fallback) const { return has(key) ? child(key).number() : fallback; }

 private:
  const json& node_;
  std::string pointer_;
  const std::map<std::string, int>& lines_;
};

constexpr int kMaxSteps = 400;

double nonnegative(const Reader& r) {
  const double v = r.number();
  if (v < 0.0) r.fail("must be >= 0");
  return v;
}

double angle_pi(const Reader& r) {
  const double v = r.number();
  if (v < 0.0 || v > 0.5) r.fail("beam-splitter angle must lie in [0, 0.5] (multiples of pi)");
  return v;
}

ModeSpecPi read_mode(const Reader& r) {
  r.require_object({"n", "r", "phi_pi"});
  ModeSpecPi m;
  if (r.has("n")) m.n = nonnegative(r.child("n"));
  if (r.has("r")) m.r = nonnegative(r.child("r"));
  if (r.has("phi_pi")) m.phi_pi = r.child("phi_pi").number();
  return m;
}

std::string read_type(const Reader& r) {
  if (!r.node().is_object()) r.fail("expected an object");
  if (!r.has("type")) r.fail("missing field \"type\"");
  return r.child("type").string();
}

CStateSpec read_c_state(const Reader& r) {
  const std::string type = read_type(r);
  if (type == "squeezed_vacuum") {
    r.require_object({"type", "xi", "phi_pi"});
    cstate::SqueezedVacuum s;
    if (r.has("xi")) s.xi = nonnegative(r.child("xi"));
    if (r.has("phi_pi")) s.phi_pi = r.child("phi_pi").number();
    return s;
  }
  if (type == "thermal") {
    r.require_object({"type", "n"});
    return cstate::Thermal{r.has("n") ? nonnegative(r.child("n")) : 0.0};
  }
  if (type == "thermal_matched") {
    r.require_object({"type", "paper_literal"});
    return cstate::ThermalMatched{r.has("paper_literal") && r.child("paper_literal").boolean()};
  }
  if (type == "mode") {
    r.require_object({"type", "n", "r", "phi_pi"});
    ModeSpecPi m;
    if (r.has("n")) m.n = nonnegative(r.child("n"));
    if (r.has("r")) m.r = nonnegative(r.child("r"));
    if (r.has("phi_pi")) m.phi_pi = r.child("phi_pi").number();
    return cstate::Mode{m};
  }
  r.child("type").fail("unknown c_state type \"" + type +
                       "\" (expected squeezed_vacuum, thermal, thermal_matched or mode)");
}

EnvSpec read_env(const Reader& r) {
  const std::string type = read_type(r);
  if (type == "vacuum") {
    r.require_object({"type"});
    return env::Vacuum{};
  }
  if (type == "squeezed_same") {
    r.require_object({"type", "r", "phi_pi"});
    return env::SqueezedSame{r.has("r") ? nonnegative(r.child("r")) : 0.0, r.number_or("phi_pi", 0.0)};
  }
  if (type == "squeezed_alternative") {
    r.require_object({"type", "r"});
    return env::SqueezedAlternative{r.has("r") ? nonnegative(r.child("r")) : 0.0};
  }
  if (type == "thermal") {
    r.require_object({"type", "n"});
    return env::Thermal{r.has("n") ? nonnegative(r.child("n")) : 0.0};
  }
  if (type == "list") {
    r.require_object({"type", "modes"});
    if (!r.has("modes")) r.fail("missing field \"modes\"");
    const Reader modes = r.child("modes");
    if (!modes.node().is_array()) modes.fail("expected an array");
    env::List list;
    for (std::size_t i = 0; i < modes.node().size(); ++i) list.modes.push_back(read_mode(modes.element(i)));
    return list;
  }
  r.child("type").fail("unknown env type \"" + type +
                       "\" (expected vacuum, squeezed_same, squeezed_alternative, thermal or list)");
}

SweepAxis read_axis(const Reader& r) {
  const std::string name = r.string();
  for (SweepAxis a : {SweepAxis::kDeltaPhi, SweepAxis::kThetaEe, SweepAxis::kThetaSe, SweepAxis::kNE}) {
    if (name == to_string(a)) return a;
  }
  r.fail("unknown sweep axis \"" + name + "\" (expected delta_phi_pi, theta_ee_pi, theta_se_pi or n_E)");
}

GridSpec read_grid(const Reader& r) {
  r.require_object({"start", "stop", "points"});
  GridSpec g;
  if (r.has("start")) g.start = angle_pi(r.child("start"));
  if (r.has("stop")) g.stop = angle_pi(r.child("stop"));
  if (r.has("points")) {
    g.points = r.child("points").integer();
    if (g.points < 1 || g.points > 1001) r.child("points").fail("must lie in [1, 1001]");
  }
  if (g.points == 1 && g.start != g.stop) r.fail("a single-point grid needs start == stop");
  return g;
}

json mode_json(const ModeSpecPi& m) { return {{"n", m.n}, {"r", m.r}, {"phi_pi", m.phi_pi}}; }

json to_json(const CStateSpec& c) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, cstate::SqueezedVacuum>) {
          return {{"type", "squeezed_vacuum"}, {"xi", s.xi}, {"phi_pi", s.phi_pi}};
        } else if constexpr (std::is_same_v<T, cstate::Thermal>) {
          return {{"type", "thermal"}, {"n", s.n}};
        } else if constexpr (std::is_same_v<T, cstate::ThermalMatched>) {
          return {{"type", "thermal_matched"}, {"paper_literal", s.paper_literal}};
        } else {
          json j = mode_json(s.mode);
          j["type"] = "mode";
          return j;
        }
      },
      c);
}

json to_json(const EnvSpec& e) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, env::Vacuum>) {
          return {{"type", "vacuum"}};
        } else if constexpr (std::is_same_v<T, env::SqueezedSame>) {
          return {{"type", "squeezed_same"}, {"r", s.r}, {"phi_pi", s.phi_pi}};
        } else if constexpr (std::is_same_v<T, env::SqueezedAlternative>) {
          return {{"type", "squeezed_alternative"}, {"r", s.r}};
        } else if constexpr (std::is_same_v<T, env::Thermal>) {
          return {{"type", "thermal"}, {"n", s.n}};
        } else {
          json modes = json::array();
          for (const auto& m : s.modes) modes.push_back(mode_json(m));
          return {{"type", "list"}, {"modes", modes}};
        }
      },
      e);
}

json grid_json(const GridSpec& g) { return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}}; }

constexpr double kPi = 3.141592653589793238462643383279502884;

double phi_c_pi(const CStateSpec& c) {
  if (const auto* sq = std::get_if<cstate::SqueezedVacuum>(&c)) return sq->phi_pi;
  if (const auto* m = std::get_if<cstate::Mode>(&c)) return m->mode.phi_pi;
  return 0.0;
}

}  // namespace

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "config error";
        if (line > 0) os << " at line " << line;
        if (!field.empty()) os << ", field " << field;
        os << ": " << message;
        return os.str();
      }()),
      field_(std::move(field)),
      line_(line),
      message_(message) {}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDeltaPhi: return "delta_phi_pi";
    case SweepAxis::kThetaEe: return "theta_ee_pi";
    case SweepAxis::kThetaSe: return "theta_se_pi";
    case SweepAxis::kNE: return "n_E";
  }
  return "?";
}

std::vector<double> GridSpec::values_pi() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
  }
  return out;
}

ScenarioConfig ScenarioSpec::to_scenario() const {
  ScenarioConfig cfg;
  cfg.L_max = L_max;
  cfg.theta_ss = BSAngle::from_pi(theta_ss_pi);
  cfg.theta_se = BSAngle::from_pi(theta_se_pi);
  cfg.theta_ee = BSAngle::from_pi(theta_ee_pi);
  cfg.xi_ab = xi_ab;
  const double xi = xi_ab;
  cfg.c_state = std::visit(
      [xi](const auto& s) -> CState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, cstate::SqueezedVacuum>) {
          return SqueezedVacuumC{s.xi, s.phi_pi * kPi};
        } else if constexpr (std::is_same_v<T, cstate::Thermal>) {
          return ThermalC{s.n};
        } else if constexpr (std::is_same_v<T, cstate::ThermalMatched>) {
          const double n = s.paper_literal ? std::sinh(xi) * std::sinh(xi) : std::cosh(xi) / 2.0 - 0.5;
          return ThermalC{std::max(0.0, n)};
        } else {
          return SingleModeSpec(s.mode.n, s.mode.r, s.mode.phi_pi * kPi);
        }
      },
      c_state);
  cfg.env = std::visit(
      [](const auto& s) -> EnvPattern {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, env::Vacuum>) {
          return VacuumEnv{};
        } else if constexpr (std::is_same_v<T, env::SqueezedSame>) {
          return SqueezedSameEnv{s.r, s.phi_pi * kPi};
        } else if constexpr (std::is_same_v<T, env::SqueezedAlternative>) {
          return SqueezedAlternativeEnv{s.r};
        } else if constexpr (std::is_same_v<T, env::Thermal>) {
          return ThermalEnv{s.n};
        } else {
          EnvList list;
          for (const auto& m : s.modes) list.modes.emplace_back(m.n, m.r, m.phi_pi * kPi);
          return list;
        }
      },
      env);
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  json root;
  std::size_t furthest = 0;
  LocatingSax sax(root, text, &furthest);
  const TrackingIterator first(text.data(), text.data(), &furthest);
  const TrackingIterator last(text.data() + text.size(), text.data(), &furthest);
  json::sax_parse(first, last, &sax);

  const Reader top(root, "", sax.lines);
  top.require_object({"L_max", "theta_ss_pi", "theta_se_pi", "theta_ee_pi", "xi_ab", "c_state", "env", "sweep", "phase"});

  RunConfig cfg;
  ScenarioSpec& s = cfg.scenario;
  if (top.has("L_max")) {
    s.L_max = top.child("L_max").integer();
    if (s.L_max < 1 || s.L_max > kMaxSteps) {
      top.child("L_max").fail("must lie in [1, " + std::to_string(kMaxSteps) + "]");
    }
  }
  if (top.has("theta_ss_pi")) s.theta_ss_pi = angle_pi(top.child("theta_ss_pi"));
  if (top.has("theta_se_pi")) s.theta_se_pi = angle_pi(top.child("theta_se_pi"));
  if (top.has("theta_ee_pi")) s.theta_ee_pi = angle_pi(top.child("theta_ee_pi"));
  if (top.has("xi_ab")) s.xi_ab = top.child("xi_ab").number();
  if (top.has("c_state")) s.c_state = read_c_state(top.child("c_state"));
  if (top.has("env")) s.env = read_env(top.child("env"));
  if (const auto* list = std::get_if<env::List>(&s.env)) {
    if (static_cast<int>(list->modes.size()) != s.L_max - 1) {
      top.child("env").child("modes").fail("needs exactly L_max - 1 = " + std::to_string(s.L_max - 1) +
                                           " entries, got " + std::to_string(list->modes.size()));
    }
  }

  if (top.has("sweep")) {
    const Reader r = top.child("sweep");
    r.require_object({"axis", "values"});
    if (!r.has("axis")) r.fail("missing field \"axis\"");
    if (!r.has("values")) r.fail("missing field \"values\"");
    SweepSpec sw;
    sw.axis = read_axis(r.child("axis"));
    const Reader values = r.child("values");
    if (!values.node().is_array() || values.node().empty()) values.fail("expected a non-empty array");
    for (std::size_t i = 0; i < values.node().size(); ++i) {
      const Reader v = values.element(i);
      const double x = v.number();
      try {
        apply_axis(s, sw.axis, x);
      } catch (const ConfigError& e) {
        // Re-anchor the error at the offending value.
        v.fail(e.message());
      }
      sw.values.push_back(x);
    }
    cfg.sweep = sw;
  }

  if (top.has("phase")) {
    const Reader r = top.child("phase");
    r.require_object({"theta_se_pi", "theta_ee_pi"});
    PhaseSpec ph;
    if (r.has("theta_se_pi")) ph.theta_se = read_grid(r.child("theta_se_pi"));
    if (r.has("theta_ee_pi")) ph.theta_ee = read_grid(r.child("theta_ee_pi"));
    if (s.L_max < 3) top.fail("phase diagrams need L_max >= 3");
    if (std::holds_alternative<env::SqueezedAlternative>(s.env) || std::holds_alternative<env::List>(s.env)) {
      top.child("env").fail("phase diagrams need a uniform environment");
    }
    cfg.phase = ph;
  }

  // Final consistency check through the library types.
  try {
    s.to_scenario().validate();
  } catch (const std::exception& e) {
    top.fail(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string canonical_json(const RunConfig& cfg) {
  const ScenarioSpec& s = cfg.scenario;
  json j = {{"L_max", s.L_max},
            {"theta_ss_pi", s.theta_ss_pi},
            {"theta_se_pi", s.theta_se_pi},
            {"theta_ee_pi", s.theta_ee_pi},
            {"xi_ab", s.xi_ab},
            {"c_state", to_json(s.c_state)},
            {"env", to_json(s.env)}};
  if (cfg.sweep) j["sweep"] = {{"axis", to_string(cfg.sweep->axis)}, {"values", cfg.sweep->values}};
  if (cfg.phase) j["phase"] = {{"theta_se_pi", grid_json(cfg.phase->theta_se)}, {"theta_ee_pi", grid_json(cfg.phase->theta_ee)}};
  return j.dump();
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = canonical_json(cfg);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xf];
  }
  return hex;
}

ScenarioSpec apply_axis(const ScenarioSpec& base, SweepAxis axis, double value) {
  ScenarioSpec s = base;
  switch (axis) {
    case SweepAxis::kDeltaPhi: {
      auto* sq = std::get_if<env::SqueezedSame>(&s.env);
      if (!sq) throw ConfigError("/env", 0, "delta_phi_pi sweeps need a squeezed_same environment");
      sq->phi_pi = phi_c_pi(s.c_state) + value;
      break;
    }
    case SweepAxis::kThetaEe:
      if (value < 0.0 || value > 0.5) throw ConfigError("", 0, "theta_ee_pi must lie in [0, 0.5]");
      s.theta_ee_pi = value;
      break;
    case SweepAxis::kThetaSe:
      if (value < 0.0 || value > 0.5) throw ConfigError("", 0, "theta_se_pi must lie in [0, 0.5]");
      s.theta_se_pi = value;
      break;
    case SweepAxis::kNE: {
      auto* th = std::get_if<env::Thermal>(&s.env);
      if (!th) throw ConfigError("/env", 0, "n_E sweeps need a thermal environment");
      if (value < 0.0) throw ConfigError("", 0, "n_E must be >= 0");
      th->n = value;
      break;
    }
  }
  return s;
}

void use_paper_literal_nc(RunConfig& cfg) {
  if (auto* m = std::get_if<cstate::ThermalMatched>(&cfg.scenario.c_state)) m->paper_literal = true;
}

}  // namespace gcm::app
