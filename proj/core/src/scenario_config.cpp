#include "adrc/scenario_config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "adrc/format.hpp"

namespace adrc {

ConfigError::ConfigError(int line, const std::string& message)
    : std::invalid_argument("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<PlantKind> kPlantNames[] = {{PlantKind::FirstOrder, "first-order"},
                                               {PlantKind::Pendulum, "pendulum"}};
constexpr EnumName<ModelKind> kModelNames[] = {
    {ModelKind::FirstOrder, "first-order"}, {ModelKind::PendulumFictitious, "pendulum-fictitious"}};
constexpr EnumName<EstimatorKind> kEstimatorNames[] = {
    {EstimatorKind::None, "none"}, {EstimatorKind::Type1, "type1"}, {EstimatorKind::Eso, "eso"}};
constexpr EnumName<ControllerKind> kControllerNames[] = {{ControllerKind::A, "A"},
                                                         {ControllerKind::B1, "B1"},
                                                         {ControllerKind::B2, "B2"},
                                                         {ControllerKind::GenericLS, "ls"},
                                                         {ControllerKind::Example1, "example1"}};
constexpr EnumName<NoiseKind> kNoiseNames[] = {{NoiseKind::Off, "off"},
                                               {NoiseKind::GaussianTruncated, "gaussian-truncated"}};

template <typename Enum, std::size_t N>
const char* enum_name(const EnumName<Enum> (&table)[N], Enum v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum parse_enum(const EnumName<Enum> (&table)[N], const std::string& text, int line) {
  for (const auto& e : table) {
    if (text == e.name) return e.value;
  }
  std::string allowed;
  for (const auto& e : table) allowed += (allowed.empty() ? "" : "|") + std::string(e.name);
  throw ConfigError(line, "expected one of " + allowed + ", got '" + text + "'");
}

double parse_number(const std::string& text, int line) {
  double v = 0.0;
  if (!parse_double(text, v)) throw ConfigError(line, "malformed number '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, int line) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), line));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::string list_text(const double* data, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? ", " : "") + format_double(data[i]);
  return s;
}

std::string list_text(const Vector& v) {
  return list_text(v.data(), static_cast<std::size_t>(v.size()));
}

using Setter = void (*)(Scenario&, const std::string&, int);

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"plant",
       {{"kind", [](Scenario& s, const std::string& v, int l) { s.plant = parse_enum(kPlantNames, v, l); }},
        {"disturbance_onset",
         [](Scenario& s, const std::string& v, int l) { s.disturbance_onset = parse_number(v, l); }},
        {"x0", [](Scenario& s, const std::string& v, int l) { s.x0 = to_vector(parse_list(v, l)); }}}},
      {"model",
       {{"kind", [](Scenario& s, const std::string& v, int l) { s.model = parse_enum(kModelNames, v, l); }},
        {"alpha", [](Scenario& s, const std::string& v, int l) { s.alpha = parse_number(v, l); }}}},
      {"estimator",
       {{"kind",
         [](Scenario& s, const std::string& v, int l) { s.estimator = parse_enum(kEstimatorNames, v, l); }},
        {"observer_k", [](Scenario& s, const std::string& v, int l) { s.observer_k = parse_number(v, l); }},
        {"poles", [](Scenario& s, const std::string& v, int l) { s.poles = parse_list(v, l); }},
        {"tau", [](Scenario& s, const std::string& v, int l) { s.tau = parse_number(v, l); }},
        {"xhat0", [](Scenario& s, const std::string& v, int l) { s.xhat0 = to_vector(parse_list(v, l)); }}}},
      {"controller",
       {{"kind",
         [](Scenario& s, const std::string& v, int l) { s.controller = parse_enum(kControllerNames, v, l); }},
        {"k", [](Scenario& s, const std::string& v, int l) { s.k = parse_number(v, l); }},
        {"k1", [](Scenario& s, const std::string& v, int l) { s.k1 = parse_number(v, l); }},
        {"k2", [](Scenario& s, const std::string& v, int l) { s.k2 = parse_number(v, l); }},
        {"umax", [](Scenario& s, const std::string& v, int l) { s.umax = parse_number(v, l); }}}},
      {"reference",
       {{"step", [](Scenario& s, const std::string& v, int l) { s.reference_step = parse_number(v, l); }},
        {"xr0", [](Scenario& s, const std::string& v, int l) { s.xr0 = to_vector(parse_list(v, l)); }}}},
      {"sim",
       {{"t0", [](Scenario& s, const std::string& v, int l) { s.t0 = parse_number(v, l); }},
        {"tf", [](Scenario& s, const std::string& v, int l) { s.tf = parse_number(v, l); }},
        {"dt", [](Scenario& s, const std::string& v, int l) { s.dt = parse_number(v, l); }}}},
      {"noise",
       {{"kind", [](Scenario& s, const std::string& v, int l) { s.noise.kind = parse_enum(kNoiseNames, v, l); }},
        {"variance", [](Scenario& s, const std::string& v, int l) { s.noise.variance = parse_number(v, l); }},
        {"bound", [](Scenario& s, const std::string& v, int l) { s.noise.bound = parse_number(v, l); }},
        {"seed",
         [](Scenario& s, const std::string& v, int l) {
           std::uint64_t seed = 0;
           const auto res = std::from_chars(v.data(), v.data() + v.size(), seed);
           if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) {
             throw ConfigError(l, "malformed seed '" + v + "'");
           }
           s.noise.seed = seed;
         }}}},
  };
  return table;
}

}  // namespace

Scenario parse_scenario_config(const std::string& text) {
  Scenario s;
  bool x0_given = false;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!schema().count(section)) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    if (section.empty()) throw ConfigError(line, "key outside of any section");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");
    }
    it->second(s, value, line);
    if (section == "plant" && key == "x0") x0_given = true;
  }
  if (!x0_given) s.x0 = Vector::Zero(s.plant == PlantKind::Pendulum ? 2 : 1);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line, e.what());
  }
  return s;
}

std::string dump_scenario_config(const Scenario& s) {
  std::ostringstream os;
  os << "[plant]\n"
     << "kind = " << enum_name(kPlantNames, s.plant) << '\n'
     << "disturbance_onset = " << format_double(s.disturbance_onset) << '\n'
     << "x0 = " << list_text(s.x0) << "\n\n"
     << "[model]\n"
     << "kind = " << enum_name(kModelNames, s.model) << '\n'
     << "alpha = " << format_double(s.alpha) << "\n\n"
     << "[estimator]\n"
     << "kind = " << enum_name(kEstimatorNames, s.estimator) << '\n'
     << "observer_k = " << format_double(s.observer_k) << '\n'
     << "poles = " << list_text(s.poles.data(), s.poles.size()) << '\n'
     << "tau = " << format_double(s.tau) << '\n'
     << "xhat0 = " << list_text(s.xhat0) << "\n\n"
     << "[controller]\n"
     << "kind = " << enum_name(kControllerNames, s.controller) << '\n'
     << "k = " << format_double(s.k) << '\n'
     << "k1 = " << format_double(s.k1) << '\n'
     << "k2 = " << format_double(s.k2) << '\n'
     << "umax = " << format_double(s.umax) << "\n\n"
     << "[reference]\n"
     << "step = " << format_double(s.reference_step) << '\n'
     << "xr0 = " << list_text(s.xr0) << "\n\n"
     << "[sim]\n"
     << "t0 = " << format_double(s.t0) << '\n'
     << "tf = " << format_double(s.tf) << '\n'
     << "dt = " << format_double(s.dt) << "\n\n"
     << "[noise]\n"
     << "kind = " << enum_name(kNoiseNames, s.noise.kind) << '\n'
     << "variance = " << format_double(s.noise.variance) << '\n'
     << "bound = " << format_double(s.noise.bound) << '\n'
     << "seed = " << s.noise.seed << '\n';
  return os.str();
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config(buf.str());
}

}  // namespace adrc
