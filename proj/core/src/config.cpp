#include "hvlab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hvl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value '" + s + "' for " + what);
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value '" + s + "' for " + what);
  }
}

std::vector<double> to_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, what));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + what);
  return out;
}

std::vector<int> to_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (double v : to_double_list(s, what)) out.push_back(static_cast<int>(v));
  return out;
}

// Every key the schema knows about; anything else is a hard error.
const std::map<std::string, std::set<std::string>> kSchema = {
    {"run", {"d", "hbar_list", "T", "dt", "kinetic_factor", "force_sign", "workers"}},
    {"grid", {"L", "nx", "nx_list", "vmax", "nv"}},
    {"potential", {"name", "a", "mu", "eps", "width", "coupling"}},
    {"initial",
     {"profile", "x0", "v0", "sigma_x", "sigma_v", "edge_scale", "edge_scale_x", "edge_power",
      "taper_v1", "taper_v2"}},
    {"output", {"directory", "cadence"}},
};

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile f;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config: malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      f.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    if (section.empty()) throw ConfigError("config: key before any [section] at line " + std::to_string(lineno));
    f.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has(const std::string& sec, const std::string& key) const {
  auto it = sections.find(sec);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& sec, const std::string& key) const {
  if (!has(sec, key)) throw ConfigError("config: missing key [" + sec + "] " + key);
  return sections.at(sec).at(key);
}

std::string ConfigFile::get_or(const std::string& sec, const std::string& key,
                               const std::string& dflt) const {
  return has(sec, key) ? sections.at(sec).at(key) : dflt;
}

void ConfigFile::override_key(const std::string& sec, const std::string& key,
                              const std::string& value) {
  sections[sec][key] = value;
}

void apply_env_overrides(ConfigFile& f, const std::string& prefix) {
  for (const auto& [sec, keys] : kSchema)
    for (const auto& key : keys) {
      std::string name = prefix + sec + "_" + key;
      for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (const char* value = std::getenv(name.c_str())) f.override_key(sec, key, value);
    }
}

RunConfig RunConfig::from_file(const ConfigFile& f) {
  for (const auto& [sec, keys] : f.sections) {
    auto it = kSchema.find(sec);
    if (it == kSchema.end()) throw ConfigError("config: unknown section [" + sec + "]");
    for (const auto& [key, value] : keys) {
      (void)value;
      if (!it->second.count(key)) throw ConfigError("config: unknown key [" + sec + "] " + key);
    }
  }

  RunConfig c;
  if (f.has("run", "d")) c.convention.dimension = to_int(f.get("run", "d"), "run.d");
  if (f.has("run", "kinetic_factor"))
    c.convention.kinetic_factor = to_double(f.get("run", "kinetic_factor"), "run.kinetic_factor");
  if (f.has("run", "force_sign"))
    c.convention.force_sign = to_int(f.get("run", "force_sign"), "run.force_sign");
  c.hbar_list = to_double_list(f.get("run", "hbar_list"), "run.hbar_list");
  c.time_horizon = to_double(f.get("run", "T"), "run.T");
  c.dt = to_double(f.get("run", "dt"), "run.dt");
  if (f.has("run", "workers")) c.workers = to_int(f.get("run", "workers"), "run.workers");

  c.grid_length = to_double(f.get("grid", "L"), "grid.L");
  c.nx = to_int(f.get("grid", "nx"), "grid.nx");
  if (f.has("grid", "nx_list")) c.nx_list = to_int_list(f.get("grid", "nx_list"), "grid.nx_list");
  c.vmax = to_double(f.get_or("grid", "vmax", "0"), "grid.vmax");
  c.nv = to_int(f.get_or("grid", "nv", "0"), "grid.nv");

  if (f.has("potential", "name")) c.potential.name = f.get("potential", "name");
  if (f.has("potential", "a")) c.potential.a = to_double(f.get("potential", "a"), "potential.a");
  if (f.has("potential", "mu")) c.potential.mu = to_double(f.get("potential", "mu"), "potential.mu");
  if (f.has("potential", "eps")) c.potential.eps = to_double(f.get("potential", "eps"), "potential.eps");
  if (f.has("potential", "width"))
    c.potential.width = to_double(f.get("potential", "width"), "potential.width");
  if (f.has("potential", "coupling"))
    c.potential.coupling = to_double(f.get("potential", "coupling"), "potential.coupling");

  if (f.has("initial", "profile")) c.initial.profile = f.get("initial", "profile");
  if (f.has("initial", "x0")) c.initial.x0 = to_double(f.get("initial", "x0"), "initial.x0");
  if (f.has("initial", "v0")) c.initial.v0 = to_double(f.get("initial", "v0"), "initial.v0");
  if (f.has("initial", "sigma_x"))
    c.initial.sigma_x = to_double(f.get("initial", "sigma_x"), "initial.sigma_x");
  if (f.has("initial", "sigma_v"))
    c.initial.sigma_v = to_double(f.get("initial", "sigma_v"), "initial.sigma_v");
  if (f.has("initial", "edge_scale"))
    c.initial.edge_scale = to_double(f.get("initial", "edge_scale"), "initial.edge_scale");
  if (f.has("initial", "edge_scale_x"))
    c.initial.edge_scale_x = to_double(f.get("initial", "edge_scale_x"), "initial.edge_scale_x");
  if (f.has("initial", "edge_power"))
    c.initial.edge_power = to_double(f.get("initial", "edge_power"), "initial.edge_power");
  if (f.has("initial", "taper_v1"))
    c.initial.taper_v1 = to_double(f.get("initial", "taper_v1"), "initial.taper_v1");
  if (f.has("initial", "taper_v2"))
    c.initial.taper_v2 = to_double(f.get("initial", "taper_v2"), "initial.taper_v2");

  if (f.has("output", "directory")) c.output_dir = f.get("output", "directory");
  if (f.has("output", "cadence")) c.cadence = to_int(f.get("output", "cadence"), "output.cadence");

  c.validate();
  return c;
}

void RunConfig::validate() const {
  convention.validate();
  if (hbar_list.empty()) throw ConfigError("config: hbar_list must not be empty");
  for (double h : hbar_list)
    if (h <= 0.0) throw ConfigError("config: hbar must be positive");
  if (time_horizon <= 0.0) throw ConfigError("config: T must be positive");
  if (dt <= 0.0) throw ConfigError("config: dt must be positive");
  if (dt > time_horizon) throw ConfigError("config: dt exceeds time horizon T");
  if (!nx_list.empty() && nx_list.size() != hbar_list.size())
    throw ConfigError("config: nx_list length must match hbar_list");
  if (cadence < 1) throw ConfigError("config: cadence must be >= 1");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
}

RunContext build_run(const RunConfig& cfg, double hbar, int nx_override) {
  cfg.validate();
  RunContext ctx;
  ctx.convention = cfg.convention;
  ctx.hbar = hbar;
  const int d = cfg.convention.dimension;
  ctx.n_particles = std::llround(std::pow(hbar, -d));
  ctx.grid = SpatialGrid(cfg.grid_length, nx_override > 0 ? nx_override : cfg.nx);
  ctx.time_horizon = cfg.time_horizon;
  ctx.dt = cfg.dt;
  ctx.cadence = cfg.cadence;

  const PhaseGrid induced = wigner_induced_grid(ctx.grid, hbar);
  if (cfg.vmax <= 0.0) {
    ctx.phase_grid = induced;
  } else {
    const int nv = cfg.nv > 0 ? cfg.nv : ctx.grid.npoints;
    ctx.phase_grid = PhaseGrid(ctx.grid, cfg.vmax, nv);
    if (induced.vmax > cfg.vmax)
      throw ConfigError("config: Wigner-induced velocity extent " + std::to_string(induced.vmax) +
                        " exceeds vmax " + std::to_string(cfg.vmax));
    // Half the induced extent is where the comparison actually lives; if the
    // requested vmax exceeds it the kinetic grid resolves velocities the
    // quantum side cannot represent.
    if (0.5 * induced.vmax < cfg.vmax)
      ctx.warnings.push_back("wigner-induced v-range " + std::to_string(0.5 * induced.vmax) +
                             " below requested vmax " + std::to_string(cfg.vmax));
  }
  return ctx;
}

std::string RunContext::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << convention.dimension << ";kf=" << convention.kinetic_factor
     << ";fs=" << convention.force_sign << ";hbar=" << hbar << ";N=" << n_particles
     << ";L=" << grid.length << ";nx=" << grid.npoints << ";vmax=" << phase_grid.vmax
     << ";nv=" << phase_grid.nv << ";T=" << time_horizon << ";dt=" << dt << ";cadence=" << cadence;
  for (const auto& w : warnings) os << ";warn=" << w;
  return os.str();
}

}  // namespace hvl
