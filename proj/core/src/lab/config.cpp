#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "anyon/lab.hpp"
#include "json.hpp"

namespace anyon::lab {

using nlohmann::json;

std::string_view version() { return ANYONLAB_VERSION; }

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Evolve: return "evolve";
    case Subcommand::SweepR: return "sweep-R";
    case Subcommand::ManyBody: return "manybody";
    case Subcommand::Verify: return "verify";
    case Subcommand::HierarchyCheck: return "hierarchy-check";
  }
  return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (auto s : {Subcommand::Evolve, Subcommand::SweepR, Subcommand::ManyBody, Subcommand::Verify,
                 Subcommand::HierarchyCheck}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Io: return 2;
    case ErrorKind::BlowUp:
    case ErrorKind::NonFinite: return 3;
    case ErrorKind::Budget: return 5;
    default: return 4;
  }
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& constraint) {
  throw Error(ErrorKind::Config, "config field \"" + field + "\": " + constraint);
}

// Reads fields from a JSON object and rejects keys that were never read.
class Section {
 public:
  Section(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) fail(prefix_.empty() ? "<root>" : prefix_, "must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(path(key), "unknown field");
    }
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const std::string& key) { return j_.at(key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path(key), "must be finite");
    return d;
  }
  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "must be an integer");
    return v.get<long long>();
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(path(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key), "must be a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path(key), "must be a boolean");
    return v.get<bool>();
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(path(key), "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(path(key), "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  Vec2 vec2(const std::string& key, Vec2 fallback) {
    const auto v = numbers(key, {fallback.x, fallback.y});
    if (v.size() != 2) fail(path(key), "must have two entries");
    return {v[0], v[1]};
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

Grid2D read_grid(Section& parent, const std::string& key, Grid2D fallback) {
  if (!parent.has(key)) return fallback;
  Section s(parent.at(key), parent.path(key));
  const long long n = s.integer("n", fallback.n);
  const double L = s.number("L", fallback.L);
  if (!is_power_of_two(n) || n < 8 || n > (1 << 14)) fail(s.path("n"), "must be a power of two >= 8");
  if (!(L > 0.0)) fail(s.path("L"), "must be > 0");
  return Grid2D(static_cast<int>(n), L);
}

json grid_json(const Grid2D& g) { return {{"n", g.n}, {"L", g.L}}; }

std::string stepper_name(Stepper s) { return s == Stepper::Strang ? "strang" : "ifrk4"; }

const std::set<std::string> kKnownChecks{"kernel-norms", "gauge-oracle", "two-body",
                                         "three-body",   "gauge-bounds",   "projectors"};

}  // namespace

RunConfig parse_config_text(const std::string& text, Subcommand sub) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  {
    Section s(root, "");
    c.grid = read_grid(s, "grid", c.grid);

    if (s.has("params")) {
      Section p(s.at("params"), "params");
      c.params.beta = p.number("beta", c.params.beta);
      const double R = p.number("R", 0.0);
      if (R < 0.0) fail("params.R", "must be >= 0");
      c.params.R = SmearingRadius(R);
      c.params.g = p.number("g", c.params.g);
      c.params.dt = p.number("dt", c.params.dt);
      if (!(c.params.dt > 0.0)) fail("params.dt", "must be > 0");
      c.params.T = p.number("T", c.params.T);
      if (c.params.T < 0.0) fail("params.T", "must be >= 0");
      const long long se = p.integer("sample_every", c.params.sample_every);
      if (se < 1) fail("params.sample_every", "must be >= 1");
      c.params.sample_every = static_cast<int>(se);
      const std::string st = p.text("stepper", "ifrk4");
      if (st == "ifrk4") c.params.stepper = Stepper::IntegratingFactorRK4;
      else if (st == "strang") c.params.stepper = Stepper::Strang;
      else fail("params.stepper", "must be \"ifrk4\" or \"strang\"");
      c.params.beta_warn_threshold = p.number("beta_warn_threshold", c.params.beta_warn_threshold);
      c.params.h2_growth_warn_factor = p.number("h2_growth_warn_factor", c.params.h2_growth_warn_factor);
    }

    if (s.has("initial")) {
      Section i(s.at("initial"), "initial");
      const std::string type = i.text("type", "gaussian");
      if (type == "gaussian") {
        c.initial.kind = InitialCondition::Kind::Gaussian;
        c.initial.gaussian.sigma = i.number("sigma", 1.0);
        if (!(c.initial.gaussian.sigma > 0.0)) fail("initial.sigma", "must be > 0");
        c.initial.gaussian.center = i.vec2("center", {});
        c.initial.gaussian.momentum = i.vec2("momentum", {});
        c.initial.gaussian.focus_time = i.number("focus_time", 0.0);
      } else if (type == "gaussian-sum") {
        c.initial.kind = InitialCondition::Kind::GaussianSum;
        if (!i.has("packets") || !i.at("packets").is_array() || i.at("packets").empty()) {
          fail("initial.packets", "must be a non-empty array of packets");
        }
        const json& arr = i.at("packets");
        for (std::size_t k = 0; k < arr.size(); ++k) {
          Section q(arr[k], "initial.packets[" + std::to_string(k) + "]");
          GaussianSpec g;
          c.initial.weights.push_back(q.number("weight", 1.0));
          g.sigma = q.number("sigma", 1.0);
          if (!(g.sigma > 0.0)) fail(q.path("sigma"), "must be > 0");
          g.center = q.vec2("center", {});
          g.momentum = q.vec2("momentum", {});
          g.focus_time = q.number("focus_time", 0.0);
          c.initial.packets.push_back(g);
        }
      } else if (type == "file") {
        c.initial.kind = InitialCondition::Kind::File;
        c.initial.path = i.text("path", "");
        if (c.initial.path.empty()) fail("initial.path", "required for type \"file\"");
      } else {
        fail("initial.type", "must be \"gaussian\", \"gaussian-sum\" or \"file\"");
      }
    }

    if (s.has("sweep")) {
      Section w(s.at("sweep"), "sweep");
      c.sweep.radii = w.numbers("radii", c.sweep.radii);
      c.sweep.reference_R = w.number("reference_R", c.sweep.reference_R);
      if (c.sweep.radii.empty()) fail("sweep.radii", "must not be empty");
      for (std::size_t k = 0; k < c.sweep.radii.size(); ++k) {
        if (!(c.sweep.radii[k] >= 0.0)) fail("sweep.radii", "entries must be >= 0");
        if (k > 0 && !(c.sweep.radii[k] < c.sweep.radii[k - 1])) fail("sweep.radii", "must be sorted decreasing");
      }
      if (c.sweep.reference_R < 0.0) fail("sweep.reference_R", "must be >= 0");
    }

    if (s.has("manybody")) {
      Section m(s.at("manybody"), "manybody");
      const std::string mode = m.text("mode", "dynamics");
      if (mode == "dynamics") c.manybody.mode = ManyBodySettings::Mode::Dynamics;
      else if (mode == "energy-gap") c.manybody.mode = ManyBodySettings::Mode::EnergyGap;
      else fail("manybody.mode", "must be \"dynamics\" or \"energy-gap\"");
      const long long N = m.integer("N", c.manybody.N);
      if (N < 2 || N > 3) fail("manybody.N", "must be 2 or 3");
      c.manybody.N = static_cast<int>(N);
      const auto pn = m.numbers("particle_numbers", {2.0, 3.0});
      c.manybody.particle_numbers.clear();
      for (double v : pn) {
        if (v != 2.0 && v != 3.0) fail("manybody.particle_numbers", "entries must be 2 or 3");
        c.manybody.particle_numbers.push_back(static_cast<int>(v));
      }
      c.manybody.dt = m.number("dt", c.manybody.dt);
      if (!(c.manybody.dt > 0.0)) fail("manybody.dt", "must be > 0");
      const long long kd = m.integer("krylov_dim", c.manybody.krylov_dim);
      if (kd < 2 || kd > 200) fail("manybody.krylov_dim", "must lie in [2, 200]");
      c.manybody.krylov_dim = static_cast<int>(kd);
      c.manybody.tolerance = m.number("tolerance", c.manybody.tolerance);
      if (!(c.manybody.tolerance > 0.0)) fail("manybody.tolerance", "must be > 0");
      const std::string disp = m.text("displacement", "minimal-image");
      if (disp == "minimal-image") c.manybody.displacement = Displacement::MinimalImage;
      else if (disp == "free-space") c.manybody.displacement = Displacement::FreeSpace;
      else fail("manybody.displacement", "must be \"minimal-image\" or \"free-space\"");
      const long long budget = m.integer("budget", static_cast<long long>(c.manybody.budget));
      if (budget < 1) fail("manybody.budget", "must be positive");
      c.manybody.budget = static_cast<std::size_t>(budget);
    }

    if (s.has("verify")) {
      Section v(s.at("verify"), "verify");
      if (v.has("checks")) {
        const json& arr = v.at("checks");
        if (!arr.is_array()) fail("verify.checks", "must be an array of strings");
        c.verify.checks.clear();
        for (const auto& e : arr) {
          if (!e.is_string() || !kKnownChecks.count(e.get<std::string>())) {
            fail("verify.checks", "unknown check name");
          }
          c.verify.checks.push_back(e.get<std::string>());
        }
      }
      const long long samples = v.integer("samples", c.verify.samples);
      if (samples < 1) fail("verify.samples", "must be >= 1");
      c.verify.samples = static_cast<int>(samples);
      c.verify.radii = v.numbers("radii", c.verify.radii);
      for (std::size_t k = 0; k < c.verify.radii.size(); ++k) {
        const double r = c.verify.radii[k];
        if (!(r > 0.0 && r < std::exp(-1.0))) fail("verify.radii", "entries must satisfy 0 < R < 1/e");
        if (k > 0 && !(r < c.verify.radii[k - 1])) fail("verify.radii", "must be sorted decreasing");
      }
      if (c.verify.radii.empty()) fail("verify.radii", "must not be empty");
      c.verify.two_body_grid = read_grid(v, "two_body_grid", c.verify.two_body_grid);
      c.verify.three_body_grid = read_grid(v, "three_body_grid", c.verify.three_body_grid);
      c.verify.projector_grid = read_grid(v, "projector_grid", c.verify.projector_grid);
    }

    if (s.has("hierarchy")) {
      Section h(s.at("hierarchy"), "hierarchy");
      c.hierarchy.perturbation = h.number("perturbation", c.hierarchy.perturbation);
    }

    if (s.has("monitors")) {
      Section m(s.at("monitors"), "monitors");
      c.monitors.mass_drift_limit = m.number("mass_drift_limit", c.monitors.mass_drift_limit);
      c.monitors.energy_drift_limit = m.number("energy_drift_limit", c.monitors.energy_drift_limit);
      c.monitors.manybody_energy_drift_limit =
          m.number("manybody_energy_drift_limit", c.monitors.manybody_energy_drift_limit);
      c.monitors.closure_tolerance = m.number("closure_tolerance", c.monitors.closure_tolerance);
    }

    c.output = s.text("output", c.output);
    c.seed = s.unsigned_integer("seed", c.seed);
    const long long threads = s.integer("threads", c.threads);
    if (threads < 1) fail("threads", "must be >= 1");
    c.threads = static_cast<int>(threads);
    c.quiet = s.boolean("quiet", c.quiet);
  }

  const double R = c.params.R.value();
  if (sub == Subcommand::Verify && !(R > 0.0 && R < std::exp(-1.0))) {
    c.warnings.push_back("params.R = " + std::to_string(R) +
                         " lies outside 0 < R < 1/e, where the |log R| operator bounds apply");
  }
  if ((sub == Subcommand::ManyBody || sub == Subcommand::HierarchyCheck) && c.params.R.is_point()) {
    fail("params.R", "must be > 0 for " + std::string(to_string(sub)));
  }
  if (sub == Subcommand::ManyBody && c.manybody.mode == ManyBodySettings::Mode::Dynamics) {
    const double ratio = c.manybody.dt / c.params.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
      fail("manybody.dt", "must be a positive integer multiple of params.dt");
    }
  }
  return c;
}

RunConfig parse_config(const std::filesystem::path& path, Subcommand sub) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "config file not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), sub);
}

namespace {

json to_json(const RunConfig& c, bool for_hash) {
  json j;
  j["grid"] = grid_json(c.grid);
  j["params"] = {{"beta", c.params.beta},
                 {"R", c.params.R.value()},
                 {"g", c.params.g},
                 {"dt", c.params.dt},
                 {"T", c.params.T},
                 {"sample_every", c.params.sample_every},
                 {"stepper", stepper_name(c.params.stepper)},
                 {"beta_warn_threshold", c.params.beta_warn_threshold},
                 {"h2_growth_warn_factor", c.params.h2_growth_warn_factor}};
  if (c.initial.kind == InitialCondition::Kind::Gaussian) {
    const auto& g = c.initial.gaussian;
    j["initial"] = {{"type", "gaussian"},
                    {"sigma", g.sigma},
                    {"center", {g.center.x, g.center.y}},
                    {"momentum", {g.momentum.x, g.momentum.y}},
                    {"focus_time", g.focus_time}};
  } else if (c.initial.kind == InitialCondition::Kind::GaussianSum) {
    json arr = json::array();
    for (std::size_t k = 0; k < c.initial.packets.size(); ++k) {
      const auto& g = c.initial.packets[k];
      arr.push_back({{"weight", c.initial.weights[k]},
                     {"sigma", g.sigma},
                     {"center", {g.center.x, g.center.y}},
                     {"momentum", {g.momentum.x, g.momentum.y}},
                     {"focus_time", g.focus_time}});
    }
    j["initial"] = {{"type", "gaussian-sum"}, {"packets", arr}};
  } else {
    j["initial"] = {{"type", "file"}, {"path", c.initial.path}};
  }
  j["sweep"] = {{"radii", c.sweep.radii}, {"reference_R", c.sweep.reference_R}};
  j["manybody"] = {{"mode", c.manybody.mode == ManyBodySettings::Mode::Dynamics ? "dynamics" : "energy-gap"},
                   {"N", c.manybody.N},
                   {"particle_numbers", c.manybody.particle_numbers},
                   {"dt", c.manybody.dt},
                   {"krylov_dim", c.manybody.krylov_dim},
                   {"tolerance", c.manybody.tolerance},
                   {"displacement",
                    c.manybody.displacement == Displacement::MinimalImage ? "minimal-image" : "free-space"},
                   {"budget", c.manybody.budget}};
  j["verify"] = {{"checks", c.verify.checks},
                 {"samples", c.verify.samples},
                 {"radii", c.verify.radii},
                 {"two_body_grid", grid_json(c.verify.two_body_grid)},
                 {"three_body_grid", grid_json(c.verify.three_body_grid)},
                 {"projector_grid", grid_json(c.verify.projector_grid)}};
  j["hierarchy"] = {{"perturbation", c.hierarchy.perturbation}};
  j["monitors"] = {{"mass_drift_limit", c.monitors.mass_drift_limit},
                   {"energy_drift_limit", c.monitors.energy_drift_limit},
                   {"manybody_energy_drift_limit", c.monitors.manybody_energy_drift_limit},
                   {"closure_tolerance", c.monitors.closure_tolerance}};
  j["seed"] = c.seed;
  if (!for_hash) {
    j["output"] = c.output;
    j["threads"] = c.threads;
    j["quiet"] = c.quiet;
  }
  return j;
}

}  // namespace

std::string normalized_json(const RunConfig& config) { return to_json(config, false).dump(2) + "\n"; }

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config, true).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << h;
  return s.str();
}

Overrides overrides_from_environment() {
  Overrides o;
  if (const char* v = std::getenv("ANYONLAB_OUT"); v && *v) o.output = v;
  if (const char* v = std::getenv("ANYONLAB_SEED"); v && *v) {
    char* end = nullptr;
    const unsigned long long s = std::strtoull(v, &end, 10);
    if (*end != '\0') throw Error(ErrorKind::Config, "ANYONLAB_SEED must be an unsigned integer");
    o.seed = s;
  }
  if (const char* v = std::getenv("ANYONLAB_THREADS"); v && *v) {
    char* end = nullptr;
    const long t = std::strtol(v, &end, 10);
    if (*end != '\0' || t < 1) throw Error(ErrorKind::Config, "ANYONLAB_THREADS must be a positive integer");
    o.threads = static_cast<int>(t);
  }
  if (const char* v = std::getenv("ANYONLAB_QUIET"); v && *v) {
    const std::string s(v);
    o.quiet = !(s == "0" || s == "false");
  }
  return o;
}

void apply_overrides(RunConfig& config, const Overrides& env, const Overrides& flags) {
  for (const Overrides* o : {&env, &flags}) {
    if (o->output) config.output = *o->output;
    if (o->seed) config.seed = *o->seed;
    if (o->threads) {
      if (*o->threads < 1) throw Error(ErrorKind::Config, "threads must be >= 1");
      config.threads = *o->threads;
    }
    if (o->quiet) config.quiet = *o->quiet;
  }
}

}  // namespace anyon::lab
