#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anyon/css_solver.hpp"
#include "anyon/error.hpp"
#include "anyon/initial.hpp"
#include "anyon/manybody.hpp"

namespace anyon::lab {

std::string_view version();

enum class Subcommand { Evolve, SweepR, ManyBody, Verify, HierarchyCheck };

std::string_view to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(std::string_view name);

// Exit codes: 0 ok, 2 configuration or I/O error, 3 blow-up or non-finite
// values, 4 invariant or boundary violation (including failed checks), 5 budget exceeded.
int exit_code_for(ErrorKind kind);

struct InitialCondition {
  enum class Kind { Gaussian, GaussianSum, File };
  Kind kind = Kind::Gaussian;
  GaussianSpec gaussian{};
  std::vector<GaussianSpec> packets;  // GaussianSum
  std::vector<double> weights;
  std::string path;
};

struct SweepSettings {
  std::vector<double> radii{0.4, 0.2, 0.1, 0.05};
  double reference_R = 0.0;
};

struct ManyBodySettings {
  enum class Mode { Dynamics, EnergyGap };
  Mode mode = Mode::Dynamics;
  int N = 2;
  std::vector<int> particle_numbers{2, 3};
  double dt = 0.05;
  int krylov_dim = 30;
  double tolerance = 1e-12;
  Displacement displacement = Displacement::MinimalImage;
  std::size_t budget = std::size_t{1} << 24;
};

struct VerifySettings {
  std::vector<std::string> checks{"kernel-norms", "gauge-oracle", "two-body", "three-body", "gauge-bounds", "projectors"};
  int samples = 100;
  std::vector<double> radii{0.3, 0.1, 0.03};
  Grid2D two_body_grid{16, 2.0};
  Grid2D three_body_grid{8, 2.0};
  Grid2D projector_grid{8, 4.0};
};

struct HierarchySettings {
  double perturbation = 0.5;
};

struct Monitors {
  double mass_drift_limit = 1e-10;
  double energy_drift_limit = 1e-6;
  double manybody_energy_drift_limit = 1e-8;
  double closure_tolerance = 1e-8;
};

struct RunConfig {
  Grid2D grid{256, 20.0};
  CssParams params{};
  InitialCondition initial{};
  SweepSettings sweep{};
  ManyBodySettings manybody{};
  VerifySettings verify{};
  HierarchySettings hierarchy{};
  Monitors monitors{};
  std::string output = "runs/default";
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;

  std::vector<std::string> warnings;  // recorded during parsing
};

// Reads and validates a JSON config. Errors are ErrorKind::Config and name the
// offending field. Warnings specific to `sub` are recorded in the result.
RunConfig parse_config(const std::filesystem::path& path, Subcommand sub);
RunConfig parse_config_text(const std::string& text, Subcommand sub);

// Normalized JSON echo with every default filled in.
std::string normalized_json(const RunConfig& config);
// FNV-1a 64 of the normalized echo, excluding output location and threading.
std::string config_hash(const RunConfig& config);

struct Overrides {
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<bool> quiet;
};

// ANYONLAB_OUT, ANYONLAB_SEED, ANYONLAB_THREADS, ANYONLAB_QUIET.
Overrides overrides_from_environment();
// Precedence: flags over environment over file.
void apply_overrides(RunConfig& config, const Overrides& env, const Overrides& flags);

class ArtifactStore {
 public:
  ArtifactStore(std::filesystem::path dir, std::string config_hash);

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& hash() const { return hash_; }

  void write_text(const std::string& name, const std::string& content) const;
  // CSV with a leading "# config_hash=..." comment line.
  void write_csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) const;
  // Raw little-endian complex128 (interleaved re/im) plus a JSON sidecar.
  void save_field(const std::string& name, const WaveField& u) const;
  void save_state(const std::string& name, const ManyBodyState& psi) const;

  static WaveField load_field(const std::filesystem::path& bin);
  static ManyBodyState load_state(const std::filesystem::path& bin);

 private:
  std::filesystem::path dir_;
  std::string hash_;
};

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::filesystem::path directory;
};

// Executes one experiment and writes config.json, meta.json and the
// experiment outputs into config.output. Module errors are mapped to exit codes.
RunResult run(Subcommand sub, const RunConfig& config);

}  // namespace anyon::lab
