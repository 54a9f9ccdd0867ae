#include <bit>
#include <fstream>

#include "anyon/lab.hpp"
#include "json.hpp"

namespace anyon::lab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& path, const std::vector<cplx>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::vector<unsigned char> buf(data.size() * 16);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double parts[2] = {data[i].real(), data[i].imag()};
    for (int p = 0; p < 2; ++p) {
      auto bits = std::bit_cast<std::uint64_t>(parts[p]);
      for (int b = 0; b < 8; ++b) buf[i * 16 + p * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

std::vector<cplx> read_bytes(const fs::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::vector<unsigned char> buf(count * 16);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()) || in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::Io, "unexpected size of " + path.string());
  }
  std::vector<cplx> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 16 + p * 8 + b]) << (8 * b);
      parts[p] = std::bit_cast<double>(bits);
    }
    data[i] = {parts[0], parts[1]};
  }
  return data;
}

json read_sidecar(const fs::path& bin) {
  fs::path side = bin;
  side.replace_extension(".json");
  std::ifstream in(side);
  if (!in) throw Error(ErrorKind::Io, "missing sidecar " + side.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "malformed sidecar " + side.string() + ": " + e.what());
  }
}

}  // namespace

ArtifactStore::ArtifactStore(fs::path dir, std::string config_hash) : dir_(std::move(dir)), hash_(std::move(config_hash)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
  // Artifacts of an earlier run in the same directory would be mistaken for ours.
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".csv" || ext == ".json" || ext == ".bin")) fs::remove(entry.path());
  }
}

void ArtifactStore::write_text(const std::string& name, const std::string& content) const {
  std::ofstream out(dir_ / name, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
  out << content;
}

void ArtifactStore::write_csv(const std::string& name, const std::string& header,
                              const std::vector<std::string>& rows) const {
  std::string text = "# config_hash=" + hash_ + "\n" + header + "\n";
  for (const auto& r : rows) text += r + "\n";
  write_text(name, text);
}

void ArtifactStore::save_field(const std::string& name, const WaveField& u) const {
  write_bytes(dir_ / (name + ".bin"), u.data);
  const json side = {{"kind", "wave_field"},
                     {"dtype", "complex128"},
                     {"byte_order", "little"},
                     {"layout", "row-major, index = ix * n + iy, interleaved real/imag"},
                     {"shape", {u.grid.n, u.grid.n}},
                     {"grid", {{"n", u.grid.n}, {"L", u.grid.L}}},
                     {"config_hash", hash_}};
  write_text(name + ".json", side.dump(2) + "\n");
}

void ArtifactStore::save_state(const std::string& name, const ManyBodyState& psi) const {
  write_bytes(dir_ / (name + ".bin"), psi.data);
  std::vector<int> shape(static_cast<std::size_t>(2 * psi.N), psi.grid.n);
  const json side = {{"kind", "many_body_state"},
                     {"dtype", "complex128"},
                     {"byte_order", "little"},
                     {"layout", "row-major over (x_1, y_1, ..., x_N, y_N), interleaved real/imag"},
                     {"shape", shape},
                     {"particles", psi.N},
                     {"grid", {{"n", psi.grid.n}, {"L", psi.grid.L}}},
                     {"config_hash", hash_}};
  write_text(name + ".json", side.dump(2) + "\n");
}

WaveField ArtifactStore::load_field(const fs::path& bin) {
  const json side = read_sidecar(bin);
  try {
    if (side.at("kind") != "wave_field" || side.at("dtype") != "complex128") {
      throw Error(ErrorKind::Io, "sidecar of " + bin.string() + " does not describe a complex128 wave field");
    }
    const Grid2D grid(side.at("grid").at("n").get<int>(), side.at("grid").at("L").get<double>());
    return WaveField(grid, read_bytes(bin, grid.size()));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "malformed sidecar for " + bin.string() + ": " + e.what());
  }
}

ManyBodyState ArtifactStore::load_state(const fs::path& bin) {
  const json side = read_sidecar(bin);
  try {
    if (side.at("kind") != "many_body_state") {
      throw Error(ErrorKind::Io, "sidecar of " + bin.string() + " does not describe a many-body state");
    }
    const Grid2D grid(side.at("grid").at("n").get<int>(), side.at("grid").at("L").get<double>());
    ManyBodyState psi(side.at("particles").get<int>(), grid);
    psi.data = read_bytes(bin, psi.data.size());
    return psi;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "malformed sidecar for " + bin.string() + ": " + e.what());
  }
}

}  // namespace anyon::lab
