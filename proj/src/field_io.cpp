#include <bit>
#include <fstream>

#include "vapor/errors.hpp"
#include "vapor/io.hpp"

namespace vapor::io {

static_assert(std::endian::native == std::endian::little, "field files are little-endian");

nlohmann::json write_field(const std::filesystem::path& stem, const beamprop::ComplexField& field,
                           const beamprop::TransverseGrid& grid, beamprop::Space space,
                           const nlohmann::json& extra) {
  auto bin = stem;
  bin += ".bin";
  auto side = stem;
  side += ".json";
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw IoError("cannot write " + bin.string());
    out.write(reinterpret_cast<const char*>(field.data()),
              static_cast<std::streamsize>(field.size() * sizeof(cdouble)));
    if (!out) throw IoError("write failed: " + bin.string());
  }
  nlohmann::json meta = {
      {"data", bin.filename().string()},
      {"dtype", "complex128"},
      {"layout", "row-major, index iy*nx+ix, interleaved re/im, little-endian"},
      {"nx", grid.nx},
      {"ny", grid.ny},
      {"dx", grid.dx},
      {"dy", grid.dy},
      {"x0", grid.x(0)},
      {"y0", grid.y(0)},
      {"space", space == beamprop::Space::Position ? "position" : "momentum"},
  };
  for (const auto& [k, v] : extra.items()) meta[k] = v;
  std::ofstream out(side);
  if (!out) throw IoError("cannot write " + side.string());
  out << meta.dump(2) << "\n";
  return meta;
}

StoredField read_field(const std::filesystem::path& stem) {
  auto side = stem;
  side += ".json";
  std::ifstream in(side);
  if (!in) throw IoError("cannot open " + side.string());
  StoredField f;
  try {
    f.meta = nlohmann::json::parse(in);
    f.grid = beamprop::make_grid(f.meta.at("nx").get<int>(), f.meta.at("ny").get<int>(),
                                 f.meta.at("dx").get<double>(), f.meta.at("dy").get<double>());
    f.space = f.meta.at("space").get<std::string>() == "momentum" ? beamprop::Space::Momentum
                                                                  : beamprop::Space::Position;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad field sidecar " + side.string() + ": " + e.what());
  }
  auto bin = stem;
  bin += ".bin";
  std::ifstream data(bin, std::ios::binary);
  if (!data) throw IoError("cannot open " + bin.string());
  f.values.resize(f.grid.size());
  data.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cdouble)));
  if (data.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(cdouble))) {
    throw FormatError("field data truncated: " + bin.string());
  }
  return f;
}

void write_intensity_pgm(const std::filesystem::path& path, const beamprop::ComplexField& field,
                         const beamprop::TransverseGrid& grid, double full_scale) {
  std::vector<double> in(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) in[i] = std::norm(field[i]);
  write_pgm(path, in, grid.nx, grid.ny, full_scale);
}

}  // namespace vapor::io
