#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <vector>

#include "vapor/field.hpp"

namespace vapor::io {

/// 8-bit grayscale image, row-major, row 0 at the top.
struct GrayImage {
  int width = 0, height = 0;
  std::vector<double> pixels;  ///< normalized to [0, 1]
};

/// PGM (P2 or P5) or PNG, chosen by file signature. Color PNGs are converted
/// to luminance. Throws IoError when unreadable and FormatError when malformed.
GrayImage read_image(const std::filesystem::path& path);

/// Writes values scaled by `full_scale` (max value when <= 0) as binary PGM.
void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int width,
               int height, double full_scale = 0.0);

/// Image amplitude field on the grid: image pixel (u, v) covers
/// [x0 + u s, x0 + (u+1) s) with the image centered on the grid and s the
/// pixel pitch. Each grid point takes the nearest-neighbor pixel containing
/// it, zero outside the image. Amplitude = pixel value, or {0, 1} when a
/// threshold is given. Omega_s = 0.
beamprop::FieldPair image_field(const GrayImage& image, const beamprop::TransverseGrid& grid,
                                double pixel_pitch, std::optional<double> threshold = {});

beamprop::FieldPair load_image(const std::filesystem::path& path,
                               const beamprop::TransverseGrid& grid, double pixel_pitch,
                               std::optional<double> threshold = {});

/// Interleaved little-endian complex128 (re, im) in grid order plus a JSON
/// sidecar `<stem>.json` describing the grid. Returns the sidecar contents.
nlohmann::json write_field(const std::filesystem::path& stem, const beamprop::ComplexField& field,
                           const beamprop::TransverseGrid& grid, beamprop::Space space,
                           const nlohmann::json& extra = {});

struct StoredField {
  beamprop::TransverseGrid grid;
  beamprop::Space space = beamprop::Space::Position;
  beamprop::ComplexField values;
  nlohmann::json meta;
};

StoredField read_field(const std::filesystem::path& stem);

/// |Omega|^2 as PGM, scaled to its own maximum (or `full_scale` when > 0).
void write_intensity_pgm(const std::filesystem::path& path, const beamprop::ComplexField& field,
                         const beamprop::TransverseGrid& grid, double full_scale = 0.0);

}  // namespace vapor::io
