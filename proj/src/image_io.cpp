#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vapor/errors.hpp"
#include "vapor/io.hpp"

namespace vapor::io {

namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Header tokens of a PNM file, skipping comments.
class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& data) : d_(data) {}

  long token() {
    skip();
    if (pos_ >= d_.size() || !std::isdigit(d_[pos_])) throw FormatError("malformed PGM header");
    long v = 0;
    while (pos_ < d_.size() && std::isdigit(d_[pos_])) {
      v = v * 10 + (d_[pos_++] - '0');
      if (v > 1'000'000'000) throw FormatError("PGM value out of range");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip() {
    while (pos_ < d_.size()) {
      if (d_[pos_] == '#') {
        while (pos_ < d_.size() && d_[pos_] != '\n') ++pos_;
      } else if (std::isspace(d_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& d_;
  std::size_t pos_ = 2;
};

GrayImage read_pgm(const std::vector<unsigned char>& data) {
  const bool binary = data[1] == '5';
  PnmCursor cur(data);
  GrayImage img;
  img.width = static_cast<int>(cur.token());
  img.height = static_cast<int>(cur.token());
  const long maxval = cur.token();
  if (img.width <= 0 || img.height <= 0) throw FormatError("PGM has empty dimensions");
  if (maxval <= 0 || maxval > 65535) throw FormatError("PGM maxval out of range");
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (binary) {
    cur.advance(1);  // single whitespace after maxval
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    if (data.size() < cur.pos() + n * bytes) throw FormatError("PGM pixel data truncated");
    const unsigned char* p = data.data() + cur.pos();
    for (std::size_t i = 0; i < n; ++i) {
      const long v = bytes == 1 ? p[i] : (p[2 * i] << 8) | p[2 * i + 1];
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = cur.token();
      if (v > maxval) throw FormatError("PGM sample exceeds maxval");
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

GrayImage read_png(const std::vector<unsigned char>& data) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
    throw FormatError(std::string("bad PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError(std::string("bad PNG: ") + image.message);
  }
  GrayImage img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.pixels.resize(buf.size());
  std::transform(buf.begin(), buf.end(), img.pixels.begin(),
                 [](unsigned char v) { return v / 255.0; });
  return img;
}

}  // namespace

GrayImage read_image(const std::filesystem::path& path) {
  const auto data = slurp(path);
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5')) {
    return read_pgm(data);
  }
  static const unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::equal(kPngSig, kPngSig + 8, data.begin())) return read_png(data);
  throw FormatError("unsupported image format: " + path.string());
}

void write_pgm(const std::filesystem::path& path, const std::vector<double>& values, int width,
               int height, double full_scale) {
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("write_pgm: size mismatch");
  }
  if (full_scale <= 0.0) {
    full_scale = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  std::vector<unsigned char> bytes(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = full_scale > 0.0 ? values[i] / full_scale : 0.0;
    bytes[i] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

beamprop::FieldPair image_field(const GrayImage& image, const beamprop::TransverseGrid& grid,
                                double pixel_pitch, std::optional<double> threshold) {
  if (!(pixel_pitch > 0.0)) throw std::invalid_argument("pixel pitch must be > 0");
  beamprop::FieldPair f;
  f.grid = grid;
  f.space = beamprop::Space::Position;
  f.omega_p.assign(grid.size(), 0.0);
  f.omega_s.assign(grid.size(), 0.0);
  const double x0 = -0.5 * image.width * pixel_pitch;
  const double y0 = -0.5 * image.height * pixel_pitch;
  for (int iy = 0; iy < grid.ny; ++iy) {
    const long v = static_cast<long>(std::floor((grid.y(iy) - y0) / pixel_pitch));
    if (v < 0 || v >= image.height) continue;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const long u = static_cast<long>(std::floor((grid.x(ix) - x0) / pixel_pitch));
      if (u < 0 || u >= image.width) continue;
      double a = image.pixels[static_cast<std::size_t>(v) * image.width + u];
      if (threshold) a = a >= *threshold ? 1.0 : 0.0;
      f.omega_p[grid.index(ix, iy)] = a;
    }
  }
  return f;
}

beamprop::FieldPair load_image(const std::filesystem::path& path,
                               const beamprop::TransverseGrid& grid, double pixel_pitch,
                               std::optional<double> threshold) {
  return image_field(read_image(path), grid, pixel_pitch, threshold);
}

}  // namespace vapor::io
