#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "awmi/error.hpp"
#include "awmi/raster.hpp"
#include "awmi/report.hpp"

namespace awmi {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int pnm_int(std::istream& in, const fs::path& path) {
  const std::string tok = pnm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed PGM header in " + path.string());
  }
}

Raster load_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P2" && magic != "P5") throw IoError("unsupported PNM variant '" + magic + "' in " + path.string());
  const int w = pnm_int(in, path);
  const int h = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (w <= 0 || h <= 0) throw IoError("zero-dimension image " + path.string());
  if (maxval <= 0 || maxval > 65535) throw IoError("bad PGM maxval in " + path.string());
  std::vector<double> vals(static_cast<std::size_t>(w) * h);
  if (magic == "P2") {
    for (double& v : vals) {
      const int x = pnm_int(in, path);
      if (x < 0 || x > maxval) throw IoError("PGM sample out of range in " + path.string());
      v = static_cast<double>(x) / maxval;
    }
  } else {
    const bool wide = maxval > 255;
    for (double& v : vals) {
      int x = in.get();
      if (wide) x = (x << 8) | in.get();
      if (!in) throw IoError("truncated PGM data in " + path.string());
      if (x > maxval) throw IoError("PGM sample out of range in " + path.string());
      v = static_cast<double>(x) / maxval;
    }
  }
  return Raster(w, h, std::move(vals));
}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

Raster load_png(const fs::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("not a PNG file: " + path.string());
  }
  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw IoError("libpng initialisation failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw IoError("libpng initialisation failed");

  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0;
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  std::size_t rowbytes = 0;
  // libpng reports errors by longjmp; nothing with a destructor is created between here and the end of reading.
  if (setjmp(png_jmpbuf(g.png))) throw IoError("corrupt PNG " + path.string());
  png_init_io(g.png, file.get());
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);
  png_get_IHDR(g.png, g.info, &w, &h, &depth, &color, nullptr, nullptr, nullptr);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_strip_alpha(g.png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(g.png);
  if (depth == 16) png_set_swap(g.png);  // little-endian 16-bit samples
  png_read_update_info(g.png, g.info);
  const int channels = png_get_channels(g.png, g.info);
  const int out_depth = png_get_bit_depth(g.png, g.info);
  rowbytes = png_get_rowbytes(g.png, g.info);
  buffer.resize(rowbytes * h);
  rows.resize(h);
  for (png_uint_32 r = 0; r < h; ++r) rows[r] = buffer.data() + r * rowbytes;
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  if (w == 0 || h == 0) throw IoError("zero-dimension image " + path.string());
  if (channels != 1 && channels != 3) throw IoError("unsupported PNG channel layout in " + path.string());
  const double maxv = out_depth == 16 ? 65535.0 : 255.0;
  std::vector<double> vals(static_cast<std::size_t>(w) * h);
  for (png_uint_32 r = 0; r < h; ++r) {
    const png_byte* row = rows[r];
    for (png_uint_32 c = 0; c < w; ++c) {
      auto sample = [&](int ch) -> double {
        const std::size_t i = static_cast<std::size_t>(c) * channels + ch;
        if (out_depth == 16) return (row[2 * i] | (row[2 * i + 1] << 8)) / maxv;
        return row[i] / maxv;
      };
      double v = channels == 1 ? sample(0) : 0.299 * sample(0) + 0.587 * sample(1) + 0.114 * sample(2);
      vals[static_cast<std::size_t>(r) * w + c] = std::clamp(v, 0.0, 1.0);
    }
  }
  return Raster(static_cast<int>(w), static_cast<int>(h), std::move(vals));
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), len);
}

void png_noop_flush(png_structp) {}

}  // namespace

Raster load_image(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  const std::string ext = lower_ext(path);
  if (ext == ".pgm" || ext == ".pnm") return load_pgm(path);
  if (ext == ".png") return load_png(path);
  throw IoError("unsupported image format '" + ext + "': " + path.string());
}

void save_pgm(const Raster& raster, const fs::path& path) {
  std::string out = "P5\n" + std::to_string(raster.width()) + " " + std::to_string(raster.height()) + "\n255\n";
  out.reserve(out.size() + raster.values().size());
  for (double v : raster.values()) out.push_back(static_cast<char>(to_byte(v)));
  write_atomic(path, out);
}

void save_png(const Raster& raster, const fs::path& path) {
  std::string encoded;
  std::vector<png_byte> row(static_cast<std::size_t>(raster.width()));
  {
    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw IoError("libpng initialisation failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw IoError("libpng initialisation failed");
    if (setjmp(png_jmpbuf(g.png))) throw IoError("PNG encoding failed for " + path.string());
    png_set_write_fn(g.png, &encoded, png_append, png_noop_flush);
    png_set_IHDR(g.png, g.info, raster.width(), raster.height(), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);
    for (int r = 0; r < raster.height(); ++r) {
      for (int c = 0; c < raster.width(); ++c) row[c] = to_byte(raster(r, c));
      png_write_row(g.png, row.data());
    }
    png_write_end(g.png, nullptr);
  }
  write_atomic(path, encoded);
}

void save_image(const Raster& raster, const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm") return save_pgm(raster, path);
  if (ext == ".png") return save_png(raster, path);
  throw IoError("unsupported output format '" + ext + "'");
}

}  // namespace awmi
