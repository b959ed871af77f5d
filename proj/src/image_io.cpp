#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "ringbot/image.hpp"

namespace ringbot::vision {

ColorImage::ColorImage(int w, int h, Rgb fill) : width(w), height(h) {
  if (w < 0 || h < 0) {
    throw std::invalid_argument("negative image dimensions");
  }
  data.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = fill.r;
    data[i + 1] = fill.g;
    data[i + 2] = fill.b;
  }
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw ImageIoError("cannot open " + path.string());
  }
  return f;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf != nullptr) {
    *buf = msg;
  }
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
    if (png == nullptr) {
      throw ImageIoError("png_create_read_struct failed");
    }
    info = png_create_info_struct(png);
    if (info == nullptr) {
      png_destroy_read_struct(&png, nullptr, nullptr);
      throw ImageIoError("png_create_info_struct failed");
    }
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string error;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
    if (png == nullptr) {
      throw ImageIoError("png_create_write_struct failed");
    }
    info = png_create_info_struct(png);
    if (info == nullptr) {
      png_destroy_write_struct(&png, nullptr);
      throw ImageIoError("png_create_info_struct failed");
    }
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 8> sig{};
  in.read(reinterpret_cast<char*>(sig.data()), sig.size());
  return in.gcount() == 8 && png_sig_cmp(sig.data(), 0, 8) == 0;
}

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::size_t rowbytes = 0;
  bool ok = false;
};

// Each libpng phase runs in its own frame holding the setjmp, so no C++
// object is modified between setjmp and a possible longjmp.
PngHeader png_read_header(PngReader& r, std::FILE* f, bool want_gray16) {
  PngHeader hdr;
  if (setjmp(png_jmpbuf(r.png))) {
    return PngHeader{};
  }
  png_init_io(r.png, f);
  png_read_info(r.png, r.info);
  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  if (want_gray16) {
    if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_GRAY) {
      r.error = "depth PNG must be 16-bit grayscale";
      return PngHeader{};
    }
    if constexpr (std::endian::native == std::endian::little) {
      png_set_swap(r.png);
    }
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
      png_set_palette_to_rgb(r.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(r.png);
    }
    if (bit_depth == 16) {
      png_set_strip_16(r.png);
    }
    if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) {
      png_set_strip_alpha(r.png);
    }
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) {
      png_set_tRNS_to_alpha(r.png);
      png_set_strip_alpha(r.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(r.png);
    }
  }
  png_read_update_info(r.png, r.info);
  hdr.width = png_get_image_width(r.png, r.info);
  hdr.height = png_get_image_height(r.png, r.info);
  hdr.rowbytes = png_get_rowbytes(r.png, r.info);
  hdr.ok = true;
  return hdr;
}

bool png_read_body(PngReader& r, png_bytepp rows) {
  if (setjmp(png_jmpbuf(r.png))) {
    return false;
  }
  png_read_image(r.png, rows);
  png_read_end(r.png, nullptr);
  return true;
}

void read_png_rows(const std::filesystem::path& path, bool want_gray16, int& width,
                   int& height, std::vector<unsigned char>& bytes) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  const PngHeader hdr = png_read_header(r, f.get(), want_gray16);
  if (!hdr.ok) {
    throw ImageIoError("png read failed for " + path.string() + ": " + r.error);
  }
  bytes.assign(hdr.rowbytes * hdr.height, 0);
  std::vector<png_bytep> rows(hdr.height);
  for (png_uint_32 y = 0; y < hdr.height; ++y) {
    rows[y] = bytes.data() + y * hdr.rowbytes;
  }
  if (!png_read_body(r, rows.data())) {
    throw ImageIoError("png read failed for " + path.string() + ": " + r.error);
  }
  width = static_cast<int>(hdr.width);
  height = static_cast<int>(hdr.height);
}

struct PngLayout {
  int width;
  int height;
  int bit_depth;
  int color_type;
  bool swap16;
};

bool png_write_all(PngWriter& wr, std::FILE* f, const PngLayout& layout, png_bytepp rows) {
  if (setjmp(png_jmpbuf(wr.png))) {
    return false;
  }
  png_init_io(wr.png, f);
  png_set_IHDR(wr.png, wr.info, static_cast<png_uint_32>(layout.width),
               static_cast<png_uint_32>(layout.height), layout.bit_depth, layout.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  if (layout.swap16) {
    png_set_swap(wr.png);
  }
  png_write_image(wr.png, rows);
  png_write_end(wr.png, nullptr);
  return true;
}

void write_png_rows(const std::filesystem::path& path, int width, int height, int bit_depth,
                    int color_type, int bytes_per_pixel, const unsigned char* data,
                    bool swap16) {
  FilePtr f = open_file(path, "wb");
  PngWriter wr;
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  const std::size_t stride = static_cast<std::size_t>(width) * bytes_per_pixel;
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data + y * stride);
  }
  if (!png_write_all(wr, f.get(), PngLayout{width, height, bit_depth, color_type, swap16},
                     rows.data())) {
    throw ImageIoError("png write failed for " + path.string() + ": " + wr.error);
  }
}

std::uint32_t read_u32_le(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF),
                              static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

// Skips whitespace and '#' comments in a PNM header.
int read_pnm_int(std::istream& in) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c) != 0) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  int v = -1;
  if (!(in >> v)) {
    throw ImageIoError("malformed PPM header");
  }
  return v;
}

}  // namespace

ColorImage read_color_image(const std::filesystem::path& path) {
  if (has_png_signature(path)) {
    int w = 0;
    int h = 0;
    std::vector<unsigned char> bytes;
    read_png_rows(path, false, w, h, bytes);
    ColorImage img;
    img.width = w;
    img.height = h;
    img.data = std::move(bytes);
    return img;
  }
  return read_ppm(path);
}

void write_png(const std::filesystem::path& path, const ColorImage& img) {
  write_png_rows(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, 3, img.data.data(), false);
}

void write_png(const std::filesystem::path& path, const Plane<std::uint8_t>& img) {
  write_png_rows(path, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, 1, img.data.data(), false);
}

ColorImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ImageIoError("cannot open " + path.string());
  }
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P6") {
    throw ImageIoError("not a PNG or binary PPM: " + path.string());
  }
  const int w = read_pnm_int(in);
  const int h = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (w <= 0 || h <= 0 || maxval != 255) {
    throw ImageIoError("unsupported PPM (need 8-bit P6): " + path.string());
  }
  in.get();  // single whitespace before raster
  ColorImage img(w, h);
  in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
    throw ImageIoError("truncated PPM raster: " + path.string());
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const ColorImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ImageIoError("cannot open " + path.string());
  }
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
}

DepthMap read_depth(const std::filesystem::path& path) {
  if (has_png_signature(path)) {
    return read_depth_png(path);
  }
  return read_raw_depth(path);
}

DepthMap read_depth_png(const std::filesystem::path& path) {
  int w = 0;
  int h = 0;
  std::vector<unsigned char> bytes;
  read_png_rows(path, true, w, h, bytes);
  DepthMap depth(w, h);
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    std::uint16_t mm = 0;
    std::memcpy(&mm, bytes.data() + 2 * i, 2);
    depth.data[i] = static_cast<float>(mm) / 1000.0f;
  }
  return depth;
}

void write_depth_png(const std::filesystem::path& path, const DepthMap& depth) {
  std::vector<std::uint16_t> mm(depth.data.size());
  for (std::size_t i = 0; i < mm.size(); ++i) {
    const double v = std::round(static_cast<double>(depth.data[i]) * 1000.0);
    mm[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
  }
  write_png_rows(path, depth.width, depth.height, 16, PNG_COLOR_TYPE_GRAY, 2,
                 reinterpret_cast<const unsigned char*>(mm.data()),
                 std::endian::native == std::endian::little);
}

DepthMap read_raw_depth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ImageIoError("cannot open " + path.string());
  }
  const std::uint32_t w = read_u32_le(in);
  const std::uint32_t h = read_u32_le(in);
  if (!in || w > 1u << 15 || h > 1u << 15) {
    throw ImageIoError("malformed depth header: " + path.string());
  }
  DepthMap depth(static_cast<int>(w), static_cast<int>(h));
  for (float& v : depth.data) {
    const std::uint32_t bits = read_u32_le(in);
    v = std::bit_cast<float>(bits);
  }
  if (!in) {
    throw ImageIoError("truncated depth raster: " + path.string());
  }
  return depth;
}

void write_raw_depth(const std::filesystem::path& path, const DepthMap& depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ImageIoError("cannot open " + path.string());
  }
  write_u32_le(out, static_cast<std::uint32_t>(depth.width));
  write_u32_le(out, static_cast<std::uint32_t>(depth.height));
  for (float v : depth.data) {
    write_u32_le(out, std::bit_cast<std::uint32_t>(v));
  }
}

}  // namespace ringbot::vision
