#include "accmag/videoio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

namespace accmag::videoio {
namespace fs = std::filesystem;

namespace {

Matrix3 invert(const Matrix3& m) {
  const double a = m[0][0], b = m[0][1], c = m[0][2];
  const double d = m[1][0], e = m[1][1], f = m[1][2];
  const double g = m[2][0], h = m[2][1], i = m[2][2];
  const double det = a * (e * i - f * h) - b * (d * i - f * g) +
                     c * (d * h - e * g);
  return {{
      {(e * i - f * h) / det, (c * h - b * i) / det, (b * f - c * e) / det},
      {(f * g - d * i) / det, (a * i - c * g) / det, (c * d - a * f) / det},
      {(d * h - e * g) / det, (b * g - a * h) / det, (a * e - b * d) / det},
  }};
}

FrameSequence convert(const FrameSequence& seq, const Matrix3& m,
                      Colorspace from, Colorspace to) {
  if (seq.colorspace() != from) {
    throw ShapeError("expected a " + to_string(from) + " sequence, got " +
                     to_string(seq.colorspace()));
  }
  if (seq.channels() != 3) {
    throw ShapeError("color conversion needs 3 channels");
  }
  FrameSequence out = seq;
  out.set_colorspace(to);
  auto src = seq.samples();
  auto dst = out.samples();
  const std::size_t pixels = src.size() / 3;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(pixels); ++p) {
    const std::size_t o = static_cast<std::size_t>(p) * 3;
    const auto v = apply(m, {src[o], src[o + 1], src[o + 2]});
    dst[o] = v[0];
    dst[o + 1] = v[1];
    dst[o + 2] = v[2];
  }
  return out;
}

// Runs body(t) for every frame on the OpenMP team and rethrows the first
// failure (by frame index) on the calling thread.
template <typename Body>
void for_each_frame(std::size_t frames, Body body) {
  std::vector<std::exception_ptr> errors(frames);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(frames); ++t) {
    try {
      body(static_cast<std::size_t>(t));
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) {
                      return std::tolower(static_cast<unsigned char>(a)) ==
                             std::tolower(static_cast<unsigned char>(b));
                    });
}

std::string expand_pattern(const std::string& pattern, std::size_t index) {
  std::vector<char> buf(pattern.size() + 32);
  std::snprintf(buf.data(), buf.size(), pattern.c_str(),
                static_cast<int>(index));
  return buf.data();
}

// --- PNG -------------------------------------------------------------------

struct DecodedImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> rgb;  // interleaved, [0,1]
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

DecodedImage read_png(const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "rb"),
                                             &std::fclose);
  if (!file) throw IoError("cannot open " + path);

  PngReadGuard guard;
  guard.png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!guard.png) throw IoError("libpng init failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw IoError("libpng init failed");

  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  bool bad_depth = false;

  if (setjmp(png_jmpbuf(guard.png))) {
    throw IoError("corrupt PNG: " + path);
  }
  png_init_io(guard.png, file.get());
  png_read_info(guard.png, guard.info);
  png_get_IHDR(guard.png, guard.info, &width, &height, &bit_depth, &color_type,
               nullptr, nullptr, nullptr);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(guard.png);
    bit_depth = 8;
  } else if (bit_depth != 8 && bit_depth != 16) {
    bad_depth = true;
  }
  if (!bad_depth) {
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(guard.png);
    }
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(guard.png);
    if (png_get_valid(guard.png, guard.info, PNG_INFO_tRNS)) {
      png_set_tRNS_to_alpha(guard.png);
      png_set_strip_alpha(guard.png);
    }
    png_read_update_info(guard.png, guard.info);
    const std::size_t row_bytes = png_get_rowbytes(guard.png, guard.info);
    pixels.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
      rows[y] = pixels.data() + y * row_bytes;
    }
    png_read_image(guard.png, rows.data());
  }
  if (bad_depth) {
    throw IoError("unsupported bit depth " + std::to_string(bit_depth) +
                  " in " + path);
  }

  DecodedImage img;
  img.height = height;
  img.width = width;
  img.rgb.resize(static_cast<std::size_t>(height) * width * 3);
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < img.rgb.size(); ++i) {
      const unsigned v = (pixels[2 * i] << 8) | pixels[2 * i + 1];
      img.rgb[i] = v / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < img.rgb.size(); ++i) {
      img.rgb[i] = pixels[i] / 255.0;
    }
  }
  return img;
}

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, &info); }
};

void write_png(const std::string& path, std::size_t height, std::size_t width,
               const std::vector<unsigned char>& rgb8) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"),
                                             &std::fclose);
  if (!file) throw IoError("cannot create " + path);
  PngWriteGuard guard;
  guard.png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!guard.png) throw IoError("libpng init failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw IoError("libpng init failed");
  std::vector<png_const_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = rgb8.data() + y * width * 3;
  if (setjmp(png_jmpbuf(guard.png))) {
    throw IoError("failed writing " + path);
  }
  png_init_io(guard.png, file.get());
  png_set_IHDR(guard.png, guard.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(guard.png, guard.info);
  png_write_image(guard.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(guard.png, nullptr);
}

FrameSequence load_png_files(const std::vector<std::string>& files,
                             std::optional<double> fps) {
  if (files.empty()) throw IoError("no input frames found");
  if (!fps) throw IoError("--fps is required for image-sequence input");
  const DecodedImage first = read_png(files.front());
  FrameSequence seq(files.size(), first.height, first.width, 3, *fps);
  std::copy(first.rgb.begin(), first.rgb.end(), seq.frame(0).begin());
  for_each_frame(files.size(), [&](std::size_t t) {
    if (t == 0) return;
    const DecodedImage img = read_png(files[t]);
    if (img.height != first.height || img.width != first.width) {
      throw IoError("dimension mismatch: " + files[t] + " is " +
                    std::to_string(img.width) + "x" +
                    std::to_string(img.height) + ", expected " +
                    std::to_string(first.width) + "x" +
                    std::to_string(first.height));
    }
    std::copy(img.rgb.begin(), img.rgb.end(), seq.frame(t).begin());
  });
  return seq;
}

std::vector<std::string> files_from_pattern(const std::string& pattern) {
  std::size_t start = 0;
  if (!fs::exists(expand_pattern(pattern, 0))) start = 1;
  std::vector<std::string> files;
  for (std::size_t i = start;; ++i) {
    std::string path = expand_pattern(pattern, i);
    if (!fs::exists(path)) break;
    files.push_back(std::move(path));
  }
  if (files.empty()) throw IoError("no files match pattern " + pattern);
  return files;
}

// Number formed by the last run of digits in the file stem.
long long frame_index(const fs::path& p) {
  const std::string stem = p.stem().string();
  auto end = stem.find_last_of("0123456789");
  if (end == std::string::npos) return -1;
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1])))
    --begin;
  return std::stoll(stem.substr(begin, end - begin + 1));
}

std::vector<std::string> files_from_directory(const fs::path& dir) {
  std::vector<std::pair<long long, std::string>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (!has_suffix(entry.path().string(), ".png")) continue;
    found.emplace_back(frame_index(entry.path()), entry.path().string());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> files;
  for (auto& f : found) files.push_back(std::move(f.second));
  if (files.empty()) throw IoError("no .png frames in " + dir.string());
  return files;
}

unsigned char quantize(double v, std::size_t& clipped) {
  if (v < 0.0 || v > 1.0 || std::isnan(v)) {
    ++clipped;
    v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  }
  return static_cast<unsigned char>(std::lround(v * 255.0));
}

// --- Y4M -------------------------------------------------------------------

struct Y4mHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  double fps = 0.0;
  std::string chroma = "420jpeg";
  bool full_range = false;
};

Y4mHeader parse_y4m_header(const std::string& line) {
  std::istringstream in(line);
  std::string magic;
  in >> magic;
  if (magic != "YUV4MPEG2") throw IoError("not a Y4M stream");
  Y4mHeader h;
  std::string tok;
  while (in >> tok) {
    const char key = tok[0];
    const std::string val = tok.substr(1);
    if (key == 'W') {
      h.width = std::stoul(val);
    } else if (key == 'H') {
      h.height = std::stoul(val);
    } else if (key == 'F') {
      const auto colon = val.find(':');
      if (colon == std::string::npos) throw IoError("bad Y4M frame rate");
      const double num = std::stod(val.substr(0, colon));
      const double den = std::stod(val.substr(colon + 1));
      if (den <= 0) throw IoError("bad Y4M frame rate");
      h.fps = num / den;
    } else if (key == 'C') {
      h.chroma = val;
    } else if (key == 'X' && val == "COLORRANGE=FULL") {
      h.full_range = true;
    }
  }
  if (h.width == 0 || h.height == 0) throw IoError("Y4M header lacks W/H");
  return h;
}

struct ChromaLayout {
  std::size_t sub_x = 1;
  std::size_t sub_y = 1;
  bool mono = false;
  int bits = 8;
};

ChromaLayout chroma_layout(const std::string& tag) {
  ChromaLayout layout;
  std::string base = tag;
  if (auto p = tag.find('p'); p != std::string::npos && p + 1 < tag.size() &&
                              std::isdigit(static_cast<unsigned char>(tag[p + 1]))) {
    layout.bits = std::stoi(tag.substr(p + 1));
    base = tag.substr(0, p);
  }
  if (base.rfind("420", 0) == 0) {
    layout.sub_x = layout.sub_y = 2;
  } else if (base == "422") {
    layout.sub_x = 2;
  } else if (base == "444") {
  } else if (base == "mono") {
    layout.mono = true;
  } else {
    throw IoError("unsupported Y4M chroma format C" + tag);
  }
  if (layout.bits != 8 && layout.bits != 10 && layout.bits != 12 &&
      layout.bits != 16) {
    throw IoError("unsupported bit depth " + std::to_string(layout.bits) +
                  " in Y4M stream");
  }
  return layout;
}

constexpr double kKr = 0.299;
constexpr double kKb = 0.114;

std::array<double, 3> ycbcr_to_rgb(double y, double cb, double cr) {
  const double r = y + 2.0 * (1.0 - kKr) * cr;
  const double b = y + 2.0 * (1.0 - kKb) * cb;
  const double g = (y - kKr * r - kKb * b) / (1.0 - kKr - kKb);
  return {r, g, b};
}

std::array<double, 3> rgb_to_ycbcr(double r, double g, double b) {
  const double y = kKr * r + (1.0 - kKr - kKb) * g + kKb * b;
  return {y, (b - y) / (2.0 * (1.0 - kKb)), (r - y) / (2.0 * (1.0 - kKr))};
}

FrameSequence load_y4m(const std::string& path, std::optional<double> fps) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string header_line;
  std::getline(in, header_line);
  const Y4mHeader h = parse_y4m_header(header_line);
  const ChromaLayout layout = chroma_layout(h.chroma);
  const std::size_t bytes = layout.bits > 8 ? 2 : 1;
  const double maxv = std::ldexp(1.0, layout.bits) - 1.0;
  const std::size_t cw = (h.width + layout.sub_x - 1) / layout.sub_x;
  const std::size_t ch = (h.height + layout.sub_y - 1) / layout.sub_y;
  const std::size_t luma_size = h.width * h.height * bytes;
  const std::size_t chroma_size = layout.mono ? 0 : cw * ch * bytes;

  std::vector<std::vector<unsigned char>> raw;
  std::string frame_line;
  while (std::getline(in, frame_line)) {
    if (frame_line.rfind("FRAME", 0) != 0) throw IoError("bad Y4M frame marker");
    std::vector<unsigned char> buf(luma_size + 2 * chroma_size);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw IoError("truncated Y4M frame in " + path);
    }
    raw.push_back(std::move(buf));
  }
  if (raw.empty()) throw IoError("Y4M stream has no frames: " + path);
  const double rate = fps ? *fps : h.fps;
  if (!(rate > 0)) throw IoError("Y4M stream has no frame rate; pass --fps");

  FrameSequence seq(raw.size(), h.height, h.width, 3, rate);
  auto code = [&](const unsigned char* p, std::size_t i) -> double {
    return bytes == 2 ? (p[2 * i] | (p[2 * i + 1] << 8)) : p[i];
  };
  const double step = std::ldexp(1.0, layout.bits - 8);
  for_each_frame(raw.size(), [&](std::size_t t) {
    const unsigned char* yp = raw[t].data();
    const unsigned char* up = yp + luma_size;
    const unsigned char* vp = up + chroma_size;
    for (std::size_t y = 0; y < h.height; ++y) {
      for (std::size_t x = 0; x < h.width; ++x) {
        const double yc = code(yp, y * h.width + x);
        double Y = h.full_range ? yc / maxv : (yc - 16.0 * step) / (219.0 * step);
        double cb = 0.0, cr = 0.0;
        if (!layout.mono) {
          const std::size_t ci = (y / layout.sub_y) * cw + x / layout.sub_x;
          const double ucode = code(up, ci);
          const double vcode = code(vp, ci);
          if (h.full_range) {
            cb = ucode / maxv - 0.5;
            cr = vcode / maxv - 0.5;
          } else {
            cb = (ucode - 128.0 * step) / (224.0 * step);
            cr = (vcode - 128.0 * step) / (224.0 * step);
          }
        }
        const auto rgb = ycbcr_to_rgb(Y, cb, cr);
        for (std::size_t c = 0; c < 3; ++c) {
          seq.at(t, y, x, c) = std::clamp(rgb[c], 0.0, 1.0);
        }
      }
    }
  });
  return seq;
}

void save_y4m(const FrameSequence& seq, const std::string& path,
              std::size_t& clipped) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  // Frame rate as a rational with microsecond resolution.
  const auto den = 1000000LL;
  const auto num = std::llround(seq.fps() * den);
  out << "YUV4MPEG2 W" << seq.width() << " H" << seq.height() << " F" << num
      << ':' << den << " Ip A1:1 C444 XCOLORRANGE=FULL\n";
  const std::size_t plane = seq.height() * seq.width();
  std::vector<std::vector<unsigned char>> encoded(seq.frames());
  std::vector<std::size_t> clipped_per_frame(seq.frames(), 0);
  for_each_frame(seq.frames(), [&](std::size_t t) {
    auto& buf = encoded[t];
    buf.resize(3 * plane);
    const auto f = seq.frame(t);
    for (std::size_t i = 0; i < plane; ++i) {
      double rgb[3];
      for (std::size_t c = 0; c < 3; ++c) {
        double v = f[i * 3 + c];
        if (v < 0.0 || v > 1.0 || std::isnan(v)) {
          ++clipped_per_frame[t];
          v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        }
        rgb[c] = v;
      }
      const auto ycc = rgb_to_ycbcr(rgb[0], rgb[1], rgb[2]);
      std::size_t dummy = 0;
      buf[i] = quantize(ycc[0], dummy);
      buf[plane + i] = quantize(ycc[1] + 0.5, dummy);
      buf[2 * plane + i] = quantize(ycc[2] + 0.5, dummy);
    }
  });
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(encoded[t].data()),
              static_cast<std::streamsize>(encoded[t].size()));
    clipped += clipped_per_frame[t];
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

const Matrix3& yiq_to_rgb_matrix() {
  static const Matrix3 inv = invert(kRgbToYiq);
  return inv;
}

std::array<double, 3> apply(const Matrix3& m, const std::array<double, 3>& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

FrameSequence rgb_to_yiq(const FrameSequence& seq) {
  return convert(seq, kRgbToYiq, Colorspace::rgb, Colorspace::yiq);
}

FrameSequence yiq_to_rgb(const FrameSequence& seq) {
  return convert(seq, yiq_to_rgb_matrix(), Colorspace::yiq, Colorspace::rgb);
}

FrameSequence load_frames(const std::string& path_pattern,
                          std::optional<double> fps) {
  if (fps && !(*fps > 0.0)) throw IoError("--fps must be positive");
  if (has_suffix(path_pattern, ".y4m")) return load_y4m(path_pattern, fps);
  if (path_pattern.find('%') != std::string::npos) {
    return load_png_files(files_from_pattern(path_pattern), fps);
  }
  const fs::path p(path_pattern);
  if (fs::is_directory(p)) return load_png_files(files_from_directory(p), fps);
  if (fs::is_regular_file(p)) return load_png_files({path_pattern}, fps);
  throw IoError("input not found: " + path_pattern);
}

std::size_t save_frames(const FrameSequence& seq,
                        const std::string& path_pattern) {
  if (seq.colorspace() != Colorspace::rgb || seq.channels() != 3) {
    throw ShapeError("save_frames expects a 3-channel RGB sequence");
  }
  std::size_t clipped = 0;
  if (has_suffix(path_pattern, ".y4m")) {
    if (auto parent = fs::path(path_pattern).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    save_y4m(seq, path_pattern, clipped);
  } else {
    std::string pattern = path_pattern;
    if (pattern.find('%') == std::string::npos) {
      fs::create_directories(pattern);
      pattern = (fs::path(pattern) / "%06d.png").string();
    } else if (auto parent = fs::path(pattern).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    std::vector<std::size_t> clipped_per_frame(seq.frames(), 0);
    for_each_frame(seq.frames(), [&](std::size_t t) {
      const auto f = seq.frame(t);
      std::vector<unsigned char> rgb8(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        rgb8[i] = quantize(f[i], clipped_per_frame[t]);
      }
      write_png(expand_pattern(pattern, t + 1), seq.height(), seq.width(), rgb8);
    });
    for (auto c : clipped_per_frame) clipped += c;
  }
  if (clipped > 0) {
    std::cerr << "warning: " << clipped
              << " samples outside [0,1] were clipped on write\n";
  }
  return clipped;
}

}  // namespace accmag::videoio
