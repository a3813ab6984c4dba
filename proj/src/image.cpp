#include "prism/image.hpp"

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#if defined(PRISM_HAVE_WEBP)
#include <webp/decode.h>
#endif

#include "prism/error.hpp"

namespace prism {

namespace {

enum class Format { png, jpeg, webp, unknown };

Format sniff_format(const unsigned char* bytes, std::size_t n) {
  static const unsigned char png_magic[8] = {0x89, 'P', 'N', 'G',
                                             0x0D, 0x0A, 0x1A, 0x0A};
  if (n >= 8 && std::memcmp(bytes, png_magic, 8) == 0) return Format::png;
  if (n >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
    return Format::jpeg;
  if (n >= 12 && std::memcmp(bytes, "RIFF", 4) == 0 &&
      std::memcmp(bytes + 8, "WEBP", 4) == 0)
    return Format::webp;
  return Format::unknown;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    raise(errc::file_not_found, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) raise(errc::io_error, "failed reading " + path.string());
  return bytes;
}

double scale16(unsigned v) {
  // 16-bit to 8-bit: divide by 257, round half to even (the default FP
  // rounding mode, so nearbyint does exactly that).
  return std::nearbyint(static_cast<double>(v) / 257.0);
}

RgbImage from_interleaved(const std::vector<double>& pixels, Index rows,
                          Index cols, int channels) {
  RgbImage image;
  image.red.resize(rows, cols);
  image.green.resize(rows, cols);
  image.blue.resize(rows, cols);
  for (Index y = 0; y < rows; ++y) {
    for (Index x = 0; x < cols; ++x) {
      std::size_t base =
          (static_cast<std::size_t>(y) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(x)) *
          static_cast<std::size_t>(channels);
      if (channels == 1) {
        double g = pixels[base];
        image.red(y, x) = g;
        image.green(y, x) = g;
        image.blue(y, x) = g;
      } else {
        image.red(y, x) = pixels[base];
        image.green(y, x) = pixels[base + 1];
        image.blue(y, x) = pixels[base + 2];
      }
    }
  }
  return image;
}

// ---------------------------------------------------------------- PNG

struct PngReadState {
  const unsigned char* data;
  std::size_t size;
  std::size_t offset;
};

void png_memory_read(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->offset + count > state->size) {
    png_error(png, "read past end of buffer");
  }
  std::memcpy(out, state->data + state->offset, count);
  state->offset += count;
}

RgbImage decode_png(const std::vector<unsigned char>& bytes,
                    const std::filesystem::path& path) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) raise(errc::io_error, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    raise(errc::io_error, "png_create_info_struct failed");
  }

  std::vector<png_bytep> row_pointers;
  std::vector<unsigned char> raster;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(errc::corrupt_image, "PNG decode failed: " + path.string());
  }

  PngReadState state{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &state, png_memory_read);
  png_read_info(png, info);

  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  bit_depth = png_get_bit_depth(png, info);
  int channels = png_get_channels(png, info);
  std::size_t row_bytes = png_get_rowbytes(png, info);

  raster.resize(row_bytes * height);
  row_pointers.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    row_pointers[y] = raster.data() + static_cast<std::size_t>(y) * row_bytes;
  }
  png_read_image(png, row_pointers.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  bool has_alpha = (channels == 2 || channels == 4);
  int color_channels = has_alpha ? channels - 1 : channels;

  std::vector<double> pixels(static_cast<std::size_t>(width) * height *
                             static_cast<std::size_t>(color_channels));
  std::size_t out = 0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = raster.data() + static_cast<std::size_t>(y) * row_bytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < color_channels; ++c) {
        if (bit_depth == 16) {
          std::size_t idx =
              (static_cast<std::size_t>(x) * channels + static_cast<std::size_t>(c)) * 2;
          unsigned v = (static_cast<unsigned>(row[idx]) << 8) | row[idx + 1];
          pixels[out++] = scale16(v);
        } else {
          std::size_t idx =
              static_cast<std::size_t>(x) * channels + static_cast<std::size_t>(c);
          pixels[out++] = static_cast<double>(row[idx]);
        }
      }
    }
  }
  return from_interleaved(pixels, static_cast<Index>(height),
                          static_cast<Index>(width), color_channels);
}

// ---------------------------------------------------------------- JPEG

struct JpegErrorState {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr info) {
  auto* state = reinterpret_cast<JpegErrorState*>(info->err);
  std::longjmp(state->jump, 1);
}

RgbImage decode_jpeg(const std::vector<unsigned char>& bytes,
                     const std::filesystem::path& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorState err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;

  std::vector<double> pixels;
  Index width = 0;
  Index height = 0;

  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    raise(errc::corrupt_image, "JPEG decode failed: " + path.string());
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  width = static_cast<Index>(cinfo.output_width);
  height = static_cast<Index>(cinfo.output_height);
  int channels = cinfo.output_components;  // 3 after JCS_RGB

  pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * channels);
  unsigned char* row_ptr = row.data();
  while (cinfo.output_scanline < cinfo.output_height) {
    std::size_t y = cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row_ptr, 1);
    for (Index x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        pixels[(y * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3 +
               static_cast<std::size_t>(c)] =
            static_cast<double>(row[static_cast<std::size_t>(x) * channels +
                                    static_cast<std::size_t>(c)]);
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_interleaved(pixels, height, width, 3);
}

// ---------------------------------------------------------------- WebP

RgbImage decode_webp(const std::vector<unsigned char>& bytes,
                     const std::filesystem::path& path) {
#if defined(PRISM_HAVE_WEBP)
  int w = 0, h = 0;
  if (!WebPGetInfo(bytes.data(), bytes.size(), &w, &h)) {
    raise(errc::corrupt_image, "WebP header invalid: " + path.string());
  }
  std::uint8_t* rgba = WebPDecodeRGBA(bytes.data(), bytes.size(), &w, &h);
  if (!rgba) raise(errc::corrupt_image, "WebP decode failed: " + path.string());
  std::unique_ptr<std::uint8_t, decltype(&WebPFree)> guard(rgba, &WebPFree);

  std::vector<double> pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0, n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
       i < n; ++i) {
    pixels[i * 3 + 0] = static_cast<double>(rgba[i * 4 + 0]);
    pixels[i * 3 + 1] = static_cast<double>(rgba[i * 4 + 1]);
    pixels[i * 3 + 2] = static_cast<double>(rgba[i * 4 + 2]);
  }
  return from_interleaved(pixels, static_cast<Index>(h), static_cast<Index>(w), 3);
#else
  (void)bytes;
  raise(errc::unsupported_format,
        "WebP input but this build has no libwebp: " + path.string());
#endif
}

}  // namespace

void validate_image(const RgbImage& image) {
  const Index rows = image.red.rows();
  const Index cols = image.red.cols();
  if (rows < 2 || cols < 2) {
    raise(errc::invalid_argument, "image must be at least 2x2");
  }
  for (const ChannelMatrix* ch : {&image.red, &image.green, &image.blue}) {
    if (ch->rows() != rows || ch->cols() != cols) {
      raise(errc::invalid_argument, "channel dimensions differ");
    }
    if (!ch->allFinite() || ch->minCoeff() < 0.0 || ch->maxCoeff() > 255.0) {
      raise(errc::invalid_argument, "samples must be finite and in [0, 255]");
    }
  }
}

RgbImage decode_image(const std::filesystem::path& path) {
  std::vector<unsigned char> bytes = read_file(path);
  RgbImage image;
  switch (sniff_format(bytes.data(), bytes.size())) {
    case Format::png:
      image = decode_png(bytes, path);
      break;
    case Format::jpeg:
      image = decode_jpeg(bytes, path);
      break;
    case Format::webp:
      image = decode_webp(bytes, path);
      break;
    case Format::unknown:
      raise(errc::unsupported_format, path.string());
  }
  validate_image(image);
  return image;
}

void encode_png(const RgbImage& image, const std::filesystem::path& path) {
  validate_image(image);
  const Index rows = image.rows();
  const Index cols = image.cols();

  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) raise(errc::io_error, "cannot open for writing: " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    raise(errc::io_error, "libpng writer init failed");
  }

  std::vector<unsigned char> raster(static_cast<std::size_t>(rows) *
                                    static_cast<std::size_t>(cols) * 3);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    raise(errc::io_error, "PNG encode failed: " + path.string());
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols),
               static_cast<png_uint_32>(rows), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  auto quantize = [](double v) {
    long q = std::lrint(v);
    if (q < 0) q = 0;
    if (q > 255) q = 255;
    return static_cast<unsigned char>(q);
  };
  std::vector<png_bytep> row_pointers(static_cast<std::size_t>(rows));
  for (Index y = 0; y < rows; ++y) {
    unsigned char* row = raster.data() + static_cast<std::size_t>(y) *
                                             static_cast<std::size_t>(cols) * 3;
    row_pointers[static_cast<std::size_t>(y)] = row;
    for (Index x = 0; x < cols; ++x) {
      row[x * 3 + 0] = quantize(image.red(y, x));
      row[x * 3 + 1] = quantize(image.green(y, x));
      row[x * 3 + 2] = quantize(image.blue(y, x));
    }
  }
  png_write_image(png, row_pointers.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace prism
