#include "lipasp/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "lipasp/errors.hpp"

namespace lipasp {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFull) throw ParseError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      if (at_end()) throw ParseError(std::string("truncated data: expected ") + what, pos_);
      throw ParseError(std::string("expected ") + what, pos_);
    }
    if (!at_end() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw ParseError(std::string("malformed ") + what, pos_);
    }
    return v;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t peek() const { return bytes_[pos_]; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return v;
}

std::uint32_t maxval_of(const LipScale& scale) {
  const double m = scale.bound();
  if (m != std::floor(m) || m < 2.0 || m > 65536.0) {
    throw EncodeError("PGM needs an integer bound M in [2, 65536], got " + std::to_string(m));
  }
  return static_cast<std::uint32_t>(m) - 1;
}

std::vector<std::uint8_t> mask_from(const GreyImage& values,
                                    const std::optional<GreyImage>& mask) {
  if (!mask) return std::vector<std::uint8_t>(values.pixels.size(), 1);
  if (mask->width != values.width || mask->height != values.height) {
    throw SizeError("mask is " + std::to_string(mask->width) + "x" +
                    std::to_string(mask->height) + " but structuring function is " +
                    std::to_string(values.width) + "x" + std::to_string(values.height));
  }
  std::vector<std::uint8_t> active(mask->pixels.size());
  std::transform(mask->pixels.begin(), mask->pixels.end(), active.begin(),
                 [](double v) { return static_cast<std::uint8_t>(v != 0.0); });
  return active;
}

}  // namespace

GreyImage read_pgm(std::span<const std::uint8_t> bytes) {
  PgmReader in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("not a P2/P5 PGM stream", 0);
  }
  const bool binary = bytes[1] == '5';
  in.advance();
  in.advance();
  if (in.at_end() || !(std::isspace(in.peek()) || in.peek() == '#')) {
    throw ParseError("malformed magic number", in.pos());
  }
  const std::size_t width_at = in.pos();
  const auto width = in.read_uint("width");
  const auto height = in.read_uint("height");
  if (width == 0 || height == 0) throw ParseError("zero image dimension", width_at);
  const std::size_t maxval_at = in.pos();
  const auto maxval = in.read_uint("maxval");
  if (maxval == 0 || maxval > 65535) {
    throw ParseError("maxval must be in 1..65535, got " + std::to_string(maxval), maxval_at);
  }
  if (width * height > (1ull << 31)) throw ParseError("image too large", width_at);

  const auto n = static_cast<std::size_t>(width * height);
  std::vector<double> pixels(n);
  if (binary) {
    if (in.at_end() || !std::isspace(in.peek())) {
      throw ParseError("expected single whitespace after maxval", in.pos());
    }
    in.advance();
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (in.remaining() < n * sample_bytes) {
      throw ParseError("truncated data: expected " + std::to_string(n * sample_bytes) +
                           " payload bytes, got " + std::to_string(in.remaining()),
                       in.pos());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = in.pos();
      std::uint32_t s = in.byte();
      if (sample_bytes == 2) s = (s << 8) | in.byte();
      if (s > maxval) {
        throw ParseError("sample " + std::to_string(s) + " exceeds maxval " +
                             std::to_string(maxval),
                         at);
      }
      pixels[i] = static_cast<double>(s);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      in.skip_space_and_comments();
      const std::size_t at = in.pos();
      const auto s = in.read_uint("sample");
      if (s > maxval) {
        throw ParseError("sample " + std::to_string(s) + " exceeds maxval " +
                             std::to_string(maxval),
                         at);
      }
      pixels[i] = static_cast<double>(s);
    }
  }
  return GreyImage(static_cast<int>(width), static_cast<int>(height),
                   LipScale(static_cast<double>(maxval) + 1.0), std::move(pixels));
}

Bytes write_pgm(const GreyImage& image, PgmVariant variant) {
  const std::uint32_t maxval = maxval_of(image.scale);
  std::vector<std::uint32_t> samples(image.pixels.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = std::round(image.pixels[i]);
    if (!(r >= 0.0 && r <= static_cast<double>(maxval))) {
      const auto w = static_cast<std::size_t>(image.width);
      throw EncodeError("pixel " + std::to_string(image.pixels[i]) + " at (" +
                        std::to_string(i % w) + "," + std::to_string(i / w) +
                        ") not representable with maxval " + std::to_string(maxval));
    }
    samples[i] = static_cast<std::uint32_t>(r);
  }

  const std::string header = std::string(variant == PgmVariant::P2 ? "P2" : "P5") + "\n" +
                             std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n" + std::to_string(maxval) +
                             "\n";
  Bytes out(header.begin(), header.end());
  if (variant == PgmVariant::P5) {
    const bool wide = maxval > 255;
    out.reserve(out.size() + samples.size() * (wide ? 2 : 1));
    for (auto s : samples) {
      if (wide) out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
    return out;
  }
  std::string body;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (x > 0) body += ' ';
      body += std::to_string(samples[image.index(x, y)]);
    }
    body += '\n';
  }
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Bytes write_map(const DistanceMap& map) {
  const std::size_t n =
      static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
  if (map.width < 0 || map.height < 0 || map.values.size() != n) {
    throw EncodeError("distance map shape does not match its value count");
  }
  Bytes out;
  out.reserve(kAspfHeaderSize + 8 * n);
  for (char c : {'A', 'S', 'P', 'F'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, kAspfVersion);
  put_u32(out, static_cast<std::uint32_t>(map.width));
  put_u32(out, static_cast<std::uint32_t>(map.height));
  put_u32(out, static_cast<std::uint32_t>(map.origin.x));
  put_u32(out, static_cast<std::uint32_t>(map.origin.y));
  out.push_back(static_cast<std::uint8_t>(map.method));
  out.insert(out.end(), 3, 0);
  for (double v : map.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

DistanceMap read_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kAspfHeaderSize) {
    throw ParseError("truncated ASPF header: expected " + std::to_string(kAspfHeaderSize) +
                         " bytes, got " + std::to_string(bytes.size()),
                     bytes.size());
  }
  if (std::memcmp(bytes.data(), "ASPF", 4) != 0) throw ParseError("bad ASPF magic", 0);
  const auto version = get_u32(bytes, 4);
  if (version != kAspfVersion) {
    throw ParseError("unsupported ASPF version " + std::to_string(version), 4);
  }
  DistanceMap map;
  const auto w = get_u32(bytes, 8);
  const auto h = get_u32(bytes, 12);
  if (w > 0x7FFFFFFFu || h > 0x7FFFFFFFu) throw ParseError("ASPF dimensions too large", 8);
  map.width = static_cast<int>(w);
  map.height = static_cast<int>(h);
  map.origin.x = static_cast<std::int32_t>(get_u32(bytes, 16));
  map.origin.y = static_cast<std::int32_t>(get_u32(bytes, 20));
  const auto tag = bytes[24];
  if (tag > 1) throw ParseError("unknown ASPF method tag " + std::to_string(tag), 24);
  map.method = static_cast<MapMethod>(tag);
  if (bytes[25] != 0 || bytes[26] != 0 || bytes[27] != 0) {
    throw ParseError("ASPF reserved bytes must be zero", 25);
  }
  const std::uint64_t n = static_cast<std::uint64_t>(w) * h;
  const std::uint64_t expected = kAspfHeaderSize + 8 * n;
  if (bytes.size() != expected) {
    throw ParseError("ASPF length mismatch: expected " + std::to_string(expected) +
                         " bytes, got " + std::to_string(bytes.size()),
                     std::min<std::size_t>(bytes.size(), expected));
  }
  map.values.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    map.values[i] = std::bit_cast<double>(get_u64(bytes, kAspfHeaderSize + 8 * i));
  }
  return map;
}

GreyImage quantize_map(const DistanceMap& map, double ceiling) {
  if (!(ceiling > 0.0)) {
    throw DomainError("quantize_map: ceiling must be > 0, got " + std::to_string(ceiling));
  }
  std::vector<double> px(map.values.size());
  std::transform(map.values.begin(), map.values.end(), px.begin(), [ceiling](double v) {
    const double c = std::clamp(v, 0.0, ceiling);
    return std::round(c / ceiling * 255.0);
  });
  return GreyImage(map.width, map.height, LipScale(256.0), std::move(px));
}

StructuringFunction probe_from_pgm(const GreyImage& values, const std::optional<GreyImage>& mask) {
  return StructuringFunction(values.width, values.height, values.scale, values.pixels,
                             mask_from(values, mask));
}

AdditiveSF additive_sf_from_pgm(const GreyImage& values, const std::optional<GreyImage>& mask) {
  return AdditiveSF(values.width, values.height, values.pixels, mask_from(values, mask));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace lipasp
