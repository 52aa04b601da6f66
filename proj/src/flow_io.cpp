#include "flowparts/flow_io.hpp"

#include <cstdint>
#include <cstring>

#include "flowparts/errors.hpp"
#include "flowparts/io_util.hpp"

namespace flowparts {

namespace {

constexpr char kMagic[4] = {'P', 'I', 'E', 'H'};

void put_u32le(std::string& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.append(b, 4);
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_flow(const FlowField& field, const std::string& path) {
  std::string out;
  out.reserve(12 + field.uv.size() * 4);
  out.append(kMagic, 4);
  put_u32le(out, static_cast<std::uint32_t>(field.width));
  put_u32le(out, static_cast<std::uint32_t>(field.height));
  for (float f : field.uv) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32le(out, bits);
  }
  atomic_write_file(path, out);
}

FlowField read_flow(const std::string& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("bad flow magic: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t w = get_u32le(p + 4);
  const std::uint32_t h = get_u32le(p + 8);
  if (w == 0 || h == 0 || w > 1'000'000 || h > 1'000'000)
    throw FormatError("bad flow dimensions: " + path);
  const std::size_t count = static_cast<std::size_t>(w) * h * 2;
  if (bytes.size() != 12 + count * 4) throw FormatError("truncated flow payload: " + path);
  FlowField field(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32le(p + 12 + i * 4);
    std::memcpy(&field.uv[i], &bits, 4);
  }
  return field;
}

}  // namespace flowparts
