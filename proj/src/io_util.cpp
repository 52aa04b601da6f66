#include "flowparts/io_util.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowparts/errors.hpp"

#ifdef __unix__
#include <unistd.h>
#endif

namespace flowparts {

namespace {

std::string temp_path_for(const std::string& path) {
  static std::atomic<unsigned long> counter{0};
  unsigned long pid = 0;
#ifdef __unix__
  pid = static_cast<unsigned long>(::getpid());
#endif
  std::ostringstream os;
  os << path << ".tmp-" << pid << "-" << counter.fetch_add(1);
  return os.str();
}

}  // namespace

void atomic_write_file(const std::string& path, std::string_view bytes) {
  const std::string tmp = temp_path_for(path);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + tmp);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  if (!f && !f.eof()) throw IoError("read failed: " + path);
  return os.str();
}

}  // namespace flowparts
