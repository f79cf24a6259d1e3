#include "cocomment/io.hpp"

#include <fstream>
#include <sstream>

#include "cocomment/error.hpp"

namespace cocomment {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ResourceError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ResourceError("cannot move output into place: " + path.string());
  }
}

OutputSet::~OutputSet() {
  if (!committed_) rollback();
}

void OutputSet::write(const fs::path& path, std::string_view content) {
  write_file_atomic(path, content);
  paths_.push_back(path);
}

void OutputSet::rollback() noexcept {
  for (const auto& p : paths_) {
    std::error_code ec;
    fs::remove(p, ec);
  }
  paths_.clear();
}

}  // namespace cocomment
