#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cocomment {

// Whole-file read; throws InputError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Tracks the files a stage writes so that a failed stage can remove them.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  void write(const std::filesystem::path& path, std::string_view content);
  const std::vector<std::filesystem::path>& paths() const { return paths_; }

  // Keeps the written files.
  void commit() { committed_ = true; }
  // Removes every file written so far.
  void rollback() noexcept;

 private:
  std::vector<std::filesystem::path> paths_;
  bool committed_ = false;
};

}  // namespace cocomment
