// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace webreq {

/// 1-based line/column position inside a source file.
struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// A JavaScript file loaded into memory together with its line-offset table.
class SourceFile {
 public:
  SourceFile() = default;
  SourceFile(std::filesystem::path path, std::string text);

  static SourceFile load(const std::filesystem::path& path);

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string_view text() const noexcept { return text_; }
  std::size_t line_count() const noexcept { return line_starts_.size(); }

  /// Maps a byte offset to its 1-based line and column.
  SourcePos position(std::size_t offset) const;

 private:
  std::filesystem::path path_;
  std::string text_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace webreq
