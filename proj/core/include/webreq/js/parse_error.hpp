// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "webreq/source.hpp"

namespace webreq::js {

/// Raised for malformed source; the file is excluded from analysis.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                           message),
        pos_(pos),
        detail_(message) {}

  SourcePos position() const noexcept { return pos_; }
  int line() const noexcept { return pos_.line; }
  int column() const noexcept { return pos_.column; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

}  // namespace webreq::js
