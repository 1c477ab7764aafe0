#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cctv {

/// Malformed or schema-violating input. Carries a 1-based line/column when
/// the failure can be pinned to a position in the source text.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::optional<std::size_t> line = std::nullopt,
                      std::optional<std::size_t> column = std::nullopt)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::optional<std::size_t> line,
                            std::optional<std::size_t> column) {
    if (!line) return what;
    std::string s = "line " + std::to_string(*line);
    if (column) s += ", column " + std::to_string(*column);
    return s + ": " + what;
  }

  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

/// 1-based line and column of byte offset `pos` in `text`.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t pos) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace cctv
