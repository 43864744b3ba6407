#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace prtt {

// 1-based position of a token or construct in a source file.
struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;
};

std::string to_string(const SourceSpan& span);

// Any diagnostic the front end can report to a user.
class Diagnostic : public std::runtime_error {
 public:
  Diagnostic(std::string kind, std::string message, std::optional<SourceSpan> span = std::nullopt);

  const std::string& kind() const { return kind_; }
  const std::string& message() const { return message_; }
  const std::optional<SourceSpan>& span() const { return span_; }
  void set_span(SourceSpan span);

  // `file:line:col: [KIND] message`
  std::string render() const;
  virtual nlohmann::json to_json() const;

 private:
  std::string kind_;
  std::string message_;
  std::optional<SourceSpan> span_;
  std::string rendered_;
};

}  // namespace prtt
