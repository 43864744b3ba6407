#include "prtt/diagnostics.hpp"

namespace prtt {

std::string to_string(const SourceSpan& span) {
  return (span.file.empty() ? std::string("<input>") : span.file) + ":" +
         std::to_string(span.line) + ":" + std::to_string(span.column);
}

Diagnostic::Diagnostic(std::string kind, std::string message, std::optional<SourceSpan> span)
    : std::runtime_error(message),
      kind_(std::move(kind)),
      message_(std::move(message)),
      span_(std::move(span)) {}

void Diagnostic::set_span(SourceSpan span) { span_ = std::move(span); }

std::string Diagnostic::render() const {
  std::string head = "[" + kind_ + "] " + message_;
  return span_ ? to_string(*span_) + ": " + head : head;
}

nlohmann::json Diagnostic::to_json() const {
  nlohmann::json j = {{"kind", kind_}, {"message", message_}};
  if (span_) {
    j["span"] = {{"file", span_->file},
                 {"line", span_->line},
                 {"column", span_->column},
                 {"length", span_->length}};
  }
  return j;
}

}  // namespace prtt
