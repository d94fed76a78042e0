#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

// exit-code class used by the CLI: input 2, math 3, precision 4
enum class ErrorClass { Input, Math, Precision };

class Error : public std::runtime_error {
 public:
  Error(std::string code, ErrorClass cls, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)), cls_(cls) {}

  const std::string& code() const { return code_; }
  ErrorClass error_class() const { return cls_; }

 private:
  std::string code_;
  ErrorClass cls_;
};

[[noreturn]] inline void math_error(const std::string& code, const std::string& detail) {
  throw Error(code, ErrorClass::Math, detail);
}

[[noreturn]] inline void input_error(const std::string& code, const std::string& detail) {
  throw Error(code, ErrorClass::Input, detail);
}

[[noreturn]] inline void precision_exhausted(const std::string& detail) {
  throw Error("PrecisionExhausted", ErrorClass::Precision, detail);
}

}  // namespace bloch
