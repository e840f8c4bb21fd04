#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nestdop {

/// Failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
  precondition,  ///< numeric or precondition violation inside a module
  config,        ///< malformed or inconsistent user configuration
  io,            ///< file could not be read or written
};

/// Every error raised by the library names the module it came from.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

[[noreturn]] inline void throw_precondition(std::string_view module,
                                            const std::string& message) {
  throw Error(ErrorKind::precondition, std::string(module), message);
}

[[noreturn]] inline void throw_config(std::string_view module,
                                      const std::string& message) {
  throw Error(ErrorKind::config, std::string(module), message);
}

}  // namespace nestdop
