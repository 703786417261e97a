#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hhg {

/// Root of every error the library throws on purpose. Anything else escaping
/// a public entry point is a bug.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad user configuration (invalid index, empty orbital set, unknown key...).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Request beyond what the implementation supports (e.g. Cartesian power > 6).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// Malformed text at a known location.
class ParseError : public Error {
  public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
               message;
    }

    std::size_t line_;
    std::size_t column_;
};

/// Well-formed text whose content does not add up (missing $END, count mismatch).
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// Semantic validation failure; carries every violation found, not just the first.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "validation failed:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }

    std::vector<std::string> violations_;
};

/// A numerical gate (convergence, saddle residual) was not met.
class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace hhg
