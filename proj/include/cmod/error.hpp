#ifndef CMOD_ERROR_HPP_
#define CMOD_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmod {

  // Malformed input text (.alg files, identity DSL, prefix terms).
  class ParseError : public std::runtime_error {
   public:
    ParseError(std::string const& msg, std::size_t line, std::size_t column = 0)
        : std::runtime_error(format(msg, line, column)),
          _line(line),
          _column(column) {}

    std::size_t line() const noexcept {
      return _line;
    }
    std::size_t column() const noexcept {
      return _column;
    }

   private:
    static std::string format(std::string const& msg,
                              std::size_t        line,
                              std::size_t        column) {
      std::string out = "line " + std::to_string(line);
      if (column != 0) {
        out += ", column " + std::to_string(column);
      }
      return out + ": " + msg;
    }

    std::size_t _line;
    std::size_t _column;
  };

  // A configured size or work limit was hit; the computation was abandoned.
  class CapExceeded : public std::runtime_error {
   public:
    explicit CapExceeded(std::string const& msg) : std::runtime_error(msg) {}
  };

}  // namespace cmod

#endif  // CMOD_ERROR_HPP_
