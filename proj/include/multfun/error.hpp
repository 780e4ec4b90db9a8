#pragma once

#include <stdexcept>
#include <string>

namespace multfun {

enum class ErrorKind {
  input,        // malformed or out-of-range arguments
  resource,     // memory or compute budget exceeded
  search,       // bounded search exhausted without a hit
  unreliable,   // estimate requested in a regime where it means nothing
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_input(const std::string& msg) { throw Error(ErrorKind::input, msg); }
[[noreturn]] inline void throw_resource(const std::string& msg) { throw Error(ErrorKind::resource, msg); }

}  // namespace multfun
