#pragma once

#include <stdexcept>
#include <string>

namespace qlc {

// Failure categories; values line up with the qlc_status codes of the
// public C API so translation is a cast.
enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  parse = 3,
  io = 4,
  capacity = 5,
  encoding = 6,
  optimization = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace qlc
