#ifndef SCC_ERRORS_HPP
#define SCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scc {

enum class ErrorCode {
  Io = 1,
  Format = 2,
  DuplicateRecord = 3,
  DateGap = 4,
  Degenerate = 5,
  Domain = 6,
  Numeric = 7,
  Rank = 8,
  Mismatch = 9,
  InvalidArgument = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace scc

#endif
