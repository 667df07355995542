#pragma once

#include <stdexcept>
#include <string>

namespace eegsl {

/// Error categories shared by the C++ core and the C API status codes.
enum class errc {
  invalid_argument = 1,   // bad counts, bad partitions, bad montage, bad index
  shape_mismatch = 2,     // incompatible vector/matrix dimensions
  geometry = 3,           // source outside the inner shell, bad radii
  parse = 4,              // malformed file
  data = 5,               // non-finite or otherwise unusable values
  state = 6,              // operation called before its preconditions were set up
  numeric = 7,            // iterative scheme failed to converge
  io = 8,                 // filesystem failure
  no_active_solution = 9, // decision maker found no supported front member
  undefined_lambda = 10,  // lambda_hat on an all-zero estimate
  degenerate_gcv = 11,    // df >= m over the whole grid
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

} // namespace eegsl
