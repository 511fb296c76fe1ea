#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

enum class Errc {
  invalid_argument,
  length_mismatch,
  empty_input,
  malformed_certificate,
  not_enough_entries,
  structural,
  config,
  io,
};

// All library failures are reported as symdyn::Error; the C API maps the
// code onto symdyn_status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace symdyn
