#pragma once

#include <stdexcept>
#include <string>

namespace dk {

// Error categories exposed one-to-one through the C API status codes.
enum class Err {
  ok = 0,
  argument,     // bad argument (dimension mismatch, non-unitary matrix, ...)
  parse,        // malformed expression or spec file
  io,           // file not readable / writable
  domain,       // point outside bounding box / outside the valid tube
  convergence,  // Newton projection did not converge from any start
  ambiguity,    // two nearest boundary points at equal distance
  singular,     // evaluation at a singular point (delta = 0 for D-forms)
  accuracy,     // a computed quantity failed its internal consistency check
  sampling,     // rejection sampling starved (shell too thin for the box)
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline const char* err_name(Err e) {
  switch (e) {
    case Err::ok: return "ok";
    case Err::argument: return "argument";
    case Err::parse: return "parse";
    case Err::io: return "io";
    case Err::domain: return "domain";
    case Err::convergence: return "convergence";
    case Err::ambiguity: return "ambiguity";
    case Err::singular: return "singular";
    case Err::accuracy: return "accuracy";
    case Err::sampling: return "sampling";
    case Err::internal: return "internal";
  }
  return "unknown";
}

}  // namespace dk
