#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fockline {

using cplx = std::complex<double>;

/// Thrown when a numeric self-check fails. The CLI maps this to exit code 2.
class invariant_error : public std::runtime_error {
 public:
  explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

/// Worker cap taken from FOCKLINE_THREADS (0 or unset = all hardware threads).
int worker_count();

}  // namespace fockline
