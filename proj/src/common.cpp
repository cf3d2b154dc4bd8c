#include "fockline/common.hpp"

#include <omp.h>

#include <cstdlib>

namespace fockline {

int worker_count() {
  static const int cap = [] {
    const char* env = std::getenv("FOCKLINE_THREADS");
    int n = env ? std::atoi(env) : 0;
    int hw = omp_get_max_threads();
    return (n <= 0 || n > hw) ? hw : n;
  }();
  return cap;
}

}  // namespace fockline
