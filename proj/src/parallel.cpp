#include "hhgwm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hhgwm {

int default_threads() {
  if (const char* env = std::getenv("HHGWM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hhgwm
