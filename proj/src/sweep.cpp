#include "toric/sweep.hpp"

#include <cstdlib>
#include <string>

namespace toric {

unsigned sweep_threads() {
  if (const char* env = std::getenv("TORIC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace toric
