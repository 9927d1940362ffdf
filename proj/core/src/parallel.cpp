#include "ionwake/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace ionwake {

std::size_t resolve_workers(std::size_t requested) {
  std::size_t workers = requested;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("IONWAKE_THREADS")) {
    try {
      const long value = std::stol(cap);
      if (value > 0) workers = std::min(workers, static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      // Ignore malformed caps.
    }
  }
  return workers;
}

}  // namespace ionwake
