#include "efimov4d/parallel.hpp"

#include <cstdlib>
#include <string>

namespace efimov4d::parallel {

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EFIMOV4D_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
            // unparsable values are ignored
        }
    }
    return n;
}

}  // namespace efimov4d::parallel
