#include "ldplab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ldplab {

namespace {

std::atomic<int> configured_threads{0};

int env_threads() {
    const char* raw = std::getenv("LDPLAB_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    try {
        const int v = std::stoi(raw);
        return v > 0 ? v : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

int thread_count() {
    if (const int env = env_threads(); env > 0) {
        return env;
    }
    if (const int configured = configured_threads.load(); configured > 0) {
        return configured;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int threads) {
    configured_threads.store(threads > 0 ? threads : 0);
}

}  // namespace ldplab
