#pragma once

#include <sodium.h>

#include <stdexcept>

namespace revoc::detail {

inline void ensure_sodium() {
    static const bool ready = [] {
        if (sodium_init() < 0) {
            throw std::runtime_error("libsodium initialisation failed");
        }
        return true;
    }();
    (void)ready;
}

}  // namespace revoc::detail
