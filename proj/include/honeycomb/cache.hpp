#pragma once

#include <cstddef>
#include <string>

#include "honeycomb/scalar.hpp"

namespace honeycomb {

constexpr int kCacheVersion = 1;

// Writes the theta/tet/6j memo tables of the backend as versioned JSON.
void save_cache(const std::string& path, const QParam& p);
// Loads entries into the backend's tables. A missing file loads nothing; a
// file of another version or backend is ignored. Returns entries loaded.
std::size_t load_cache(const std::string& path, const QParam& p);

}  // namespace honeycomb
