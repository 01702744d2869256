// Copyright 2026 The bellviol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>

// Seed derivation. Every random stream in the library is seeded from a
// (parent seed, stream id) pair through the splitmix64 finalizer, so streams
// are independent of evaluation order and worker count.
//
//   mix64(z):  z += 0x9E3779B97F4A7C15
//              z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//
//   derive_seed(parent, id) = mix64(parent ^ mix64(id))
//
// String tags are reduced to stream ids with 64-bit FNV-1a
// (offset 0xCBF29CE484222325, prime 0x100000001B3).

namespace bellviol {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream_id) {
    return mix64(parent ^ mix64(stream_id));
}

constexpr std::uint64_t fnv1a64(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) {
    return derive_seed(parent, fnv1a64(tag));
}

} // namespace bellviol
