// Copyright 2026 The rbarray Authors
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

#ifndef RBARRAY_RANDOM_H_
#define RBARRAY_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rbarray {

using Rng = std::mt19937_64;

/// Documented default master seed used when none is given.
inline constexpr std::uint64_t kDefaultSeed = 20150113;

/// Folds `keys` into `seed` with splitmix64 finalizers. Streams derived from
/// distinct key tuples are independent of each other and of scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(seed, keys));
}

/// Stream domain tags so that different consumers of one master seed never collide.
enum class StreamTag : std::uint64_t {
    kSequence = 1,
    kShots = 2,
    kBeam = 3,
    kLoading = 4,
    kReadout = 5,
    kSynthetic = 6,
    kRabi = 7,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace rbarray

#endif  // RBARRAY_RANDOM_H_
