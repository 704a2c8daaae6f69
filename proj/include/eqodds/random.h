/*
 * Copyright 2026 The eqodds Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EQODDS_RANDOM_H_
#define EQODDS_RANDOM_H_

#include <cstdint>

namespace eqodds {

// SplitMix64 finalizer.
std::uint64_t SplitMix64(std::uint64_t x);

// Counter-based derivation of an independent stream seed from (seed, index).
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace eqodds

#endif  // EQODDS_RANDOM_H_
