// SPDX-License-Identifier: Apache-2.0
#include "kpzh/rng.hpp"

namespace kpzh {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
    std::uint64_t key = mix64(seed ^ mix64(stream_id ^ 0x6a09e667f3bcc909ULL));
    for (auto& w : s_) {
        key += 0x9e3779b97f4a7c15ULL;
        w = mix64(key);
    }
}

RngStream RngStream::split(std::uint64_t sub_id) const {
    return RngStream(seed_, mix64(stream_ + 0xd1b54a32d192ed03ULL * (sub_id + 1)));
}

}  // namespace kpzh
