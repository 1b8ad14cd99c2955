#pragma once

#include "miniqt/common.hpp"

#include <chrono>
#include <cstdint>
#include <optional>

namespace miniqt {

/// Cooperative time/memory budget. Long-running loops call poll(); every few
/// thousand calls it compares the clock and resident set size against the
/// limits and throws ResourceLimit.
class ResourceGuard {
  public:
    ResourceGuard() = default;
    ResourceGuard(std::chrono::steady_clock::duration timeout, std::optional<std::uint64_t> memLimitKb);

    static ResourceGuard from(const VerifierConfig &config);

    void poll()
    {
        if (++ticks_ % 4096 == 0)
            check();
    }
    void check() const;

  private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::optional<std::uint64_t> memLimitKb_;
    std::uint64_t ticks_ = 0;
};

/// Current resident set size of this process in KiB (0 if unknown).
std::uint64_t current_rss_kb();
/// Peak resident set size of this process in KiB.
std::uint64_t peak_rss_kb();

} // namespace miniqt
