#include "miniqt/resource.hpp"

#include <fstream>
#include <sys/resource.h>
#include <unistd.h>

namespace miniqt {

ResourceGuard::ResourceGuard(std::chrono::steady_clock::duration timeout,
                             std::optional<std::uint64_t> memLimitKb)
    : deadline_(std::chrono::steady_clock::now() + timeout), memLimitKb_(memLimitKb)
{
}

ResourceGuard ResourceGuard::from(const VerifierConfig &config)
{
    return ResourceGuard(std::chrono::seconds(config.timeoutSeconds), config.memLimitKb);
}

void ResourceGuard::check() const
{
    if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
        throw ResourceLimit(ResourceLimit::Kind::Timeout);
    if (memLimitKb_ && current_rss_kb() > *memLimitKb_)
        throw ResourceLimit(ResourceLimit::Kind::MemOut);
}

std::uint64_t current_rss_kb()
{
    std::ifstream statm("/proc/self/statm");
    std::uint64_t size = 0, resident = 0;
    if (!(statm >> size >> resident))
        return 0;
    return resident * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE)) / 1024;
}

std::uint64_t peak_rss_kb()
{
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0)
        return 0;
    return static_cast<std::uint64_t>(usage.ru_maxrss);
}

} // namespace miniqt
