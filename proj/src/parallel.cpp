#include "bfns/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace bfns {

int resolve_jobs(int requested) {
    int jobs = requested < 1 ? 1 : requested;
    if (const char* env = std::getenv(kMaxJobsVariable)) {
        std::string_view s(env);
        int cap = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (ec == std::errc{} && ptr == s.data() + s.size() && cap >= 1 && cap < jobs) jobs = cap;
    }
    return jobs;
}

}  // namespace bfns
