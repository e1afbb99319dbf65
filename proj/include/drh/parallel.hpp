#pragma once

#include <cstddef>
#include <functional>

namespace drh {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
// write only to their own slot; the first exception (lowest index) is rethrown
// after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace drh
