#pragma once

#include <cstddef>
#include <functional>

namespace tpmpm {

//! Worker count used by per-particle loops. 1 (the default) runs inline.
void set_thread_count(int threads);
int thread_count();

//! Run body(begin, end) over [0, n) in contiguous chunks. Bodies must only
//! write data owned by their index range.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tpmpm
