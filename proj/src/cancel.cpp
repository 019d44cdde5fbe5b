#include "featrange/cancel.hpp"

#include <atomic>

namespace featrange {

namespace {
std::atomic<bool> flag{false};
}

void request_cancel() { flag.store(true, std::memory_order_relaxed); }
void clear_cancel() { flag.store(false, std::memory_order_relaxed); }
bool cancel_requested() { return flag.load(std::memory_order_relaxed); }

}  // namespace featrange
