#pragma once

namespace featrange {

// Cooperative interruption; long-running loops poll this and stop with a partial result.
void request_cancel();
void clear_cancel();
bool cancel_requested();

}  // namespace featrange
