#pragma once

#include <mutex>

namespace snlw::detail {

// FFTW's planner is not re-entrant; every plan creation and destruction in
// the library takes this lock.
std::mutex& fftw_planner_mutex();

}  // namespace snlw::detail
