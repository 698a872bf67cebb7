#ifndef RATCHET_SWEEP_HPP
#define RATCHET_SWEEP_HPP

#include <functional>
#include <vector>

namespace ratchet {

/// Runs fn(0..count-1) on a pool of `workers` threads (an atomic cursor hands
/// out indices); each call writes only its own slot, so results are identical
/// for any worker count.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace ratchet

#endif
