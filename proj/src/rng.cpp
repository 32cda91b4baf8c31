#include "topo/rng.hpp"

#include <cmath>
#include <numbers>

namespace topo {

double GaussianSource::uniform_open()
{
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double GaussianSource::standard_normal()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

} // namespace topo
