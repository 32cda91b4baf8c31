#pragma once

#include <cstdint>
#include <random>

namespace topo {

/// Portable Gaussian source.
///
/// Uniforms come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Each uniform uses the top 53 bits of one 64-bit draw, mapped
/// into the open interval (0, 1). Normals use the basic Box-Muller transform
///     z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
/// and both outputs of a pair are consumed in order. std::normal_distribution
/// is not used because its algorithm is implementation-defined.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double uniform_open();
    double standard_normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace topo
