#pragma once

#include "topo/pointcloud.hpp"

namespace topo {

/// Projects the centred cloud onto its two leading principal axes (exact
/// symmetric eigendecomposition of the d x d covariance). Each axis is signed
/// so that its largest-magnitude component is positive. For d == 1 the second
/// column is zero.
Matrix pca_project_2d(const PointCloud& cloud);

} // namespace topo
