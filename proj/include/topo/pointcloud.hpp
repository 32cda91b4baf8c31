#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace topo {

// Dense row-major matrix of doubles. No invariants beyond its shape.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// An n x d matrix whose rows are points. Construction enforces n >= 2,
/// d >= 1 and that every coordinate is finite.
class PointCloud {
public:
    explicit PointCloud(Matrix points);

    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return points_.rows(); }
    std::size_t dim() const { return points_.cols(); }

    std::span<const double> point(std::size_t i) const { return points_.row(i); }
    double operator()(std::size_t i, std::size_t j) const { return points_(i, j); }

    const Matrix& matrix() const { return points_; }

    bool operator==(const PointCloud&) const = default;

private:
    Matrix points_;
};

/// Symmetric pairwise Euclidean distances with an exact zero diagonal.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const PointCloud& cloud);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

    double diameter() const;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// n x d entries drawn i.i.d. from N(0, sigma^2) with GaussianSource(seed),
/// filled row by row.
PointCloud gaussian_init(std::size_t n, std::size_t d, double sigma, std::uint64_t seed);

DistanceMatrix distance_matrix(const PointCloud& cloud);

/// Euclidean distance between two equal-length coordinate vectors.
double euclidean(std::span<const double> a, std::span<const double> b);

/// Returns (i, j) of a coincident pair if one exists, with i < j.
bool find_coincident(const DistanceMatrix& distances, std::size_t& i, std::size_t& j);

enum class SnapshotFormat { csv, json };

/// csv for ".csv", json for ".json"; anything else is a FormatError.
SnapshotFormat format_from_path(const std::filesystem::path& path);

struct SnapshotOptions {
    bool csv_header = false;
};

PointCloud load_snapshot(const std::filesystem::path& path, SnapshotFormat format,
                         SnapshotOptions options = {});

void write_snapshot(const PointCloud& cloud, const std::filesystem::path& path,
                    SnapshotFormat format);

/// Snapshot bodies without file I/O; load_snapshot/write_snapshot wrap these.
PointCloud parse_snapshot(const std::string& text, SnapshotFormat format,
                          SnapshotOptions options = {});
std::string format_snapshot(const PointCloud& cloud, SnapshotFormat format);

} // namespace topo
