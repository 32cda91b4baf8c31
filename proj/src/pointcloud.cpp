#include "topo/pointcloud.hpp"

#include "topo/errors.hpp"
#include "topo/rng.hpp"
#include "topo/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace topo {

namespace {

void check_shape(std::size_t n, std::size_t d)
{
    if (n < 2) {
        throw DimensionError("point cloud needs at least 2 points, got " + std::to_string(n));
    }
    if (d < 1) {
        throw DimensionError("point cloud needs dimension >= 1");
    }
}

} // namespace

PointCloud::PointCloud(Matrix points) : points_(std::move(points))
{
    check_shape(points_.rows(), points_.cols());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        for (std::size_t j = 0; j < points_.cols(); ++j) {
            if (!std::isfinite(points_(i, j))) {
                throw ValidationError("non-finite coordinate at point " + std::to_string(i) +
                                      ", axis " + std::to_string(j));
            }
        }
    }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty()) {
        throw DimensionError("point cloud needs at least 2 points, got 0");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw FormatError("ragged rows: row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " values, expected " +
                              std::to_string(m.cols()));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return PointCloud(std::move(m));
}

double euclidean(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

DistanceMatrix::DistanceMatrix(const PointCloud& cloud) : n_(cloud.size()), values_(n_ * n_, 0.0)
{
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double dist = euclidean(cloud.point(i), cloud.point(j));
            if (!std::isfinite(dist)) {
                throw ValidationError("distance overflow between points " + std::to_string(i) +
                                      " and " + std::to_string(j));
            }
            values_[i * n_ + j] = dist;
            values_[j * n_ + i] = dist;
        }
    }
}

double DistanceMatrix::diameter() const
{
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

DistanceMatrix distance_matrix(const PointCloud& cloud)
{
    return DistanceMatrix(cloud);
}

bool find_coincident(const DistanceMatrix& distances, std::size_t& i, std::size_t& j)
{
    const std::size_t n = distances.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (distances(a, b) == 0.0) {
                i = a;
                j = b;
                return true;
            }
        }
    }
    return false;
}

PointCloud gaussian_init(std::size_t n, std::size_t d, double sigma, std::uint64_t seed)
{
    check_shape(n, d);
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be a finite nonnegative number");
    }
    GaussianSource source(seed);
    Matrix m(n, d);
    for (double& v : m.values()) {
        v = sigma * source.standard_normal();
    }
    return PointCloud(std::move(m));
}

SnapshotFormat format_from_path(const std::filesystem::path& path)
{
    const auto ext = path.extension().string();
    if (ext == ".csv") {
        return SnapshotFormat::csv;
    }
    if (ext == ".json") {
        return SnapshotFormat::json;
    }
    throw FormatError("cannot infer snapshot format from '" + path.string() +
                      "' (expected .csv or .json)");
}

namespace {

PointCloud parse_csv(const std::string& body, bool header)
{
    std::vector<std::vector<double>> rows;
    std::size_t expected = 0;
    const auto all = text::lines(body);
    for (std::size_t li = header ? 1 : 0; li < all.size(); ++li) {
        const auto line = all[li];
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            continue;
        }
        const auto fields = text::split(line, ',');
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto value = text::parse_real(fields[c]);
            if (!value) {
                throw ParseError("row " + std::to_string(li + 1) + ", column " +
                                 std::to_string(c + 1) + ": not a finite number: '" +
                                 std::string(fields[c]) + "'");
            }
            row.push_back(*value);
        }
        if (rows.empty()) {
            expected = row.size();
        } else if (row.size() != expected) {
            throw FormatError("row " + std::to_string(li + 1) + ": ragged row with " +
                              std::to_string(row.size()) + " columns, expected " +
                              std::to_string(expected));
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) {
        throw DimensionError("snapshot has " + std::to_string(rows.size()) +
                             " points, need at least 2");
    }
    return PointCloud::from_rows(rows);
}

PointCloud parse_json(const std::string& body)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError("snapshot JSON must be an array of arrays");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < doc.size(); ++r) {
        const auto& jrow = doc[r];
        if (!jrow.is_array()) {
            throw FormatError("row " + std::to_string(r + 1) + " is not an array");
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < jrow.size(); ++c) {
            if (!jrow[c].is_number()) {
                throw ParseError("row " + std::to_string(r + 1) + ", column " +
                                 std::to_string(c + 1) + ": not a number");
            }
            row.push_back(jrow[c].get<double>());
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError("row " + std::to_string(r + 1) + ": ragged row with " +
                              std::to_string(row.size()) + " columns, expected " +
                              std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) {
        throw DimensionError("snapshot has " + std::to_string(rows.size()) +
                             " points, need at least 2");
    }
    return PointCloud::from_rows(rows);
}

} // namespace

PointCloud parse_snapshot(const std::string& body, SnapshotFormat format, SnapshotOptions options)
{
    return format == SnapshotFormat::csv ? parse_csv(body, options.csv_header) : parse_json(body);
}

std::string format_snapshot(const PointCloud& cloud, SnapshotFormat format)
{
    std::string out;
    if (format == SnapshotFormat::json) {
        out += '[';
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (format == SnapshotFormat::json) {
            out += i == 0 ? "[" : ",[";
        }
        for (std::size_t j = 0; j < cloud.dim(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += text::format_real(cloud(i, j));
        }
        out += format == SnapshotFormat::json ? "]" : "\n";
    }
    if (format == SnapshotFormat::json) {
        out += "]\n";
    }
    return out;
}

PointCloud load_snapshot(const std::filesystem::path& path, SnapshotFormat format,
                         SnapshotOptions options)
{
    return parse_snapshot(text::read_file(path), format, options);
}

void write_snapshot(const PointCloud& cloud, const std::filesystem::path& path,
                    SnapshotFormat format)
{
    text::write_file(path, format_snapshot(cloud, format));
}

} // namespace topo
