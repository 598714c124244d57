#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace manifold {

using Matrix32 = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class MetricKind { Euclidean, CosineDistance, ArcLength };

// Distance/dissimilarity between embedding rows. Euclidean and arc-length are
// proper metrics; cosine-distance (1 - cosine similarity) is a dissimilarity
// used only for neighbor ranking, never as a geodesic edge weight.
struct Metric {
    MetricKind kind = MetricKind::Euclidean;

    bool is_true_metric() const { return kind != MetricKind::CosineDistance; }
    const char* name() const;
    static Metric parse(const std::string& name);
};

// d(a, b) under the given metric. Accumulation is in double regardless of the
// input precision; the arc-length inner-product ratio is clamped to [-1, 1].
double pairwise_distance(std::span<const float> a, std::span<const float> b, Metric metric);
double pairwise_distance(std::span<const double> a, std::span<const double> b, Metric metric);

// n x d embedding matrix, immutable after load. Canonical storage is 32-bit
// float, row-major. Labels (per-row class ids) and row ids are optional.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(Matrix32 data, std::vector<std::int64_t> labels = {},
                           std::vector<std::string> row_ids = {});

    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index dim() const { return data_.cols(); }

    const Matrix32& data() const { return data_; }
    std::span<const float> row(Eigen::Index i) const {
        return {data_.row(i).data(), static_cast<std::size_t>(data_.cols())};
    }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::int64_t>& labels() const { return labels_; }
    bool has_row_ids() const { return !row_ids_.empty(); }
    const std::vector<std::string>& row_ids() const { return row_ids_; }

    double distance(Eigen::Index i, Eigen::Index j, Metric metric) const {
        return pairwise_distance(row(i), row(j), metric);
    }

private:
    void validate() const;

    Matrix32 data_;
    std::vector<std::int64_t> labels_;
    std::vector<std::string> row_ids_;
};

enum class FeatureFormat { Binary, Csv };

struct CsvOptions {
    // Column index holding integer labels, or -1 for none.
    int labels_col = -1;
};

// Binary layout: magic "FMAT", version u32=1, n u64, d u64, flags u32
// (bit0: labels present), n*d little-endian f32 row-major, then n i64 labels.
FeatureMatrix load_features(const std::filesystem::path& path, FeatureFormat format,
                            CsvOptions csv = {});

// Writes to a temp file in the target directory, then renames over `path`.
void save_features(const FeatureMatrix& m, const std::filesystem::path& path,
                   FeatureFormat format, CsvOptions csv = {});

// Picks the format from the extension: .csv -> Csv, everything else binary.
FeatureFormat format_for_path(const std::filesystem::path& path);

}  // namespace manifold
