#include "manifold/features.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "manifold/errors.hpp"

namespace manifold {

namespace {

constexpr char kMagic[4] = {'F', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "feature file I/O assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DataError(std::string("truncated feature file while reading ") + what);
    return value;
}

}  // namespace

const char* Metric::name() const {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::CosineDistance: return "cosine-distance";
        case MetricKind::ArcLength: return "arc-length";
    }
    return "?";
}

Metric Metric::parse(const std::string& name) {
    if (name == "euclidean") return {MetricKind::Euclidean};
    if (name == "cosine" || name == "cosine-distance") return {MetricKind::CosineDistance};
    if (name == "arc-length" || name == "arc" || name == "arccos")
        return {MetricKind::ArcLength};
    throw UsageError("unknown metric '" + name +
                     "' (expected euclidean, cosine-distance, or arc-length)");
}

namespace {

template <typename Scalar>
double distance_impl(std::span<const Scalar> a, std::span<const Scalar> b, Metric metric) {
    if (a.size() != b.size()) {
        throw DataError("pairwise_distance: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = static_cast<double>(a[i]);
        const double y = static_cast<double>(b[i]);
        const double diff = x - y;
        sq += diff * diff;
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    switch (metric.kind) {
        case MetricKind::Euclidean:
            return std::sqrt(sq);
        case MetricKind::CosineDistance:
        case MetricKind::ArcLength: {
            if (na <= 0.0 || nb <= 0.0)
                throw DataError(std::string("zero-norm input under ") + metric.name());
            double ratio = dot / (std::sqrt(na) * std::sqrt(nb));
            ratio = std::clamp(ratio, -1.0, 1.0);
            return metric.kind == MetricKind::CosineDistance ? 1.0 - ratio : std::acos(ratio);
        }
    }
    return 0.0;
}

}  // namespace

double pairwise_distance(std::span<const float> a, std::span<const float> b, Metric metric) {
    return distance_impl(a, b, metric);
}

double pairwise_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
    return distance_impl(a, b, metric);
}

FeatureMatrix::FeatureMatrix(Matrix32 data, std::vector<std::int64_t> labels,
                             std::vector<std::string> row_ids)
    : data_(std::move(data)), labels_(std::move(labels)), row_ids_(std::move(row_ids)) {
    validate();
}

void FeatureMatrix::validate() const {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw DataError("feature matrix must have n >= 1 and d >= 1");
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            if (!std::isfinite(data_(i, j))) {
                throw DataError("non-finite feature value at row " + std::to_string(i + 1) +
                                ", column " + std::to_string(j + 1));
            }
        }
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != data_.rows())
        throw DataError("label count does not match row count");
    if (!row_ids_.empty() && static_cast<Eigen::Index>(row_ids_.size()) != data_.rows())
        throw DataError("row id count does not match row count");
}

FeatureFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? FeatureFormat::Csv : FeatureFormat::Binary;
}

namespace {

FeatureMatrix load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open feature file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("malformed header: bad magic in " + path.string());
    const auto version = read_pod<std::uint32_t>(in, "version");
    if (version != kVersion)
        throw DataError("unsupported feature file version " + std::to_string(version));
    const auto n = read_pod<std::uint64_t>(in, "row count");
    const auto d = read_pod<std::uint64_t>(in, "dimension");
    const auto flags = read_pod<std::uint32_t>(in, "flags");
    if (n == 0 || d == 0) throw DataError("malformed header: empty matrix in " + path.string());

    Matrix32 data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(n * d * sizeof(float)));
    if (!in) throw DataError("truncated payload in " + path.string());

    std::vector<std::int64_t> labels;
    if (flags & 1u) {
        labels.resize(n);
        in.read(reinterpret_cast<char*>(labels.data()),
                static_cast<std::streamsize>(n * sizeof(std::int64_t)));
        if (!in) throw DataError("truncated label block in " + path.string());
    }
    return FeatureMatrix(std::move(data), std::move(labels));
}

FeatureMatrix load_csv(const std::filesystem::path& path, CsvOptions csv) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature file: " + path.string());

    std::vector<float> values;
    std::vector<std::int64_t> labels;
    Eigen::Index cols = -1;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        std::vector<std::string_view> fields;
        const char* begin = line.data();
        const char* end = begin + line.size();
        const char* field_start = begin;
        for (const char* p = begin;; ++p) {
            if (p == end || *p == ',') {
                fields.emplace_back(field_start, static_cast<std::size_t>(p - field_start));
                field_start = p + 1;
                if (p == end) break;
            }
        }
        const Eigen::Index n_fields = static_cast<Eigen::Index>(fields.size());
        if (cols < 0) {
            cols = n_fields;
            if (csv.labels_col >= cols)
                throw DataError("labels column " + std::to_string(csv.labels_col) +
                                " out of range for " + std::to_string(cols) + " columns");
        } else if (n_fields != cols) {
            throw DataError("row-length mismatch at row " + std::to_string(row) + ": expected " +
                            std::to_string(cols) + " fields, got " + std::to_string(n_fields));
        }
        for (Eigen::Index c = 0; c < n_fields; ++c) {
            std::string_view f = fields[static_cast<std::size_t>(c)];
            while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
            while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r'))
                f.remove_suffix(1);
            if (c == csv.labels_col) {
                std::int64_t lbl = 0;
                auto res = std::from_chars(f.data(), f.data() + f.size(), lbl);
                if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                    throw DataError("bad label at row " + std::to_string(row));
                labels.push_back(lbl);
                continue;
            }
            float v = 0.f;
            auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw DataError("unparseable value at row " + std::to_string(row));
            if (!std::isfinite(v))
                throw DataError("non-finite value at row " + std::to_string(row));
            values.push_back(v);
        }
    }
    if (row == 0) throw DataError("empty CSV file: " + path.string());
    const Eigen::Index data_cols = cols - (csv.labels_col >= 0 ? 1 : 0);
    if (data_cols < 1) throw DataError("CSV has no feature columns: " + path.string());
    Matrix32 data(static_cast<Eigen::Index>(row), data_cols);
    std::memcpy(data.data(), values.data(), values.size() * sizeof(float));
    return FeatureMatrix(std::move(data), std::move(labels));
}

void save_binary(const FeatureMatrix& m, std::ostream& out) {
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint64_t>(m.rows()));
    write_pod(out, static_cast<std::uint64_t>(m.dim()));
    write_pod(out, static_cast<std::uint32_t>(m.has_labels() ? 1u : 0u));
    out.write(reinterpret_cast<const char*>(m.data().data()),
              static_cast<std::streamsize>(static_cast<std::size_t>(m.rows()) *
                                           static_cast<std::size_t>(m.dim()) * sizeof(float)));
    if (m.has_labels()) {
        out.write(reinterpret_cast<const char*>(m.labels().data()),
                  static_cast<std::streamsize>(m.labels().size() * sizeof(std::int64_t)));
    }
}

void save_csv(const FeatureMatrix& m, std::ostream& out, CsvOptions csv) {
    char buf[48];
    const bool with_labels = m.has_labels() && csv.labels_col >= 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        bool first = true;
        Eigen::Index data_col = 0;
        const Eigen::Index total = m.dim() + (with_labels ? 1 : 0);
        for (Eigen::Index c = 0; c < total; ++c) {
            if (!first) out.put(',');
            first = false;
            if (with_labels && c == csv.labels_col) {
                out << m.labels()[static_cast<std::size_t>(i)];
            } else {
                // 9 significant digits round-trip a 32-bit float exactly.
                std::snprintf(buf, sizeof(buf), "%.9g",
                              static_cast<double>(m.data()(i, data_col++)));
                out << buf;
            }
        }
        out.put('\n');
    }
}

}  // namespace

FeatureMatrix load_features(const std::filesystem::path& path, FeatureFormat format,
                            CsvOptions csv) {
    return format == FeatureFormat::Binary ? load_binary(path) : load_csv(path, csv);
}

void save_features(const FeatureMatrix& m, const std::filesystem::path& path,
                   FeatureFormat format, CsvOptions csv) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        if (format == FeatureFormat::Binary) {
            save_binary(m, out);
        } else {
            save_csv(m, out, csv);
        }
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace manifold
