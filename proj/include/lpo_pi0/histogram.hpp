#pragma once

#include "lpo_pi0/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace lpo_pi0 {

// --------------------------------------------------------------------------------------------------------------------
// P-value samples
// --------------------------------------------------------------------------------------------------------------------

/// Validated p-values, sorted ascending. Remembers where each sorted value sat
/// in the caller's input so results can be reported in the original order.
class PValueSample {
public:
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// original_index()[i] is the input position of values()[i].
    std::span<const std::size_t> original_index() const noexcept { return original_; }

    friend PValueSample load_sample(std::span<const double> raw);

private:
    std::vector<double> values_;
    std::vector<std::size_t> original_;
};

inline PValueSample load_sample(std::span<const double> raw)
{
    if (raw.empty()) throw Error(ErrorCode::EmptyInput, "no p-values supplied");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = raw[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFinite, "p-value at index " + std::to_string(i) + " is not finite", i);
        }
        if (v < 0.0 || v > 1.0) {
            throw Error(ErrorCode::OutOfRange,
                        "p-value at index " + std::to_string(i) + " is outside [0,1]: " + std::to_string(v), i);
        }
    }
    if (raw.size() < 2) throw Error(ErrorCode::TooFewValues, "at least two p-values are required");

    PValueSample sample;
    sample.original_.resize(raw.size());
    std::iota(sample.original_.begin(), sample.original_.end(), std::size_t{0});
    std::stable_sort(sample.original_.begin(), sample.original_.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
    sample.values_.reserve(raw.size());
    for (auto i : sample.original_) sample.values_.push_back(raw[i]);
    return sample;
}

// --------------------------------------------------------------------------------------------------------------------
// Partitions
// --------------------------------------------------------------------------------------------------------------------

/// Left edge j/N of the regular grid. Every bin-membership decision in the
/// library goes through this one expression.
inline double grid_edge(int j, int resolution) noexcept
{
    return static_cast<double>(j) / static_cast<double>(resolution);
}

/// Non-regular histogram on [0,1]: `central_lo` regular bins of width 1/N,
/// one central bin [central_lo/N, central_hi/N], then N - central_hi regular bins.
struct PartitionSpec {
    int resolution = 1;
    int central_lo = 0;
    int central_hi = 1;

    int dimension() const noexcept { return central_lo + 1 + (resolution - central_hi); }
    int central_bins() const noexcept { return central_hi - central_lo; }
    int central_index() const noexcept { return central_lo; }
    double lambda() const noexcept { return grid_edge(central_lo, resolution); }
    double mu() const noexcept { return grid_edge(central_hi, resolution); }
    double central_width() const noexcept { return grid_edge(central_bins(), resolution); }

    bool valid() const noexcept
    {
        return resolution >= 1 && central_lo >= 0 && central_lo < central_hi && central_hi <= resolution;
    }

    friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

inline PartitionSpec make_partition(int resolution, int central_lo, int central_hi)
{
    PartitionSpec spec{resolution, central_lo, central_hi};
    if (!spec.valid()) {
        throw Error(ErrorCode::InvalidRange, "partition requires 0 <= k < l <= N, got (" + std::to_string(resolution) +
                                                 "," + std::to_string(central_lo) + "," +
                                                 std::to_string(central_hi) + ")");
    }
    return spec;
}

/// Bin widths in left-to-right order.
inline std::vector<double> bin_widths(const PartitionSpec& spec)
{
    std::vector<double> widths;
    widths.reserve(static_cast<std::size_t>(spec.dimension()));
    const double thin = grid_edge(1, spec.resolution);
    for (int j = 0; j < spec.central_lo; ++j) widths.push_back(thin);
    widths.push_back(spec.central_width());
    for (int j = spec.central_hi; j < spec.resolution; ++j) widths.push_back(thin);
    return widths;
}

/// Number of specs with n_min <= N <= n_max: sum of N(N+1)/2.
inline std::int64_t partition_count(int n_min, int n_max) noexcept
{
    std::int64_t total = 0;
    for (std::int64_t n = n_min; n <= n_max; ++n) total += n * (n + 1) / 2;
    return total;
}

/// Lazily enumerates every (N, k, l) with n_min <= N <= n_max and 0 <= k < l <= N,
/// ordered by N, then k, then l. Duplicated bin sets across N are all yielded.
class PartitionRange {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = PartitionSpec;
        using difference_type = std::ptrdiff_t;
        using pointer = const PartitionSpec*;
        using reference = const PartitionSpec&;

        iterator() = default;
        explicit iterator(PartitionSpec at) : at_(at) {}

        reference operator*() const noexcept { return at_; }
        pointer operator->() const noexcept { return &at_; }

        iterator& operator++() noexcept
        {
            if (++at_.central_hi > at_.resolution) {
                if (++at_.central_lo >= at_.resolution) {
                    ++at_.resolution;
                    at_.central_lo = 0;
                }
                at_.central_hi = at_.central_lo + 1;
            }
            return *this;
        }
        iterator operator++(int) noexcept
        {
            auto copy = *this;
            ++*this;
            return copy;
        }

        friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.at_ == b.at_; }

    private:
        PartitionSpec at_{};
    };

    PartitionRange(int n_min, int n_max) : n_min_(n_min), n_max_(n_max) {}

    iterator begin() const { return iterator(PartitionSpec{n_min_, 0, 1}); }
    iterator end() const { return iterator(PartitionSpec{n_max_ + 1, 0, 1}); }
    std::int64_t size() const noexcept { return partition_count(n_min_, n_max_); }

private:
    int n_min_;
    int n_max_;
};

inline PartitionRange enumerate_partitions(int n_min, int n_max)
{
    if (n_min < 1 || n_min > n_max) {
        throw Error(ErrorCode::InvalidRange, "partition enumeration needs 1 <= n_min <= n_max, got (" +
                                                 std::to_string(n_min) + "," + std::to_string(n_max) + ")");
    }
    return {n_min, n_max};
}

// --------------------------------------------------------------------------------------------------------------------
// Counts
// --------------------------------------------------------------------------------------------------------------------

/// cum[j] = #{P_i < j/N} for j < N, and cum[N] = m (the last bin is closed at 1).
struct GridPrefix {
    int resolution = 1;
    std::vector<std::int64_t> cum;

    std::int64_t total() const noexcept { return cum.back(); }
    std::int64_t count(int from, int to) const noexcept { return cum[static_cast<std::size_t>(to)] - cum[static_cast<std::size_t>(from)]; }
};

inline GridPrefix grid_prefix(const PValueSample& sample, int resolution)
{
    if (resolution < 1) throw Error(ErrorCode::InvalidRange, "grid resolution must be >= 1");
    GridPrefix prefix;
    prefix.resolution = resolution;
    prefix.cum.resize(static_cast<std::size_t>(resolution) + 1);
    const auto values = sample.values();
    auto first = values.begin();
    for (int j = 0; j < resolution; ++j) {
        first = std::lower_bound(first, values.end(), grid_edge(j, resolution));
        prefix.cum[static_cast<std::size_t>(j)] = first - values.begin();
    }
    prefix.cum.back() = static_cast<std::int64_t>(values.size());
    return prefix;
}

struct BinCounts {
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;
};

inline BinCounts bin_counts(const GridPrefix& prefix, const PartitionSpec& spec)
{
    if (prefix.resolution != spec.resolution) {
        throw Error(ErrorCode::MismatchedResolution, "grid prefix built for N=" + std::to_string(prefix.resolution) +
                                                         " but partition uses N=" + std::to_string(spec.resolution));
    }
    BinCounts out;
    out.total = prefix.total();
    out.counts.reserve(static_cast<std::size_t>(spec.dimension()));
    for (int j = 0; j < spec.central_lo; ++j) out.counts.push_back(prefix.count(j, j + 1));
    out.counts.push_back(prefix.count(spec.central_lo, spec.central_hi));
    for (int j = spec.central_hi; j < spec.resolution; ++j) out.counts.push_back(prefix.count(j, j + 1));
    return out;
}

/// Height of a bin holding `count` of `total` points over `width`.
inline double bin_height(std::int64_t count, std::int64_t total, double width) noexcept
{
    return static_cast<double>(count) / (static_cast<double>(total) * width);
}

inline std::vector<double> histogram_heights(const BinCounts& counts, const PartitionSpec& spec)
{
    const auto widths = bin_widths(spec);
    if (widths.size() != counts.counts.size()) {
        throw Error(ErrorCode::MismatchedResolution, "bin counts do not match the partition dimension");
    }
    std::vector<double> heights(widths.size());
    for (std::size_t j = 0; j < widths.size(); ++j) heights[j] = bin_height(counts.counts[j], counts.total, widths[j]);
    return heights;
}

} // namespace lpo_pi0
