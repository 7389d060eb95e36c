#ifndef FNORM_SAMPLE_HPP
#define FNORM_SAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fnorm {

/// n x d matrix of nonnegative observations, row-major. Backs empirical
/// distributions and estimators; immutable once built.
class SampleMatrix {
public:
    SampleMatrix(std::size_t n, std::size_t d)
        : n_(n), d_(d), data_(n * d, 0.0) {
        if (n == 0 || d == 0)
            throw std::invalid_argument("SampleMatrix: n and d must be positive");
    }

    static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty())
            throw std::invalid_argument("SampleMatrix: at least one row required");
        SampleMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.d_)
                throw std::invalid_argument("SampleMatrix: ragged rows");
            for (std::size_t j = 0; j < m.d_; ++j) m.set(i, j, rows[i][j]);
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }

    double at(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("SampleMatrix: entries must be finite and >= 0");
        data_[i * d_ + j] = v;
    }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * d_, d_};
    }

    double column_mean(std::size_t j) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += at(i, j);
        return s / static_cast<double>(n_);
    }

    double column_max(std::size_t j) const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) m = std::max(m, at(i, j));
        return m;
    }

    /// Unbiased sample variance of column j (0 for n = 1).
    double column_variance(std::size_t j) const {
        if (n_ < 2) return 0.0;
        double mean = column_mean(j);
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double dlt = at(i, j) - mean;
            s += dlt * dlt;
        }
        return s / static_cast<double>(n_ - 1);
    }

    std::vector<double> sorted_column(std::size_t j) const {
        std::vector<double> col(n_);
        for (std::size_t i = 0; i < n_; ++i) col[i] = at(i, j);
        std::sort(col.begin(), col.end());
        return col;
    }

    bool operator==(const SampleMatrix& o) const {
        return n_ == o.n_ && d_ == o.d_ && data_ == o.data_;
    }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> data_;
};

} // namespace fnorm

#endif // FNORM_SAMPLE_HPP
