#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rspcert/errors.hpp"

namespace rspcert {

using Vec = std::vector<double>;

inline bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline double norm_inf(std::span<const double> v) {
    double r = 0.0;
    for (double x : v) {
        r = std::max(r, std::abs(x));
    }
    return r;
}

inline double norm1(std::span<const double> v) {
    double r = 0.0;
    for (double x : v) {
        r += std::abs(x);
    }
    return r;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r += a[i] * b[i];
    }
    return r;
}

/// Sorted, duplicate-free set of 0-based column indices.
class IndexSet {
  public:
    IndexSet() = default;

    IndexSet(std::initializer_list<std::size_t> indices)
        : IndexSet(std::vector<std::size_t>(indices)) {}

    explicit IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
            throw Error(ErrorKind::InvalidArgument, "index set contains duplicates");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }
    [[nodiscard]] std::size_t operator[](std::size_t i) const { return indices_[i]; }
    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }

    [[nodiscard]] bool contains(std::size_t j) const {
        return std::binary_search(indices_.begin(), indices_.end(), j);
    }

    /// Indices of {0..n-1} not in this set, ascending.
    [[nodiscard]] IndexSet complement(std::size_t n) const {
        IndexSet out;
        out.indices_.reserve(n - std::min(n, indices_.size()));
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (k < indices_.size() && indices_[k] == j) {
                ++k;
            } else {
                out.indices_.push_back(j);
            }
        }
        return out;
    }

    [[nodiscard]] bool valid_for(std::size_t n) const { return indices_.empty() || indices_.back() < n; }

    [[nodiscard]] std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            s += (i ? "," : "") + std::to_string(indices_[i]);
        }
        return s + "}";
    }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;
    friend auto operator<=>(const IndexSet& a, const IndexSet& b) {
        return a.indices_ <=> b.indices_;
    }

  private:
    std::vector<std::size_t> indices_;
};

/// Dense row-major matrix of doubles. Construction rejects non-finite entries.
class Matrix {
  public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) {
            throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be at least 1x1");
        }
        if (!std::isfinite(fill)) {
            throw Error(ErrorKind::InvalidArgument, "matrix entries must be finite");
        }
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows)
        : Matrix(std::vector<Vec>(rows.begin(), rows.end())) {}

    explicit Matrix(const std::vector<Vec>& rows) {
        if (rows.empty() || rows.front().empty()) {
            throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be at least 1x1");
        }
        rows_ = rows.size();
        cols_ = rows.front().size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw Error(ErrorKind::InvalidArgument, "ragged matrix rows");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
        if (!all_finite(data_)) {
            throw Error(ErrorKind::InvalidArgument, "matrix entries must be finite");
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] Vec column(std::size_t j) const {
        Vec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }

    /// Columns of S in ascending index order. Requires S non-empty.
    [[nodiscard]] Matrix columns(const IndexSet& s) const {
        if (s.empty() || !s.valid_for(cols_)) {
            throw Error(ErrorKind::InvalidArgument, "column index set is empty or out of range");
        }
        Matrix out(rows_, s.size());
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < s.size(); ++k) {
                out(i, k) = (*this)(i, s[k]);
            }
        }
        return out;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    /// A x
    [[nodiscard]] Vec multiply(std::span<const double> x) const {
        check_size(x.size(), cols_, "A*x");
        Vec r(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            r[i] = dot(row(i), x);
        }
        return r;
    }

    /// A^T y
    [[nodiscard]] Vec multiply_transposed(std::span<const double> y) const {
        check_size(y.size(), rows_, "A^T*y");
        Vec r(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                r[j] += (*this)(i, j) * y[i];
            }
        }
        return r;
    }

    /// [A; row]
    [[nodiscard]] Matrix with_row(std::span<const double> extra) const {
        check_size(extra.size(), cols_, "appended row");
        Matrix out(rows_ + 1, cols_);
        std::copy(data_.begin(), data_.end(), out.data_.begin());
        std::copy(extra.begin(), extra.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
        if (!all_finite(extra)) {
            throw Error(ErrorKind::InvalidArgument, "matrix entries must be finite");
        }
        return out;
    }

    /// A diag(scale), i.e. column j multiplied by scale[j].
    [[nodiscard]] Matrix scale_columns(std::span<const double> scale) const {
        check_size(scale.size(), cols_, "column scaling");
        Matrix out = *this;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(i, j) *= scale[j];
            }
        }
        return out;
    }

    [[nodiscard]] double max_abs() const { return norm_inf(data_); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    static void check_size(std::size_t got, std::size_t want, const char* what) {
        if (got != want) {
            throw Error(ErrorKind::InvalidArgument,
                        std::string("dimension mismatch in ") + what + ": got " + std::to_string(got) +
                            ", expected " + std::to_string(want));
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace rspcert
