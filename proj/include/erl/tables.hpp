#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace erl {

/// Dense row-major (row, col) table of doubles.
class Table2 {
public:
    Table2() = default;
    Table2(int rows, int cols, double fill = 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Table2: negative shape");
        rows_ = rows;
        cols_ = cols;
        v_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& operator()(int r, int c) { return v_[idx(r, c)]; }
    double operator()(int r, int c) const { return v_[idx(r, c)]; }

    double& at(int r, int c) {
        check(r, c);
        return v_[idx(r, c)];
    }
    double at(int r, int c) const {
        check(r, c);
        return v_[idx(r, c)];
    }

    std::span<double> row(int r) {
        return {v_.data() + idx(r, 0), static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(int r) const {
        return {v_.data() + idx(r, 0), static_cast<std::size_t>(cols_)};
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    bool same_shape(const Table2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void fill(double x) { v_.assign(v_.size(), x); }

    bool operator==(const Table2& o) const = default;

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }
    void check(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("Table2: index out of range");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> v_;
};

/// Dense row-major (i, j, k) table of doubles.
class Table3 {
public:
    Table3() = default;
    Table3(int ni, int nj, int nk, double fill = 0.0) {
        if (ni < 0 || nj < 0 || nk < 0) throw std::invalid_argument("Table3: negative shape");
        ni_ = ni;
        nj_ = nj;
        nk_ = nk;
        v_.assign(static_cast<std::size_t>(ni) * nj * nk, fill);
    }

    int dim0() const { return ni_; }
    int dim1() const { return nj_; }
    int dim2() const { return nk_; }
    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }

    double& at(int i, int j, int k) {
        check(i, j, k);
        return v_[idx(i, j, k)];
    }
    double at(int i, int j, int k) const {
        check(i, j, k);
        return v_[idx(i, j, k)];
    }

    /// Contiguous slice over the last index.
    std::span<double> row(int i, int j) {
        return {v_.data() + idx(i, j, 0), static_cast<std::size_t>(nk_)};
    }
    std::span<const double> row(int i, int j) const {
        return {v_.data() + idx(i, j, 0), static_cast<std::size_t>(nk_)};
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    bool same_shape(const Table3& o) const {
        return ni_ == o.ni_ && nj_ == o.nj_ && nk_ == o.nk_;
    }

    void fill(double x) { v_.assign(v_.size(), x); }

    bool operator==(const Table3& o) const = default;

private:
    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * nj_ + static_cast<std::size_t>(j)) * nk_ +
               static_cast<std::size_t>(k);
    }
    void check(int i, int j, int k) const {
        if (i < 0 || i >= ni_ || j < 0 || j >= nj_ || k < 0 || k >= nk_)
            throw std::out_of_range("Table3: index out of range");
    }

    int ni_ = 0;
    int nj_ = 0;
    int nk_ = 0;
    std::vector<double> v_;
};

inline double max_abs(const Table2& t) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i]));
    return m;
}

inline double max_abs_diff(const Table2& a, const Table2& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline Table2 operator+(const Table2& a, const Table2& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("Table2 +: shape mismatch");
    Table2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

inline Table2 operator-(const Table2& a, const Table2& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("Table2 -: shape mismatch");
    Table2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

}  // namespace erl
