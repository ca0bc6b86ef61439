#pragma once

// Small dense containers used for metric matrices, Christoffel symbols and
// field derivatives. Dimensions here are tiny (a handful at most), so the
// containers favour clarity over blocking/vectorization.

#include <cassert>
#include <cstddef>
#include <vector>

namespace jetflow {

using Vec = std::vector<double>;

template <class T>
class MatT {
public:
    MatT() = default;
    MatT(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    std::vector<T>& data() { return a_; }
    const std::vector<T>& data() const { return a_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

template <class T>
class Ten3T {
public:
    Ten3T() = default;
    Ten3T(std::size_t d0, std::size_t d1, std::size_t d2, const T& fill = T{})
        : d0_(d0), d1_(d1), d2_(d2), a_(d0 * d1 * d2, fill) {}

    std::size_t dim0() const { return d0_; }
    std::size_t dim1() const { return d1_; }
    std::size_t dim2() const { return d2_; }

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        assert(i < d0_ && j < d1_ && k < d2_);
        return a_[(i * d1_ + j) * d2_ + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        assert(i < d0_ && j < d1_ && k < d2_);
        return a_[(i * d1_ + j) * d2_ + k];
    }

    std::vector<T>& data() { return a_; }
    const std::vector<T>& data() const { return a_; }

private:
    std::size_t d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<T> a_;
};

using Mat = MatT<double>;
using Ten3 = Ten3T<double>;

/// Rank-generic dense array, used by the index raising/lowering helpers
/// where the slot being contracted is named at run time.
class NdArray {
public:
    NdArray() = default;
    explicit NdArray(std::vector<std::size_t> shape)
        : shape_(std::move(shape)) {
        std::size_t total = 1;
        for (std::size_t d : shape_) total *= d;
        a_.assign(total, 0.0);
        strides_.assign(shape_.size(), 1);
        for (std::size_t k = shape_.size(); k-- > 1;)
            strides_[k - 1] = strides_[k] * shape_[k];
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return a_.size(); }

    double& at(const std::vector<std::size_t>& idx) { return a_[offset(idx)]; }
    double at(const std::vector<std::size_t>& idx) const { return a_[offset(idx)]; }

    std::vector<double>& flat() { return a_; }
    const std::vector<double>& flat() const { return a_; }

    std::size_t stride(std::size_t slot) const { return strides_[slot]; }

private:
    std::size_t offset(const std::vector<std::size_t>& idx) const {
        assert(idx.size() == shape_.size());
        std::size_t o = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            assert(idx[k] < shape_[k]);
            o += idx[k] * strides_[k];
        }
        return o;
    }

    std::vector<std::size_t> shape_;
    std::vector<std::size_t> strides_;
    std::vector<double> a_;
};

} // namespace jetflow
