#include "capkit/numcore/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "capkit/error.hpp"

namespace capkit::numcore {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(shape_product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
    if (data_.size() != shape_product(shape_)) {
        throw internal_error("ShapeMismatch", "value count does not match shape " + shape_str());
    }
}

Tensor Tensor::scalar(double v) { return Tensor({1, 1}, std::vector<double>{v}); }

Tensor Tensor::identity(std::size_t n) {
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

std::size_t Tensor::rows() const {
    if (shape_.size() != 2) throw internal_error("ShapeMismatch", "rows() on non-matrix " + shape_str());
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (shape_.size() != 2) throw internal_error("ShapeMismatch", "cols() on non-matrix " + shape_str());
    return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
double Tensor::at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::shape_str() const {
    std::ostringstream ss;
    ss << '(';
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (i) ss << 'x';
        ss << shape_[i];
    }
    ss << ')';
    return ss.str();
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw internal_error("ShapeMismatch", std::string(op) + ": shapes " + a.shape_str() +
                                                  " vs " + b.shape_str());
    }
}

Tensor t_matmul(const Tensor& a, const Tensor& b) {
    if (a.ndim() != 2 || b.ndim() != 2 || a.cols() != b.rows()) {
        throw internal_error("ShapeMismatch",
                             "matmul: shapes " + a.shape_str() + " vs " + b.shape_str());
    }
    std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor out({m, n});
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* od = out.data().data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            double av = ad[i * k + p];
            if (av == 0.0) continue;
            const double* brow = bd + p * n;
            double* orow = od + i * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

Tensor t_matmul_nt(const Tensor& a, const Tensor& b) {
    if (a.ndim() != 2 || b.ndim() != 2 || a.cols() != b.cols()) {
        throw internal_error("ShapeMismatch",
                             "matmul_nt: shapes " + a.shape_str() + " vs " + b.shape_str());
    }
    std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    Tensor out({m, n});
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            const double* arow = ad + i * k;
            const double* brow = bd + j * k;
            for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            out.at(i, j) = acc;
        }
    }
    return out;
}

Tensor t_matmul_tn(const Tensor& a, const Tensor& b) {
    if (a.ndim() != 2 || b.ndim() != 2 || a.rows() != b.rows()) {
        throw internal_error("ShapeMismatch",
                             "matmul_tn: shapes " + a.shape_str() + " vs " + b.shape_str());
    }
    std::size_t m = a.cols(), k = a.rows(), n = b.cols();
    Tensor out({m, n});
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* od = out.data().data();
    for (std::size_t p = 0; p < k; ++p) {
        const double* arow = ad + p * m;
        const double* brow = bd + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            double av = arow[i];
            if (av == 0.0) continue;
            double* orow = od + i * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

}  // namespace capkit::numcore
