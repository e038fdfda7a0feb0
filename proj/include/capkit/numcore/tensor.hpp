#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace capkit::numcore {

// Dense row-major double tensor. Models treat everything as matrices;
// row vectors are shape {1, n} and scalars {1, 1}.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> values);

    static Tensor scalar(double v);
    static Tensor identity(std::size_t n);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t rows() const;
    std::size_t cols() const;

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;
    void fill(double v);

    std::string shape_str() const;

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

// Raw (gradient-free) kernels shared by the autodiff ops.
Tensor t_matmul(const Tensor& a, const Tensor& b);     // (m,k)x(k,n)
Tensor t_matmul_nt(const Tensor& a, const Tensor& b);  // a x b^T
Tensor t_matmul_tn(const Tensor& a, const Tensor& b);  // a^T x b

void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace capkit::numcore
