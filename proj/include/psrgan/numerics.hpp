#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "psrgan/errors.hpp"

namespace psrgan {

// Dense row-major matrix, 64-bit precision throughout.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

Matrix matmul(const Matrix& a, const Matrix& b);

// y = A x  (A: r x c, x: length c)
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
// y = A^T x  (x: length r)
std::vector<double> matvec_t(const Matrix& a, const std::vector<double>& x);
// A += alpha * u v^T
void add_outer(Matrix& a, double alpha, const std::vector<double>& u,
               const std::vector<double>& v);

double sigmoid(double x);
double tanh_act(double x);
double relu(double x);

// splitmix64: fixed algorithm so seeded runs reproduce on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_u64() % i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Glorot uniform in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))]
Matrix xavier_init(std::size_t rows, std::size_t cols, Rng& rng);
std::vector<double> xavier_init_vec(std::size_t n, std::size_t fan_sum, Rng& rng);

// Central-difference check of an analytic gradient. Returns the max over
// coordinates of |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
double gradient_check(const std::function<double(const std::vector<double>&)>& f,
                      std::vector<double> params,
                      const std::vector<double>& analytic_grad,
                      double eps = 1e-5);

} // namespace psrgan
