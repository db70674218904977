#include "psrgan/numerics.hpp"

#include <cmath>

namespace psrgan {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw ShapeMismatch("matmul: " + std::to_string(a.rows) + "x" +
                            std::to_string(a.cols) + " times " +
                            std::to_string(b.rows) + "x" + std::to_string(b.cols));
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols != x.size())
        throw ShapeMismatch("matvec: cols " + std::to_string(a.cols) +
                            " vs vector " + std::to_string(x.size()));
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        const double* row = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < a.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_t(const Matrix& a, const std::vector<double>& x) {
    if (a.rows != x.size())
        throw ShapeMismatch("matvec_t: rows " + std::to_string(a.rows) +
                            " vs vector " + std::to_string(x.size()));
    std::vector<double> y(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double xi = x[i];
        const double* row = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < a.cols; ++j) y[j] += row[j] * xi;
    }
    return y;
}

void add_outer(Matrix& a, double alpha, const std::vector<double>& u,
               const std::vector<double>& v) {
    if (a.rows != u.size() || a.cols != v.size())
        throw ShapeMismatch("add_outer shape");
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            a(i, j) += alpha * u[i] * v[j];
}

double sigmoid(double x) {
    // stable for |x| up to ~700
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double tanh_act(double x) { return std::tanh(x); }

double relu(double x) { return x > 0.0 ? x : 0.0; }

Matrix xavier_init(std::size_t rows, std::size_t cols, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(-bound, bound);
    return m;
}

std::vector<double> xavier_init_vec(std::size_t n, std::size_t fan_sum, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_sum));
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-bound, bound);
    return v;
}

double gradient_check(const std::function<double(const std::vector<double>&)>& f,
                      std::vector<double> params,
                      const std::vector<double>& analytic_grad,
                      double eps) {
    if (params.size() != analytic_grad.size())
        throw ShapeMismatch("gradient_check: params vs analytic gradient size");
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double orig = params[i];
        params[i] = orig + eps;
        const double fp = f(params);
        params[i] = orig - eps;
        const double fm = f(params);
        params[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFinite("gradient_check: non-finite objective at probe " +
                            std::to_string(i));
        const double numeric = (fp - fm) / (2.0 * eps);
        const double a = analytic_grad[i];
        const double denom = std::max(1e-8, std::fabs(a) + std::fabs(numeric));
        worst = std::max(worst, std::fabs(a - numeric) / denom);
    }
    return worst;
}

} // namespace psrgan
