#pragma once

#include <complex>
#include <vector>

namespace tlab {

// Truncated power series c0 + c1 t + ... + cN t^N with complex coefficients.
class Series {
 public:
  explicit Series(int order) : c_(order + 1) {}
  Series(int order, std::vector<std::complex<double>> c) : c_(std::move(c)) {
    c_.resize(order + 1);
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  std::complex<double>& operator[](int k) { return c_[k]; }
  const std::complex<double>& operator[](int k) const { return c_[k]; }
  const std::vector<std::complex<double>>& coeffs() const { return c_; }

  std::complex<double> operator()(std::complex<double> t) const {
    std::complex<double> acc{};
    for (int k = order(); k >= 0; --k) acc = acc * t + c_[k];
    return acc;
  }

  friend Series operator+(Series a, const Series& b) {
    for (int k = 0; k <= a.order(); ++k) a[k] += b[k];
    return a;
  }
  friend Series operator-(Series a, const Series& b) {
    for (int k = 0; k <= a.order(); ++k) a[k] -= b[k];
    return a;
  }
  friend Series operator*(std::complex<double> s, Series a) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  friend Series operator*(const Series& a, const Series& b) {
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i)
      for (int j = 0; i + j <= a.order(); ++j) r[i + j] += a[i] * b[j];
    return r;
  }

  // Multiplication by t^k, truncated.
  Series shifted(int k) const {
    Series r(order());
    for (int i = 0; i + k <= order(); ++i) r[i + k] = c_[i];
    return r;
  }

  // a / b; needs b[0] != 0.
  friend Series operator/(const Series& a, const Series& b) {
    Series r(a.order());
    for (int k = 0; k <= a.order(); ++k) {
      std::complex<double> s = a[k];
      for (int j = 1; j <= k; ++j) s -= b[j] * r[k - j];
      r[k] = s / b[0];
    }
    return r;
  }

  // Square root with the given constant term (root0^2 must equal c0).
  Series sqrt_with(std::complex<double> root0) const {
    Series r(order());
    r[0] = root0;
    for (int k = 1; k <= order(); ++k) {
      std::complex<double> s = c_[k];
      for (int j = 1; j < k; ++j) s -= r[j] * r[k - j];
      r[k] = s / (2.0 * root0);
    }
    return r;
  }

 private:
  std::vector<std::complex<double>> c_;
};

}  // namespace tlab
