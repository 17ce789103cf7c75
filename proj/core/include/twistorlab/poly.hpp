#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tlab {

using cplx = std::complex<double>;

// Dense univariate polynomial, coefficients in ascending degree. Trailing
// exact zeros are dropped so the leading coefficient is nonzero unless the
// polynomial is zero.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<T> c) : c_(c) { trim(); }
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T{}; }
  T leading() const { return c_.empty() ? T{} : c_.back(); }

  template <class U>
  auto operator()(const U& x) const {
    using R = decltype(T{} * x);
    R acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + R(*it);
    return acc;
  }

  // Drops leading coefficients with |c| <= rel * max|c|.
  Polynomial chopped(double rel) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(T s);

 private:
  void trim();
  std::vector<T> c_;
};

template <class T>
Polynomial<T> operator+(Polynomial<T> p, const Polynomial<T>& q) { return p += q; }
template <class T>
Polynomial<T> operator-(Polynomial<T> p, const Polynomial<T>& q) { return p -= q; }
template <class T>
Polynomial<T> operator*(Polynomial<T> p, const Polynomial<T>& q) { return p *= q; }
template <class T>
Polynomial<T> operator*(T s, Polynomial<T> p) { return p *= s; }

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<cplx>;

double evaluate(const RealPolynomial& p, double x);

template <class T>
Polynomial<T> derivative(const Polynomial<T>& p, int order = 1);

ComplexPolynomial to_complex(const RealPolynomial& p);

// Sum over k of |c_k| * C(k, j) * |x|^(k-j): the natural magnitude of the
// j-th Taylor coefficient at x. Used to turn absolute residuals relative.
template <class T>
double taylor_scale(const Polynomial<T>& p, cplx x, int j = 0);

struct RootOptions {
  double cluster_radius = 1e-7;    // relative: radius * (1 + |root|)
  double multiplicity_tol = 1e-9;  // relative residual for merged clusters
  double merge_limit = 1e-2;       // never merge roots farther apart than this (relative)
};

struct RootCluster {
  cplx value;
  int multiplicity = 1;
  double residual = 0.0;  // max |p| over the member roots and the refined value
};

// Companion-matrix eigenvalues, each given a Newton polish.
template <class T>
std::vector<cplx> all_roots(const Polynomial<T>& p);

// All roots grouped into clusters. Two groups merge when they sit within the
// cluster radius, or when the merged group passes a multiple-root test: the
// mean is refined as a root of p^(m-1) and p, p', ..., p^(m-1) must vanish
// there to `multiplicity_tol` relative. Multiplicities sum to the degree.
template <class T>
std::vector<RootCluster> root_clusters(const Polynomial<T>& p, const RootOptions& opt = {});

// Real clusters only, sorted by value.
std::vector<RootCluster> real_roots_with_multiplicity(const RealPolynomial& p,
                                                      const RootOptions& opt = {});

// Monic quartic x^4 + a1 x^3 + a2 x^2 + a3 x + a4 is (x-α)^2 (x-β)^2.
//   a1 != 0:  4 a1 a2 = a1^3 + 8 a3  and  a1^2 a4 = a3^2
//   a1 == 0:  a3 = 0  and  4 a4 = a2^2
// Each equality is tested relative to the summed magnitude of its terms.
template <class T>
bool has_two_double_roots(T a1, T a2, T a3, T a4, double rel_tol = 1e-9);

}  // namespace tlab
