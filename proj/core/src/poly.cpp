#include "twistorlab/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "twistorlab/errors.hpp"

namespace tlab {

namespace {

double mag(double x) { return std::abs(x); }
double mag(const cplx& x) { return std::abs(x); }

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

template <class T>
void Polynomial<T>::trim() {
  while (!c_.empty() && c_.back() == T{}) c_.pop_back();
}

template <class T>
Polynomial<T> Polynomial<T>::chopped(double rel) const {
  double m = 0.0;
  for (const T& c : c_) m = std::max(m, mag(c));
  std::vector<T> out = c_;
  while (!out.empty() && mag(out.back()) <= rel * m) out.pop_back();
  return Polynomial(std::move(out));
}

template <class T>
Polynomial<T>& Polynomial<T>::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

template <class T>
Polynomial<T>& Polynomial<T>::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

template <class T>
Polynomial<T>& Polynomial<T>::operator*=(const Polynomial& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<T> r(c_.size() + o.c_.size() - 1, T{});
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  c_ = std::move(r);
  trim();
  return *this;
}

template <class T>
Polynomial<T>& Polynomial<T>::operator*=(T s) {
  for (T& c : c_) c *= s;
  trim();
  return *this;
}

double evaluate(const RealPolynomial& p, double x) { return p(x); }

template <class T>
Polynomial<T> derivative(const Polynomial<T>& p, int order) {
  std::vector<T> c = p.coeffs();
  for (int o = 0; o < order && !c.empty(); ++o) {
    std::vector<T> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
    c = std::move(d);
  }
  return Polynomial<T>(std::move(c));
}

ComplexPolynomial to_complex(const RealPolynomial& p) {
  std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
  return ComplexPolynomial(std::move(c));
}

template <class T>
double taylor_scale(const Polynomial<T>& p, cplx x, int j) {
  const double ax = std::abs(x);
  double s = 0.0;
  for (int k = j; k <= p.degree(); ++k)
    s += mag(p.coeffs()[k]) * binom(k, j) * std::pow(ax, k - j);
  return s;
}

namespace {

template <class T>
std::vector<cplx> companion_eigenvalues(const Polynomial<T>& p) {
  const int n = p.degree();
  const auto& c = p.coeffs();
  std::vector<cplx> out;
  if constexpr (std::is_same_v<T, double>) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
    Eigen::VectorXcd ev = m.eigenvalues();
    for (int i = 0; i < n; ++i) out.push_back(ev(i));
  } else {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  }
  return out;
}

template <class T>
cplx newton(const Polynomial<T>& p, const Polynomial<T>& dp, cplx z, int max_iter) {
  cplx best = z;
  double best_r = std::abs(p(z));
  for (int it = 0; it < max_iter && best_r > 0.0; ++it) {
    const cplx d = dp(best);
    if (d == cplx{}) break;
    const cplx next = best - p(best) / d;
    const double r = std::abs(p(next));
    if (!(r < best_r)) break;
    best = next;
    best_r = r;
  }
  return best;
}

// Refines the centre of a size-m group as a simple root of p^(m-1) and checks
// that p, ..., p^(m-1) are all negligible there.
template <class T>
bool multiple_root_test(const Polynomial<T>& p, cplx centre, int m, double spread,
                        const RootOptions& opt, cplx* refined) {
  const Polynomial<T> q = derivative(p, m - 1);
  const Polynomial<T> dq = derivative(q);
  cplx z = centre;
  for (int it = 0; it < 100; ++it) {
    const cplx d = dq(z);
    if (d == cplx{}) break;
    const cplx step = q(z) / d;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  if (!(std::abs(z - centre) <= 4.0 * spread + opt.cluster_radius * (1.0 + std::abs(centre))))
    return false;
  double fact = 1.0;
  for (int j = 0; j < m; ++j) {
    if (j > 0) fact *= j;
    const Polynomial<T> dj = derivative(p, j);
    const double val = std::abs(dj(z)) / fact;
    const double scale = taylor_scale(p, z, j);
    if (val > opt.multiplicity_tol * scale) return false;
  }
  *refined = z;
  return true;
}

}  // namespace

template <class T>
std::vector<cplx> all_roots(const Polynomial<T>& p) {
  if (p.degree() < 1) throw InvalidInput("root finding needs a polynomial of degree >= 1");
  std::vector<cplx> ev = companion_eigenvalues(p);
  const Polynomial<T> dp = derivative(p);
  for (cplx& z : ev) z = newton(p, dp, z, 3);
  return ev;
}

template <class T>
std::vector<RootCluster> root_clusters(const Polynomial<T>& p, const RootOptions& opt) {
  const std::vector<cplx> roots = all_roots(p);

  struct Group {
    int id;
    std::vector<cplx> members;
    cplx centre;
    cplx refined;
    bool has_refined = false;
  };
  std::vector<Group> groups;
  int next_id = 0;
  for (const cplx& z : roots) groups.push_back({next_id++, {z}, z, z, false});

  std::set<std::pair<int, int>> rejected;
  while (groups.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const auto key = std::minmax(groups[i].id, groups[j].id);
        if (rejected.count({key.first, key.second})) continue;
        const double d = std::abs(groups[i].centre - groups[j].centre);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (!std::isfinite(best)) break;

    std::vector<cplx> merged = groups[bi].members;
    merged.insert(merged.end(), groups[bj].members.begin(), groups[bj].members.end());
    cplx mean{};
    for (const cplx& z : merged) mean += z;
    mean /= static_cast<double>(merged.size());
    const double scale = 1.0 + std::abs(mean);
    if (best > opt.merge_limit * scale) break;

    double spread = 0.0;
    for (const cplx& z : merged) spread = std::max(spread, std::abs(z - mean));
    cplx refined = mean;
    const bool close = best <= opt.cluster_radius * scale;
    const bool passes = multiple_root_test(p, mean, static_cast<int>(merged.size()), spread,
                                           opt, &refined);
    if (close || passes) {
      Group g{next_id++, std::move(merged), mean, refined, passes};
      groups.erase(groups.begin() + static_cast<long>(bj));
      groups.erase(groups.begin() + static_cast<long>(bi));
      groups.push_back(std::move(g));
    } else {
      const auto key = std::minmax(groups[bi].id, groups[bj].id);
      rejected.insert({key.first, key.second});
    }
  }

  std::vector<RootCluster> out;
  for (const Group& g : groups) {
    RootCluster rc;
    rc.multiplicity = static_cast<int>(g.members.size());
    rc.value = g.members.size() == 1 ? g.members.front() : (g.has_refined ? g.refined : g.centre);
    // Snap clusters that straddle the real axis of a real polynomial.
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(rc.value.imag()) <= opt.cluster_radius * (1.0 + std::abs(rc.value)))
        rc.value.imag(0.0);
    }
    double res = std::abs(p(rc.value));
    for (const cplx& z : g.members) res = std::max(res, std::abs(p(z)));
    rc.residual = res;
    out.push_back(rc);
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& x, const RootCluster& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

std::vector<RootCluster> real_roots_with_multiplicity(const RealPolynomial& p,
                                                      const RootOptions& opt) {
  std::vector<RootCluster> out;
  for (const RootCluster& rc : root_clusters(p, opt))
    if (rc.value.imag() == 0.0) out.push_back(rc);
  return out;
}

namespace {

bool near(double lhs_minus_rhs, double magnitude, double tol) {
  return std::abs(lhs_minus_rhs) <= tol * magnitude;
}

}  // namespace

template <class T>
bool has_two_double_roots(T a1, T a2, T a3, T a4, double rel_tol) {
  const double s = std::max({mag(a1), std::sqrt(mag(a2)), std::cbrt(mag(a3)),
                             std::sqrt(std::sqrt(mag(a4)))});
  if (s == 0.0) return true;  // x^4
  if (mag(a1) > rel_tol * s) {
    const T l1 = 4.0 * a1 * a2;
    const T r1 = a1 * a1 * a1 + 8.0 * a3;
    const double m1 = mag(l1) + mag(a1 * a1 * a1) + mag(8.0 * a3);
    const T l2 = a1 * a1 * a4;
    const T r2 = a3 * a3;
    const double m2 = mag(l2) + mag(r2);
    return near(mag(l1 - r1), m1, rel_tol) && near(mag(l2 - r2), m2, rel_tol);
  }
  const double s3 = s * s * s;
  const T l = 4.0 * a4;
  const T r = a2 * a2;
  const double m = mag(l) + mag(r);
  return mag(a3) <= rel_tol * s3 && near(mag(l - r), m, rel_tol);
}

template class Polynomial<double>;
template class Polynomial<cplx>;
template RealPolynomial derivative(const RealPolynomial&, int);
template ComplexPolynomial derivative(const ComplexPolynomial&, int);
template double taylor_scale(const RealPolynomial&, cplx, int);
template double taylor_scale(const ComplexPolynomial&, cplx, int);
template std::vector<cplx> all_roots(const RealPolynomial&);
template std::vector<cplx> all_roots(const ComplexPolynomial&);
template std::vector<RootCluster> root_clusters(const RealPolynomial&, const RootOptions&);
template std::vector<RootCluster> root_clusters(const ComplexPolynomial&, const RootOptions&);
template bool has_two_double_roots(double, double, double, double, double);
template bool has_two_double_roots(cplx, cplx, cplx, cplx, double);

}  // namespace tlab
