#include "gq/util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gq {

GaussLegendre gauss_legendre(int n, double a, double b) {
  require(n >= 2, "gauss_legendre: need at least 2 nodes");
  GaussLegendre out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    out.nodes[n - 1 - i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    out.weights[n - 1 - i] = (b - a) / ((1.0 - x * x) * pp * pp);
  }
  return out;
}

Mat fourier_diff_matrix(int m) {
  require(m >= 4 && m % 2 == 0, "fourier_diff_matrix: M must be even, >= 4");
  // D = F^-1 diag(ik) F with the Nyquist mode dropped (set to zero).
  Mat f(m, m), finv(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double ph = 2.0 * kPi * j * k / m;
      f(k, j) = std::polar(1.0 / m, -ph);
      finv(j, k) = std::polar(1.0, ph);
    }
  Vec ik(m);
  for (int k = 0; k < m; ++k) {
    int kk = (k <= m / 2) ? k : k - m;
    if (k == m / 2) kk = 0;
    ik(k) = Complex(0.0, double(kk));
  }
  return finv * ik.asDiagonal() * f;
}

std::pair<RealVec, double> periodic_antiderivative(const RealVec& fr) {
  const int m = int(fr.size());
  require(m >= 4 && m % 2 == 0, "periodic_antiderivative: M must be even");
  double mean = fr.mean();
  // DFT of the mean-free part, integrate mode-by-mode.
  Vec c(m);
  for (int k = 0; k < m; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < m; ++j)
      s += (fr(j) - mean) * std::polar(1.0, -2.0 * kPi * j * k / m);
    c(k) = s / double(m);
  }
  RealVec out(m);
  for (int j = 0; j < m; ++j) {
    Complex s = 0.0;
    for (int k = 1; k < m; ++k) {
      int kk = (k < m / 2) ? k : k - m;
      if (k == m / 2) continue;
      Complex ik(0.0, double(kk));
      double ph = 2.0 * kPi * j * k / m;
      s += c(k) / ik * (std::polar(1.0, ph) - 1.0);
    }
    double alpha = 2.0 * kPi * j / m;
    out(j) = mean * alpha + s.real();
  }
  return {out, mean};
}

HermitianPinv hermitian_pinv(const Mat& a, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
  HermitianPinv out;
  out.eigvals = es.eigenvalues();
  double emax = out.eigvals.cwiseAbs().maxCoeff();
  double cut = rel_cutoff * (emax > 0 ? emax : 1.0);
  std::vector<int> keep;
  for (int i = 0; i < out.eigvals.size(); ++i)
    if (out.eigvals(i) > cut) keep.push_back(i);
  out.rank = int(keep.size());
  out.pinv = Mat::Zero(a.rows(), a.cols());
  out.basis = Mat(a.rows(), out.rank);
  out.eigvecs = Mat(a.rows(), out.rank);
  for (int idx = 0; idx < out.rank; ++idx) {
    int i = keep[idx];
    Vec v = es.eigenvectors().col(i);
    out.pinv += v * v.adjoint() / out.eigvals(i);
    out.basis.col(idx) = v / std::sqrt(out.eigvals(i));
    out.eigvecs.col(idx) = v;
  }
  return out;
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() <= 192 && a.cols() <= 192) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
  }
  // Power iteration on A^dagger A for large matrices.
  Vec v = Vec::Ones(a.cols()).normalized();
  double s = 0.0;
  for (int it = 0; it < 60; ++it) {
    Vec w = a.adjoint() * (a * v);
    double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    double snew = std::sqrt(n);
    if (std::abs(snew - s) < 1e-12 * snew) return snew;
    s = snew;
  }
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = int(x.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void dump_complex_matrix(const std::string& path, const Mat& a) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "dump_complex_matrix: cannot open " + path);
  std::int64_t r = a.rows(), c = a.cols();
  f.write(reinterpret_cast<const char*>(&r), 8);
  f.write(reinterpret_cast<const char*>(&c), 8);
  for (std::int64_t i = 0; i < r; ++i)
    for (std::int64_t j = 0; j < c; ++j) {
      double re = a(i, j).real(), im = a(i, j).imag();
      f.write(reinterpret_cast<const char*>(&re), 8);
      f.write(reinterpret_cast<const char*>(&im), 8);
    }
}

Mat load_complex_matrix(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "load_complex_matrix: cannot open " + path);
  std::int64_t r = 0, c = 0;
  f.read(reinterpret_cast<char*>(&r), 8);
  f.read(reinterpret_cast<char*>(&c), 8);
  Mat a(r, c);
  for (std::int64_t i = 0; i < r; ++i)
    for (std::int64_t j = 0; j < c; ++j) {
      double re, im;
      f.read(reinterpret_cast<char*>(&re), 8);
      f.read(reinterpret_cast<char*>(&im), 8);
      a(i, j) = Complex(re, im);
    }
  return a;
}

}  // namespace gq
