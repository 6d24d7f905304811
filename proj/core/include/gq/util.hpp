#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gq {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Gauss-Legendre nodes/weights on [a, b], by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n, double a, double b);

// Dense spectral differentiation matrix d/dalpha on the uniform periodic
// grid alpha_j = 2*pi*j/M (M even).
Mat fourier_diff_matrix(int m);

// Antiderivative S(alpha_j) = int_0^alpha f, split into mean*alpha plus the
// spectral antiderivative of the oscillating part. Returns S at the nodes
// and the mean (winding rate) of f.
std::pair<RealVec, double> periodic_antiderivative(const RealVec& f);

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix with a relative
// eigenvalue cutoff; also reports the numerical rank.
struct HermitianPinv {
  Mat pinv;
  Mat basis;          // columns: retained eigenvectors / sqrt(eigenvalue)
  Mat eigvecs;        // retained eigenvectors (unit)
  RealVec eigvals;    // all eigenvalues, ascending
  int rank = 0;
};
HermitianPinv hermitian_pinv(const Mat& a, double rel_cutoff);

double operator_norm(const Mat& a);  // largest singular value

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic sample streams for seeded test points.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(rng_);
  }
  Complex disk(double radius) {  // uniform on |z| <= radius
    double r = radius * std::sqrt(uniform(0.0, 1.0));
    double th = uniform(0.0, 2.0 * kPi);
    return std::polar(r, th);
  }

 private:
  std::mt19937_64 rng_;
};

// Little-endian binary dump: int64 rows, int64 cols, then row-major
// (re, im) float64 pairs.
void dump_complex_matrix(const std::string& path, const Mat& a);
Mat load_complex_matrix(const std::string& path);

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace gq
