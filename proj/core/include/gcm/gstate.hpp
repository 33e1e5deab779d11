#pragma once

// Gaussian states on interleaved quadratures (x1, p1, ..., xN, pN).
//
// Conventions follow the characteristic functions of the collision model:
// the squeezing operator carries a 1/2 prefactor, so a two-mode squeezed
// vacuum with parameter xi has local variance cosh(xi)/2, and a generic
// squeezed thermal mode is (n + 1/2) R(phi/2) diag(e^{2r}, e^{-2r}) R(phi/2)^T.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gcm {

using Matrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2d;

/// Raised when a covariance violates the uncertainty principle beyond tolerance.
class UnphysicalStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters of a zero-mean squeezed thermal mode.
class SingleModeSpec {
 public:
  SingleModeSpec() = default;
  /// Throws std::invalid_argument for n < 0, r < 0 or alpha != 0.
  /// phi is reduced into [0, 2pi).
  SingleModeSpec(double n, double r, double phi, std::complex<double> alpha = {});

  static SingleModeSpec vacuum() { return {}; }
  static SingleModeSpec thermal(double n) { return {n, 0.0, 0.0}; }
  static SingleModeSpec squeezed(double r, double phi) { return {0.0, r, phi}; }

  double n() const { return n_; }
  double r() const { return r_; }
  double phi() const { return phi_; }
  std::complex<double> alpha() const { return {}; }

  /// X_E = (n + 1/2) cosh 2r.
  double x_coefficient() const;
  /// Y_E = -(n + 1/2) sinh 2r e^{i phi}.
  std::complex<double> y_coefficient() const;

  friend bool operator==(const SingleModeSpec&, const SingleModeSpec&) = default;

 private:
  double n_ = 0.0;
  double r_ = 0.0;
  double phi_ = 0.0;
};

/// Real symmetric 2N x 2N covariance matrix. Construction checks shape and
/// symmetry (1e-12); physicality is checked separately.
class CovMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kPhysicalTol = 1e-9;

  CovMatrix() = default;
  explicit CovMatrix(Matrix data);

  int modes() const { return static_cast<int>(data_.rows() / 2); }
  const Matrix& data() const { return data_; }
  /// 2x2 block between modes i and j (0-based).
  Matrix2 block(int i, int j) const { return data_.block<2, 2>(2 * i, 2 * j); }

  /// Smallest eigenvalue of sigma + (i/2) Omega_N.
  double min_physical_eigenvalue() const;
  bool is_physical(double tol = kPhysicalTol) const;
  /// Throws UnphysicalStateError when !is_physical(tol).
  void require_physical(double tol = kPhysicalTol) const;

 private:
  Matrix data_;
};

/// Omega_N = direct sum of N copies of [[0, 1], [-1, 0]].
Matrix symplectic_form(int modes);

CovMatrix direct_sum(const CovMatrix& a, const CovMatrix& b);

// ---------------------------------------------------------------------------
// Mode bookkeeping

struct ModeLabel {
  enum class Kind { kEnvB, kB, kA, kC, kEnvC };

  Kind kind = Kind::kA;
  int env_index = 0;  // j >= 1 for environment modes, 0 otherwise

  static ModeLabel a() { return {Kind::kA, 0}; }
  static ModeLabel b() { return {Kind::kB, 0}; }
  static ModeLabel c() { return {Kind::kC, 0}; }
  static ModeLabel env_b(int j) { return {Kind::kEnvB, j}; }
  static ModeLabel env_c(int j) { return {Kind::kEnvC, j}; }

  std::string to_string() const;
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Ordered list of mode labels matching the rows of a covariance matrix.
class ModeLayout {
 public:
  explicit ModeLayout(std::vector<ModeLabel> labels);

  /// [E^B_{L-1}, ..., E^B_1, B, A, C, E^C_1, ..., E^C_{L-1}].
  /// B sits at 0-based position L-1, A at L, C at L+1.
  static ModeLayout collision(int steps);
  /// [A, B, C].
  static ModeLayout system();
  /// [A, B].
  static ModeLayout tmsv();

  const std::vector<ModeLabel>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  /// 0-based position; throws std::invalid_argument for unknown labels.
  int position(const ModeLabel& label) const;

 private:
  std::vector<ModeLabel> labels_;
};

// ---------------------------------------------------------------------------
// Constructors

CovMatrix single_mode_cov(const SingleModeSpec& spec);
/// Layout [A, B]; xi_ab real.
CovMatrix tmsv_cov(double xi_ab);
/// Single-mode squeezed vacuum exp((xi* a^2 - xi a^dag^2)/2)|0>, xi = xi_c e^{i phi_c}.
CovMatrix squeezed_vac_cov(double xi_c, double phi_c);
CovMatrix thermal_cov(double n);
CovMatrix vacuum_cov(int modes = 1);

// ---------------------------------------------------------------------------
// Spectra and entropy

/// Ascending symplectic eigenvalues (moduli of the eigenvalue pairs of i Omega sigma).
std::vector<double> symplectic_eigenvalues(const CovMatrix& sigma);

/// (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), clamped to 0 within 1e-12 of 1/2.
double entropy_term(double nu);

/// Von Neumann entropy in nats. Throws UnphysicalStateError if any
/// symplectic eigenvalue is below 1/2 - 1e-6.
double entropy(const CovMatrix& sigma);

/// Sub-covariance of the selected modes. Blocks keep their relative order
/// in `layout`, whatever the order of `subset`.
CovMatrix reduce(const CovMatrix& sigma, const ModeLayout& layout,
                 const std::vector<ModeLabel>& subset);

/// Reorders modes: output mode k is input mode order[k].
CovMatrix permute_modes(const CovMatrix& sigma, const std::vector<int>& order);

}  // namespace gcm
