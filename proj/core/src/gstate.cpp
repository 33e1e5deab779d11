#include "gcm/gstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gcm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPureClamp = 1e-12;
constexpr double kEntropyFloor = 1e-6;

Matrix2 squeezed_thermal_block(double scale, double two_r, double phi) {
  const double c = std::cosh(two_r);
  const double s = std::sinh(two_r);
  Matrix2 m;
  m << c + s * std::cos(phi), s * std::sin(phi),
       s * std::sin(phi), c - s * std::cos(phi);
  return scale * m;
}

}  // namespace

// ---------------------------------------------------------------------------
// SingleModeSpec

SingleModeSpec::SingleModeSpec(double n, double r, double phi, std::complex<double> alpha) {
  if (!(n >= 0.0)) throw std::invalid_argument("SingleModeSpec: n must be >= 0");
  if (!(r >= 0.0)) throw std::invalid_argument("SingleModeSpec: r must be >= 0");
  if (!std::isfinite(phi)) throw std::invalid_argument("SingleModeSpec: phi must be finite");
  if (alpha != std::complex<double>{}) {
    throw std::invalid_argument("SingleModeSpec: displaced states are not supported (alpha must be 0)");
  }
  n_ = n;
  r_ = r;
  phi_ = std::fmod(phi, kTwoPi);
  if (phi_ < 0.0) phi_ += kTwoPi;
}

double SingleModeSpec::x_coefficient() const { return (n_ + 0.5) * std::cosh(2.0 * r_); }

std::complex<double> SingleModeSpec::y_coefficient() const {
  return -(n_ + 0.5) * std::sinh(2.0 * r_) * std::polar(1.0, phi_);
}

// ---------------------------------------------------------------------------
// CovMatrix

CovMatrix::CovMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() % 2 != 0 || data_.rows() == 0) {
    std::ostringstream os;
    os << "CovMatrix: expected a non-empty square matrix of even dimension, got "
       << data_.rows() << "x" << data_.cols();
    throw std::invalid_argument(os.str());
  }
  const double asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
  if (asym >= kSymmetryTol) {
    std::ostringstream os;
    os << "CovMatrix: matrix is not symmetric (max |s - s^T| = " << asym << ")";
    throw std::invalid_argument(os.str());
  }
}

double CovMatrix::min_physical_eigenvalue() const {
  using namespace std::complex_literals;
  const Eigen::MatrixXcd h =
      data_.cast<std::complex<double>>() + 0.5i * symplectic_form(modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool CovMatrix::is_physical(double tol) const { return min_physical_eigenvalue() >= -tol; }

void CovMatrix::require_physical(double tol) const {
  const double lam = min_physical_eigenvalue();
  if (lam < -tol) {
    std::ostringstream os;
    os << "covariance violates sigma + i/2 Omega >= 0 (min eigenvalue " << lam << ")";
    throw UnphysicalStateError(os.str());
  }
}

Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

CovMatrix direct_sum(const CovMatrix& a, const CovMatrix& b) {
  const auto na = a.data().rows();
  const auto nb = b.data().rows();
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.data();
  m.bottomRightCorner(nb, nb) = b.data();
  return CovMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Layout

std::string ModeLabel::to_string() const {
  switch (kind) {
    case Kind::kA: return "A";
    case Kind::kB: return "B";
    case Kind::kC: return "C";
    case Kind::kEnvB: return "EB" + std::to_string(env_index);
    case Kind::kEnvC: return "EC" + std::to_string(env_index);
  }
  return "?";
}

ModeLayout::ModeLayout(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) {
        throw std::invalid_argument("ModeLayout: duplicate label " + labels_[i].to_string());
      }
    }
  }
}

ModeLayout ModeLayout::collision(int steps) {
  if (steps < 1) throw std::invalid_argument("ModeLayout::collision: steps must be >= 1");
  std::vector<ModeLabel> labels;
  labels.reserve(2 * steps + 1);
  for (int j = steps - 1; j >= 1; --j) labels.push_back(ModeLabel::env_b(j));
  labels.push_back(ModeLabel::b());
  labels.push_back(ModeLabel::a());
  labels.push_back(ModeLabel::c());
  for (int j = 1; j <= steps - 1; ++j) labels.push_back(ModeLabel::env_c(j));
  return ModeLayout(std::move(labels));
}

ModeLayout ModeLayout::system() { return ModeLayout({ModeLabel::a(), ModeLabel::b(), ModeLabel::c()}); }

ModeLayout ModeLayout::tmsv() { return ModeLayout({ModeLabel::a(), ModeLabel::b()}); }

int ModeLayout::position(const ModeLabel& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::invalid_argument("ModeLayout: unknown mode " + label.to_string());
  return static_cast<int>(it - labels_.begin());
}

// ---------------------------------------------------------------------------
// Constructors

CovMatrix single_mode_cov(const SingleModeSpec& spec) {
  return CovMatrix(squeezed_thermal_block(spec.n() + 0.5, 2.0 * spec.r(), spec.phi()));
}

CovMatrix tmsv_cov(double xi_ab) {
  const double c = 0.5 * std::cosh(xi_ab);
  const double s = 0.5 * std::sinh(xi_ab);
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal().setConstant(c);
  m(0, 2) = m(2, 0) = s;
  m(1, 3) = m(3, 1) = -s;
  return CovMatrix(std::move(m));
}

CovMatrix squeezed_vac_cov(double xi_c, double phi_c) {
  if (!(xi_c >= 0.0)) throw std::invalid_argument("squeezed_vac_cov: xi_c must be >= 0");
  return CovMatrix(squeezed_thermal_block(0.5, xi_c, phi_c));
}

CovMatrix thermal_cov(double n) {
  if (!(n >= 0.0)) throw std::invalid_argument("thermal_cov: n must be >= 0");
  return CovMatrix(Matrix::Identity(2, 2) * (n + 0.5));
}

CovMatrix vacuum_cov(int modes) {
  if (modes < 1) throw std::invalid_argument("vacuum_cov: modes must be >= 1");
  return CovMatrix(Matrix::Identity(2 * modes, 2 * modes) * 0.5);
}

// ---------------------------------------------------------------------------
// Spectra

std::vector<double> symplectic_eigenvalues(const CovMatrix& sigma) {
  const Matrix& s = sigma.data();
  const int n = sigma.modes();

  // i Omega sigma is similar to the Hermitian i sigma^{1/2} Omega sigma^{1/2}.
  Eigen::SelfAdjointEigenSolver<Matrix> sym(s);
  const Eigen::VectorXd root = sym.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix half = sym.eigenvectors() * root.asDiagonal() * sym.eigenvectors().transpose();
  const Matrix a = half * symplectic_form(n) * half;

  using namespace std::complex_literals;
  const Eigen::MatrixXcd h = 1.0i * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm(h, Eigen::EigenvaluesOnly);

  // Eigenvalues come in +-nu pairs; the top half are the nu_k in ascending order.
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = herm.eigenvalues()(n + k);
  std::sort(nu.begin(), nu.end());
  return nu;
}

double entropy_term(double nu) {
  if (nu <= 0.5 + kPureClamp) return 0.0;
  const double up = nu + 0.5;
  const double down = nu - 0.5;
  return up * std::log(up) - down * std::log(down);
}

double entropy(const CovMatrix& sigma) {
  double total = 0.0;
  for (const double nu : symplectic_eigenvalues(sigma)) {
    if (nu < 0.5 - kEntropyFloor) {
      std::ostringstream os;
      os << "entropy: symplectic eigenvalue " << nu << " below 1/2";
      throw UnphysicalStateError(os.str());
    }
    total += entropy_term(nu);
  }
  return total;
}

CovMatrix reduce(const CovMatrix& sigma, const ModeLayout& layout, const std::vector<ModeLabel>& subset) {
  if (layout.size() != sigma.modes()) {
    throw std::invalid_argument("reduce: layout size does not match covariance");
  }
  std::vector<int> positions;
  positions.reserve(subset.size());
  for (const auto& label : subset) positions.push_back(layout.position(label));
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
    throw std::invalid_argument("reduce: duplicate mode in subset");
  }
  return permute_modes(sigma, positions);
}

CovMatrix permute_modes(const CovMatrix& sigma, const std::vector<int>& order) {
  const int k = static_cast<int>(order.size());
  Matrix out(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    if (order[i] < 0 || order[i] >= sigma.modes()) throw std::out_of_range("permute_modes: bad mode index");
    for (int j = 0; j < k; ++j) out.block<2, 2>(2 * i, 2 * j) = sigma.block(order[i], order[j]);
  }
  return CovMatrix(std::move(out));
}

}  // namespace gcm
