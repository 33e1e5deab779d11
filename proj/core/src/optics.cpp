#include "gcm/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gcm {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kAngleSlack = 1e-12;
constexpr double kLiftOrthoTol = 1e-8;

// 2x2 mixing block [[a, b], [c, d]] acting on modes (p, q).
struct Block {
  int p;
  int q;
  double a, b, c, d;
};

// [[r, t], [-t, r]] on (p, q).
Block rotation(int p, int q, BSAngle theta, double t_sign = 1.0) {
  return {p, q, theta.r(), t_sign * theta.t(), -t_sign * theta.t(), theta.r()};
}

void place(Matrix& m, const Block& blk) {
  m(blk.p, blk.p) = blk.a;
  m(blk.p, blk.q) = blk.b;
  m(blk.q, blk.p) = blk.c;
  m(blk.q, blk.q) = blk.d;
}

// m <- F m for the factor F = identity except `blk`. Touches two rows only.
void apply_left(Matrix& m, const Block& blk) {
  const Eigen::RowVectorXd rp = m.row(blk.p);
  const Eigen::RowVectorXd rq = m.row(blk.q);
  m.row(blk.p) = blk.a * rp + blk.b * rq;
  m.row(blk.q) = blk.c * rp + blk.d * rq;
}

void require_steps(int steps, int minimum, const char* who) {
  if (steps < minimum) {
    throw std::invalid_argument(std::string(who) + ": steps must be >= " + std::to_string(minimum));
  }
}

// Positions in the collision layout of dimension 2L+1.
struct Positions {
  int steps;
  int b() const { return steps - 1; }
  int c() const { return steps + 1; }
  int env_b(int k) const { return steps - 1 - k; }
  int env_c(int k) const { return steps + 1 + k; }
};

Block ss_block(const Positions& pos, BSAngle th) { return rotation(pos.b(), pos.c(), th); }

// The B-side blocks read [[r, -t], [t, r]] on (outer, inner) modes.
Block se_block_b(const Positions& pos, int j, BSAngle th) { return rotation(pos.env_b(j + 1), pos.b(), th, -1.0); }
Block se_block_c(const Positions& pos, int j, BSAngle th) { return rotation(pos.c(), pos.env_c(j + 1), th); }
Block ee_block_b(const Positions& pos, int j, BSAngle th) {
  return rotation(pos.env_b(j + 1), pos.env_b(j), th, -1.0);
}
Block ee_block_c(const Positions& pos, int j, BSAngle th) { return rotation(pos.env_c(j), pos.env_c(j + 1), th); }

}  // namespace

BSAngle::BSAngle(double theta) {
  if (!std::isfinite(theta) || theta < -kAngleSlack || theta > kHalfPi + kAngleSlack) {
    std::ostringstream os;
    os << "beam-splitter angle " << theta << " outside [0, pi/2]";
    throw std::out_of_range(os.str());
  }
  theta_ = std::clamp(theta, 0.0, kHalfPi);
  // Exact values at the end points keep full reflection/transmission exact.
  if (theta_ == kHalfPi) {
    r_ = 1.0;
    t_ = 0.0;
  } else if (theta_ == 0.0) {
    r_ = 0.0;
    t_ = 1.0;
  } else {
    r_ = std::sin(theta_);
    t_ = std::cos(theta_);
  }
}

BSAngle BSAngle::from_pi(double multiple) { return BSAngle(multiple * std::numbers::pi); }

double ScatterMatrix::orthogonality_error() const {
  return (data * data.transpose() - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff();
}

ScatterMatrix bs2(BSAngle theta) {
  Matrix m(2, 2);
  place(m, rotation(0, 1, theta));
  return {std::move(m), 1};
}

ScatterMatrix s_ss(int steps, BSAngle theta_ss) {
  require_steps(steps, 1, "s_ss");
  const Positions pos{steps};
  Matrix m = Matrix::Identity(2 * steps + 1, 2 * steps + 1);
  place(m, ss_block(pos, theta_ss));
  return {std::move(m), steps};
}

ScatterMatrix s_se(int steps, int j, BSAngle theta_b, BSAngle theta_c) {
  require_steps(steps, 2, "s_se");
  if (j < 0 || j > steps - 2) throw std::out_of_range("s_se: j must satisfy 0 <= j <= L-2");
  const Positions pos{steps};
  Matrix m = Matrix::Identity(2 * steps + 1, 2 * steps + 1);
  place(m, se_block_b(pos, j, theta_b));
  place(m, se_block_c(pos, j, theta_c));
  return {std::move(m), steps};
}

ScatterMatrix s_ee(int steps, int j, BSAngle theta_b, BSAngle theta_c) {
  require_steps(steps, 3, "s_ee");
  if (j < 1 || j > steps - 2) throw std::out_of_range("s_ee: j must satisfy 1 <= j <= L-2");
  const Positions pos{steps};
  Matrix m = Matrix::Identity(2 * steps + 1, 2 * steps + 1);
  place(m, ee_block_b(pos, j, theta_b));
  place(m, ee_block_c(pos, j, theta_c));
  return {std::move(m), steps};
}

ScatterMatrix total_scatter(int steps, const CollisionAngles& angles) {
  require_steps(steps, 1, "total_scatter");
  const Positions pos{steps};
  const int n = 2 * steps + 1;
  Matrix m = Matrix::Identity(n, n);

  apply_left(m, ss_block(pos, angles.ss));
  if (steps >= 2) {
    apply_left(m, se_block_b(pos, 0, angles.se));
    apply_left(m, se_block_c(pos, 0, angles.se));
    apply_left(m, ss_block(pos, angles.ss));
  }
  for (int j = 1; j <= steps - 2; ++j) {
    apply_left(m, ee_block_b(pos, j, angles.ee));
    apply_left(m, ee_block_c(pos, j, angles.ee));
    apply_left(m, se_block_b(pos, j, angles.se));
    apply_left(m, se_block_c(pos, j, angles.se));
    apply_left(m, ss_block(pos, angles.ss));
  }
  return {std::move(m), steps};
}

ScatterMatrix channel_scatter(int steps, BSAngle theta_se, BSAngle theta_ee, Channel channel) {
  require_steps(steps, 2, "channel_scatter");
  Matrix m = Matrix::Identity(steps, steps);

  // Channel C is built over [C, E_1, ..., E_{L-1}]. Channel B uses the
  // layout order [E_{L-1}, ..., E_1, B]; there every block reads with -t.
  auto block = [&](int p, int q, BSAngle th) {
    if (channel == Channel::kC) return rotation(p, q, th);
    const int lo = std::min(steps - 1 - p, steps - 1 - q);
    const int hi = std::max(steps - 1 - p, steps - 1 - q);
    return rotation(lo, hi, th, -1.0);
  };
  apply_left(m, block(0, 1, theta_se));
  for (int j = 1; j <= steps - 2; ++j) {
    apply_left(m, block(j, j + 1, theta_ee));
    apply_left(m, block(0, j + 1, theta_se));
  }
  return {std::move(m), steps};
}

int channel_index(int steps, int k, Channel channel) { return channel == Channel::kC ? k : steps - 1 - k; }

Matrix lift(const ScatterMatrix& s) {
  const double err = s.orthogonality_error();
  if (err > kLiftOrthoTol) {
    std::ostringstream os;
    os << "lift: scattering matrix is not orthogonal (max |SS^T - I| = " << err << ")";
    throw std::invalid_argument(os.str());
  }
  const int n = s.size();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = s.data(i, j);
      if (v == 0.0) continue;
      m(2 * i, 2 * j) = v;
      m(2 * i + 1, 2 * j + 1) = v;
    }
  }
  return m;
}

}  // namespace gcm
