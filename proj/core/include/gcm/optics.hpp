#pragma once

// Beam-splitter scattering matrices for the collision network.
//
// A scattering matrix S acts on the vector of annihilation operators,
// a_out = S a_in. Each S is real orthogonal, so its covariance image is
// S (x) I_2 on interleaved quadratures (see lift()).

#include <Eigen/Dense>

namespace gcm {

using Matrix = Eigen::MatrixXd;

/// Beam-splitter angle theta in [0, pi/2]; reflectivity sin(theta),
/// transmissivity cos(theta).
class BSAngle {
 public:
  /// Throws std::out_of_range outside [0, pi/2] (1e-12 slack, then clamped).
  explicit BSAngle(double theta);
  /// theta = multiple * pi.
  static BSAngle from_pi(double multiple);

  double theta() const { return theta_; }
  double r() const { return r_; }
  double t() const { return t_; }

 private:
  double theta_;
  double r_;
  double t_;
};

/// Real orthogonal mode-mixing matrix for collision step `step`.
struct ScatterMatrix {
  Matrix data;
  int step = 0;

  int size() const { return static_cast<int>(data.rows()); }
  /// max |S S^T - I|.
  double orthogonality_error() const;
};

enum class Channel { kB, kC };

/// Uniform collision strengths shared by both dissipative channels.
struct CollisionAngles {
  BSAngle ss;
  BSAngle se;
  BSAngle ee;
};

/// [[r, t], [-t, r]].
ScatterMatrix bs2(BSAngle theta);

// Factors of the full network, embedded at dimension 2L+1 in the collision
// layout [E^B_{L-1}, ..., E^B_1, B, A, C, E^C_1, ..., E^C_{L-1}].

/// B-C collision.
ScatterMatrix s_ss(int steps, BSAngle theta_ss);
/// B with E^B_{j+1} and C with E^C_{j+1}, 0 <= j <= L-2.
ScatterMatrix s_se(int steps, int j, BSAngle theta_b, BSAngle theta_c);
/// E^B_j with E^B_{j+1} and E^C_j with E^C_{j+1}, 1 <= j <= L-2.
ScatterMatrix s_ee(int steps, int j, BSAngle theta_b, BSAngle theta_c);

/// Total network after `steps` collisions:
///   S(1) = S_SS,  S(2) = S_SS S_SE(0) S(1),
///   S(L) = [S_SS S_SE(L-2) S_EE(L-2)] ... [S_SS S_SE(1) S_EE(1)] S(2).
ScatterMatrix total_scatter(int steps, const CollisionAngles& angles);

/// Single-channel network of dimension L >= 2:
///   S~(L) = [S~_SE(L-1) S~_EE(L-2)] ... [S~_SE(2) S~_EE(1)] S~_SE(1).
/// Channel C is ordered [C, E_1, ..., E_{L-1}]. Channel B follows the
/// collision layout, [E_{L-1}, ..., E_1, B], in which every block has its
/// transmissivity flipped; it is the C matrix with rows and columns reversed.
ScatterMatrix channel_scatter(int steps, BSAngle theta_se, BSAngle theta_ee, Channel channel);

/// Row/column of logical mode k (0 = system, k = E_k) in channel_scatter.
int channel_index(int steps, int k, Channel channel);
/// Covariance image S (x) I_2. Throws std::invalid_argument when S deviates
/// from orthogonality by more than 1e-8.
Matrix lift(const ScatterMatrix& s);

}  // namespace gcm
