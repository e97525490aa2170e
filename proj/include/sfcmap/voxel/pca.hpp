#pragma once

#include <sfcmap/error.hpp>
#include <sfcmap/voxel/atoms.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sfcmap::voxel {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;  // row-major

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted descending; vectors[k] is the unit eigenvector of
/// values[k].
struct SymmetricEigen {
  Vec3 values{};
  Mat3 vectors{};
};

inline SymmetricEigen symmetric_eigen(Mat3 a) {
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // columns are eigenvectors
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] > a[y][y]; });
  SymmetricEigen out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (int r = 0; r < 3; ++r) out.vectors[k][r] = v[r][order[k]];
  }
  return out;
}

inline Vec3 centroid(std::span<const AtomRecord> atoms) {
  Vec3 c{};
  for (const auto& atom : atoms)
    for (int k = 0; k < 3; ++k) c[k] += atom.position[k];
  for (double& x : c) x /= static_cast<double>(atoms.size());
  return c;
}

/// Rigid frame that puts a structure into its principal axes.
struct Alignment {
  Mat3 rotation{};  // rows are the new x, y, z axes in input coordinates
  Vec3 center{};    // unweighted centroid of the input atoms
  Vec3 origin{};    // where the centroid ends up
  Vec3 variances{}; // per new axis, descending

  Vec3 apply(const Vec3& p) const {
    Vec3 out{};
    for (int r = 0; r < 3; ++r) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += rotation[r][k] * (p[k] - center[k]);
      out[r] = s + origin[r];
    }
    return out;
  }
};

struct AlignOptions {
  /// Alignment fails when the second-largest variance falls below this
  /// fraction of the largest (collinear or coincident atoms).
  double rank_tolerance = 1e-10;
};

/// Principal-axis frame of the atoms: axis x carries the largest variance,
/// z the smallest, and the (unweighted) centroid is placed at `origin`.
///
/// Eigenvector signs: the x and y axes are oriented so the third moment of
/// the centred coordinates along them is non-negative; when that moment is
/// numerically zero the axis is oriented so its largest component is
/// positive. z is x cross y, so the frame is always a proper rotation.
inline Alignment principal_alignment(std::span<const AtomRecord> atoms, const Vec3& origin,
                                     const AlignOptions& options = {}) {
  if (atoms.size() < 3)
    throw Error(ErrorCode::DegenerateGeometry, "need at least 3 atoms to align, got " +
                                                   std::to_string(atoms.size()));
  Alignment frame;
  frame.center = centroid(atoms);
  frame.origin = origin;

  Mat3 cov{};
  for (const auto& atom : atoms) {
    Vec3 d;
    for (int k = 0; k < 3; ++k) d[k] = atom.position[k] - frame.center[k];
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) cov[r][k] += d[r] * d[k];
  }
  for (auto& row : cov)
    for (double& x : row) x /= static_cast<double>(atoms.size());

  const SymmetricEigen eig = symmetric_eigen(cov);
  if (!(eig.values[0] > 0.0) || eig.values[1] <= options.rank_tolerance * eig.values[0])
    throw Error(ErrorCode::DegenerateGeometry, "atom coordinates are collinear or coincident");

  double scale = 0.0;
  for (const auto& atom : atoms)
    for (int k = 0; k < 3; ++k) scale = std::max(scale, std::abs(atom.position[k] - frame.center[k]));

  for (int axis = 0; axis < 2; ++axis) {
    Vec3 e = eig.vectors[axis];
    double skew = 0.0;
    for (const auto& atom : atoms) {
      double proj = 0.0;
      for (int k = 0; k < 3; ++k) proj += e[k] * (atom.position[k] - frame.center[k]);
      skew += proj * proj * proj;
    }
    const double tie = 1e-9 * static_cast<double>(atoms.size()) * scale * scale * scale;
    bool flip = skew < -tie;
    if (std::abs(skew) <= tie) {
      int big = 0;
      for (int k = 1; k < 3; ++k)
        if (std::abs(e[k]) > std::abs(e[big]) + 1e-12) big = k;
      flip = e[big] < 0.0;
    }
    if (flip)
      for (double& x : e) x = -x;
    frame.rotation[axis] = e;
  }
  const Vec3& ex = frame.rotation[0];
  const Vec3& ey = frame.rotation[1];
  frame.rotation[2] = {ex[1] * ey[2] - ex[2] * ey[1], ex[2] * ey[0] - ex[0] * ey[2],
                       ex[0] * ey[1] - ex[1] * ey[0]};
  frame.variances = eig.values;
  return frame;
}

/// Returns the atoms rotated into their principal-axis frame with the
/// centroid moved to `origin` (the render-window centre for rasterization).
inline std::vector<AtomRecord> pca_align(std::span<const AtomRecord> atoms, const Vec3& origin,
                                         const AlignOptions& options = {}) {
  const Alignment frame = principal_alignment(atoms, origin, options);
  std::vector<AtomRecord> out(atoms.begin(), atoms.end());
  for (auto& atom : out) atom.position = frame.apply(atom.position);
  return out;
}

}  // namespace sfcmap::voxel
