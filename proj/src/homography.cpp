#include <Eigen/Dense>
#include <cmath>

#include "hair/errors.hpp"
#include "hair/geometry.hpp"

namespace hair {

namespace {

constexpr double kInfinityTolerance = 1e-12;
constexpr double kDeterminantTolerance = 1e-9;

Eigen::Matrix3d to_eigen(const Homography::Matrix& m) {
  Eigen::Matrix3d out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = m[r][c];
  return out;
}

Homography::Matrix from_eigen(const Eigen::Matrix3d& m) {
  Homography::Matrix out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r][c] = m(r, c);
  return out;
}

// Similarity that moves the centroid to the origin and sets the mean distance
// from it to sqrt(2).
Eigen::Matrix3d normalizer(const std::vector<Point>& pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= double(pts.size());
  cy /= double(pts.size());
  double mean = 0.0;
  for (const auto& p : pts) mean += std::hypot(p.x - cx, p.y - cy);
  mean /= double(pts.size());
  if (mean <= 0.0) throw ComputationError("rank-deficient homography: all points coincide");
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

Point transform(const Eigen::Matrix3d& t, const Point& p) {
  Eigen::Vector3d v = t * Eigen::Vector3d(p.x, p.y, 1.0);
  return {v.x() / v.z(), v.y() / v.z()};
}

void reject_collinear(std::span<const GroundControlPoint> pairs) {
  double scale = 0.0;
  for (const auto& a : pairs)
    for (const auto& b : pairs)
      scale = std::max(scale, std::hypot(a.pixel.x - b.pixel.x, a.pixel.y - b.pixel.y));
  if (scale <= 0.0) throw ComputationError("rank-deficient homography: all points coincide");
  const double tol = 1e-9 * scale * scale;
  const std::size_t n = pairs.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Point& a = pairs[i].pixel;
        const Point& b = pairs[j].pixel;
        const Point& c = pairs[k].pixel;
        const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        if (std::abs(cross) <= tol)
          throw ComputationError("rank-deficient homography: pixel points " + std::to_string(i) +
                                 ", " + std::to_string(j) + ", " + std::to_string(k) +
                                 " are collinear");
      }
}

}  // namespace

Homography::Homography() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

Homography::Homography(const Matrix& m, std::string unit) : m_(m), unit_(std::move(unit)) {
  if (std::abs(m_[2][2]) < kInfinityTolerance)
    throw ComputationError("homography has zero bottom-right entry");
  const double s = m_[2][2];
  for (auto& row : m_)
    for (auto& v : row) v /= s;
  if (std::abs(to_eigen(m_).determinant()) < kDeterminantTolerance)
    throw ComputationError("homography is singular");
}

Point Homography::apply(const Point& p) const {
  const double w = m_[2][0] * p.x + m_[2][1] * p.y + m_[2][2];
  if (std::abs(w) < kInfinityTolerance)
    throw ComputationError("homography maps a point to the plane at infinity");
  return {(m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2]) / w,
          (m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2]) / w};
}

Homography Homography::inverse() const {
  return Homography(from_eigen(to_eigen(m_).inverse()), unit_);
}

HomographyFit estimate_homography(std::span<const GroundControlPoint> pairs,
                                  const std::string& unit) {
  if (pairs.size() < 4) throw ComputationError("homography needs at least 4 point pairs");
  // With exactly four pairs any collinear triple makes the system degenerate;
  // larger sets are left to the rank test below.
  if (pairs.size() == 4) reject_collinear(pairs);

  std::vector<Point> src, dst;
  for (const auto& p : pairs) {
    src.push_back(p.pixel);
    dst.push_back(p.world);
  }
  const Eigen::Matrix3d ts = normalizer(src);
  const Eigen::Matrix3d td = normalizer(dst);

  const Eigen::Index n = Eigen::Index(pairs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point s = transform(ts, src[i]);
    const Point d = transform(td, dst[i]);
    a.row(2 * i) << -s.x, -s.y, -1, 0, 0, 0, d.x * s.x, d.x * s.y, d.x;
    a.row(2 * i + 1) << 0, 0, 0, -s.x, -s.y, -1, d.y * s.x, d.y * s.y, d.y;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Eight independent constraints are needed; the ninth singular value may be 0.
  if (sv.size() < 8 || sv(7) <= 1e-10 * sv(0))
    throw ComputationError("rank-deficient homography system");
  const Eigen::VectorXd hv = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);
  const Eigen::Matrix3d h = td.inverse() * hn * ts;

  HomographyFit fit{Homography(from_eigen(h), unit), 0.0};
  double sq = 0.0;
  for (const auto& p : pairs) {
    const Point q = fit.homography.apply(p.pixel);
    sq += (q.x - p.world.x) * (q.x - p.world.x) + (q.y - p.world.y) * (q.y - p.world.y);
  }
  fit.rms_residual = std::sqrt(sq / double(pairs.size()));
  return fit;
}

}  // namespace hair
