#pragma once

#include <hyperreg/curve.hpp>

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace hyperreg {

struct LineSeg {
  cd a, b;
};

/// x = center + radius * exp(i theta), theta from theta0 to theta1 (either
/// direction, possibly more than one turn).
struct ArcSeg {
  cd center;
  double radius;
  double theta0, theta1;
};

/// x = (A tau + B) / (C tau + D) with tau = tau0 + (tau1 - tau0) t.
struct MobiusSeg {
  cd A, B, C, D;
  double tau0 = 0, tau1 = 1;
};

using Segment = std::variant<LineSeg, ArcSeg, MobiusSeg>;

cd segment_x(const Segment& s, double t);
cd segment_dx(const Segment& s, double t);
Segment segment_reverse(const Segment& s);
/// Restriction to [t0, t1], reparameterized over [0, 1].
Segment segment_sub(const Segment& s, double t0, double t1);

struct XPath {
  std::vector<Segment> segments;

  cd start() const { return segment_x(segments.front(), 0.0); }
  cd end() const { return segment_x(segments.back(), 1.0); }
  bool closed(double tol = 1e-9) const;
};

/// An x-plane path with a continued branch of y. Segments that begin at a
/// branch point take their sheet from `hints` (first non-zero y points along
/// the hint); the first hint also serves a path starting at a branch point.
class LiftedPath {
 public:
  LiftedPath(const HyperellipticCurve& curve, XPath base, cd y_seed, std::vector<cd> hints = {});

  const HyperellipticCurve& curve() const { return curve_; }
  const XPath& base() const { return base_; }
  int segment_count() const { return static_cast<int>(base_.segments.size()); }
  const Segment& segment(int k) const { return base_.segments[k]; }
  cd y_seed() const { return y_seed_; }

  cd x(int seg, double t) const { return segment_x(base_.segments[seg], t); }
  cd dx(int seg, double t) const { return segment_dx(base_.segments[seg], t); }
  cd y(int seg, double t) const;
  cd start_x() const { return base_.start(); }
  cd end_x() const { return base_.end(); }
  cd end_y() const { return traces_.back().back().y; }
  /// Closed in x and returning to the seed sheet.
  bool closed() const;
  const std::vector<YSample>& trace(int seg) const { return traces_[seg]; }

  LiftedPath reversed() const;
  /// Concatenation; end of *this must coincide with start of next.
  LiftedPath then(const LiftedPath& next) const;
  LiftedPath prefix(int seg, double t) const;
  LiftedPath suffix(int seg, double t) const;
  /// Same x-path started on the other sheet.
  LiftedPath involuted() const;

 private:
  cd first_nonzero(int seg) const;
  cd last_nonzero(int seg) const;

  HyperellipticCurve curve_;
  XPath base_;
  cd y_seed_;
  std::vector<std::vector<YSample>> traces_;
};

struct Crossing {
  int seg_a;
  double t_a;
  int seg_b;
  double t_b;
  cd x;
  int sign;  // sign of Im(conj(a') b')
  bool same_sheet;
};

/// All transverse crossings of the x-projections; NonTransverse on tangency or
/// a crossing at a branch point.
std::vector<Crossing> crossings(const LiftedPath& a, const LiftedPath& b);
/// Homological intersection of two closed lifted paths.
int intersection(const LiftedPath& a, const LiftedPath& b);

struct LoopSystem {
  std::vector<LiftedPath> loops;  // based at p
  std::vector<LiftedPath> cores;  // the encircling circles alone
  std::vector<std::string> labels;
  Eigen::MatrixXi intersections;  // computed on the cores
};

LoopSystem symplectic_basis(const HyperellipticCurve& curve);

struct GammaHalves {
  LiftedPath plus;
  LiftedPath minus;
};
GammaHalves gamma_halves(const HyperellipticCurve& curve);

/// Preimage of a circle separating `branch_subset` from the other branch
/// points, traversed as one closed lift (double cover). Starts on gamma+
/// where the circle meets the gamma arc, if it does.
LiftedPath separating_loop(const HyperellipticCurve& curve, const std::vector<int>& branch_subset);

nlohmann::json to_json(const LiftedPath& path);

}  // namespace hyperreg
