#include <hyperreg/json_util.hpp>
#include <hyperreg/paths.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace hyperreg {

namespace {

constexpr double kPi = std::numbers::pi;
const cd I(0, 1);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double scale_of(cd x) { return 1.0 + std::abs(x); }

}  // namespace

cd segment_x(const Segment& s, double t) {
  return std::visit(
      overloaded{
          [t](const LineSeg& l) { return l.a + t * (l.b - l.a); },
          [t](const ArcSeg& a) {
            return a.center + a.radius * std::exp(I * (a.theta0 + t * (a.theta1 - a.theta0)));
          },
          [t](const MobiusSeg& m) {
            double tau = m.tau0 + t * (m.tau1 - m.tau0);
            return (m.A * tau + m.B) / (m.C * tau + m.D);
          },
      },
      s);
}

cd segment_dx(const Segment& s, double t) {
  return std::visit(
      overloaded{
          [](const LineSeg& l) { return l.b - l.a; },
          [t](const ArcSeg& a) {
            double d = a.theta1 - a.theta0;
            return I * d * a.radius * std::exp(I * (a.theta0 + t * d));
          },
          [t](const MobiusSeg& m) {
            double tau = m.tau0 + t * (m.tau1 - m.tau0);
            cd den = m.C * tau + m.D;
            return (m.A * m.D - m.B * m.C) / (den * den) * (m.tau1 - m.tau0);
          },
      },
      s);
}

Segment segment_reverse(const Segment& s) {
  return std::visit(overloaded{
                        [](const LineSeg& l) -> Segment { return LineSeg{l.b, l.a}; },
                        [](const ArcSeg& a) -> Segment {
                          return ArcSeg{a.center, a.radius, a.theta1, a.theta0};
                        },
                        [](const MobiusSeg& m) -> Segment {
                          return MobiusSeg{m.A, m.B, m.C, m.D, m.tau1, m.tau0};
                        },
                    },
                    s);
}

Segment segment_sub(const Segment& s, double t0, double t1) {
  return std::visit(
      overloaded{
          [&](const LineSeg& l) -> Segment {
            return LineSeg{l.a + t0 * (l.b - l.a), l.a + t1 * (l.b - l.a)};
          },
          [&](const ArcSeg& a) -> Segment {
            double d = a.theta1 - a.theta0;
            return ArcSeg{a.center, a.radius, a.theta0 + t0 * d, a.theta0 + t1 * d};
          },
          [&](const MobiusSeg& m) -> Segment {
            double d = m.tau1 - m.tau0;
            return MobiusSeg{m.A, m.B, m.C, m.D, m.tau0 + t0 * d, m.tau0 + t1 * d};
          },
      },
      s);
}

bool XPath::closed(double tol) const {
  return !segments.empty() && std::abs(end() - start()) <= tol * scale_of(start());
}

// ---------------------------------------------------------------------------
// LiftedPath

LiftedPath::LiftedPath(const HyperellipticCurve& curve, XPath base, cd y_seed, std::vector<cd> hints)
    : curve_(curve), base_(std::move(base)), y_seed_(y_seed) {
  if (base_.segments.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  cd y = y_seed;
  for (int k = 0; k < segment_count(); ++k) {
    const Segment& seg = base_.segments[k];
    cd xs = segment_x(seg, 0.0);
    if (k > 0) {
      cd prev_end = segment_x(base_.segments[k - 1], 1.0);
      if (std::abs(prev_end - xs) > 1e-9 * scale_of(xs))
        throw Error(ErrorCode::InvalidArgument, "consecutive segments do not share endpoints");
    }
    cd hint = k < static_cast<int>(hints.size()) ? hints[k] : cd(0);
    bool at_branch = false;
    for (cd r : curve_.roots())
      if (std::abs(xs - r) <= 1e-12 * scale_of(r)) at_branch = true;
    if (at_branch) {
      if (hint == cd(0)) {
        if (k > 0) throw Error(ErrorCode::InvalidArgument, "segment starts at a branch point without a sheet hint");
        hint = 1;
      }
      y = 0;
    }
    traces_.push_back(continue_y(curve_, [&seg](double t) { return segment_x(seg, t); }, y, hint));
    y = traces_.back().back().y;
  }
}

cd LiftedPath::y(int seg, double t) const {
  const auto& tr = traces_[seg];
  auto it = std::lower_bound(tr.begin(), tr.end(), t, [](const YSample& s, double v) { return s.t < v; });
  std::size_t hi = std::min<std::size_t>(it - tr.begin(), tr.size() - 1);
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  cd ref = std::abs(tr[lo].y) >= std::abs(tr[hi].y) ? tr[lo].y : tr[hi].y;
  if (ref == cd(0)) return 0;
  return nearest_root(curve_, x(seg, t), ref);
}

bool LiftedPath::closed() const {
  if (!base_.closed()) return false;
  double tol = 1e-6 * (1 + std::abs(y_seed_));
  return std::abs(end_y() - y_seed_) <= tol;
}

cd LiftedPath::first_nonzero(int seg) const {
  for (const auto& s : traces_[seg])
    if (s.y != cd(0)) return s.y;
  return 0;
}

cd LiftedPath::last_nonzero(int seg) const {
  const auto& tr = traces_[seg];
  for (auto it = tr.rbegin(); it != tr.rend(); ++it)
    if (it->y != cd(0)) return it->y;
  return 0;
}

LiftedPath LiftedPath::reversed() const {
  XPath b;
  std::vector<cd> hints;
  for (int k = segment_count() - 1; k >= 0; --k) {
    b.segments.push_back(segment_reverse(base_.segments[k]));
    hints.push_back(last_nonzero(k));
  }
  return LiftedPath(curve_, std::move(b), end_y(), std::move(hints));
}

LiftedPath LiftedPath::then(const LiftedPath& next) const {
  if (std::abs(end_x() - next.start_x()) > 1e-9 * scale_of(end_x()))
    throw Error(ErrorCode::InvalidArgument, "paths do not join");
  cd a = end_y(), b = next.y_seed();
  if (a != cd(0) && std::abs(a - b) > std::abs(a + b))
    throw Error(ErrorCode::InvalidArgument, "paths join on different sheets");
  XPath path = base_;
  std::vector<cd> hints;
  for (int k = 0; k < segment_count(); ++k) hints.push_back(first_nonzero(k));
  for (int k = 0; k < next.segment_count(); ++k) {
    path.segments.push_back(next.base_.segments[k]);
    hints.push_back(next.first_nonzero(k));
  }
  return LiftedPath(curve_, std::move(path), y_seed_, std::move(hints));
}

LiftedPath LiftedPath::prefix(int seg, double t) const {
  XPath path;
  std::vector<cd> hints;
  for (int k = 0; k < seg; ++k) {
    path.segments.push_back(base_.segments[k]);
    hints.push_back(first_nonzero(k));
  }
  path.segments.push_back(segment_sub(base_.segments[seg], 0.0, t));
  hints.push_back(first_nonzero(seg));
  return LiftedPath(curve_, std::move(path), y_seed_, std::move(hints));
}

LiftedPath LiftedPath::suffix(int seg, double t) const {
  XPath path;
  std::vector<cd> hints;
  path.segments.push_back(segment_sub(base_.segments[seg], t, 1.0));
  hints.push_back(first_nonzero(seg));
  for (int k = seg + 1; k < segment_count(); ++k) {
    path.segments.push_back(base_.segments[k]);
    hints.push_back(first_nonzero(k));
  }
  return LiftedPath(curve_, std::move(path), y(seg, t), std::move(hints));
}

LiftedPath LiftedPath::involuted() const {
  std::vector<cd> hints;
  for (int k = 0; k < segment_count(); ++k) hints.push_back(-first_nonzero(k));
  return LiftedPath(curve_, base_, -y_seed_, std::move(hints));
}

// ---------------------------------------------------------------------------
// Crossings

namespace {

// A line (through p with direction d) or a circle (center c, radius r).
struct GenCircle {
  bool is_line;
  cd p, d;
  cd c;
  double r;
};

GenCircle support(const Segment& s) {
  return std::visit(
      overloaded{
          [](const LineSeg& l) { return GenCircle{true, l.a, l.b - l.a, 0, 0}; },
          [](const ArcSeg& a) { return GenCircle{false, 0, 0, a.center, a.radius}; },
          [&s](const MobiusSeg&) {
            cd z1 = segment_x(s, 0.0), z2 = segment_x(s, 0.5), z3 = segment_x(s, 1.0);
            cd w = (z3 - z1) / (z2 - z1);
            if (std::abs(w.imag()) <= 1e-12 * std::abs(w))
              return GenCircle{true, z1, z3 - z1, 0, 0};
            // circumcenter
            cd c = (z2 - z1) * (w - std::norm(w)) / (2.0 * I * w.imag()) + z1;
            return GenCircle{false, 0, 0, c, std::abs(z1 - c)};
          },
      },
      s);
}

double cross(cd a, cd b) { return (std::conj(a) * b).imag(); }

std::vector<cd> meet(const GenCircle& a, const GenCircle& b) {
  std::vector<cd> out;
  if (a.is_line && b.is_line) {
    double den = cross(a.d, b.d);
    if (std::abs(den) <= 1e-14 * std::abs(a.d) * std::abs(b.d)) return out;
    double s = cross(b.p - a.p, b.d) / den;
    out.push_back(a.p + s * a.d);
    return out;
  }
  if (!a.is_line && b.is_line) return meet(b, a);
  if (a.is_line) {
    // |p + s d - c|^2 = r^2
    cd q = a.p - b.c;
    double A = std::norm(a.d), B = 2 * (std::conj(a.d) * q).real(), C = std::norm(q) - b.r * b.r;
    double disc = B * B - 4 * A * C;
    if (disc < 0) return out;
    double sq = std::sqrt(disc);
    out.push_back(a.p + (-B - sq) / (2 * A) * a.d);
    if (sq > 0) out.push_back(a.p + (-B + sq) / (2 * A) * a.d);
    return out;
  }
  cd dc = b.c - a.c;
  double D = std::abs(dc);
  if (D <= 1e-14 * (a.r + b.r)) return out;
  double x = (D * D + a.r * a.r - b.r * b.r) / (2 * D);
  double h2 = a.r * a.r - x * x;
  if (h2 < 0) return out;
  double h = std::sqrt(h2);
  cd u = dc / D;
  out.push_back(a.c + x * u + h * I * u);
  if (h > 0) out.push_back(a.c + x * u - h * I * u);
  return out;
}

std::vector<double> params_of(const Segment& s, cd X) {
  std::vector<double> ts;
  std::visit(overloaded{
                 [&](const LineSeg& l) {
                   cd d = l.b - l.a;
                   ts.push_back((std::conj(d) * (X - l.a)).real() / std::norm(d));
                 },
                 [&](const ArcSeg& a) {
                   double phi = std::arg(X - a.center);
                   double lo = std::min(a.theta0, a.theta1), hi = std::max(a.theta0, a.theta1);
                   double k0 = std::floor((lo - phi) / (2 * kPi)) - 1;
                   for (double k = k0; phi + 2 * kPi * k <= hi + 1e-12; k += 1) {
                     double th = phi + 2 * kPi * k;
                     if (th >= lo - 1e-12) ts.push_back((th - a.theta0) / (a.theta1 - a.theta0));
                   }
                 },
                 [&](const MobiusSeg& m) {
                   double tau = ((m.D * X - m.B) / (m.A - m.C * X)).real();
                   ts.push_back((tau - m.tau0) / (m.tau1 - m.tau0));
                 },
             },
             s);
  std::vector<double> ok;
  for (double t : ts) {
    if (t < -1e-10 || t > 1 + 1e-10) continue;
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(segment_x(s, t) - X) <= 1e-7 * scale_of(X)) ok.push_back(t);
  }
  return ok;
}

}  // namespace

std::vector<Crossing> crossings(const LiftedPath& a, const LiftedPath& b) {
  std::vector<Crossing> out;
  const HyperellipticCurve& curve = a.curve();
  for (int i = 0; i < a.segment_count(); ++i) {
    GenCircle ga = support(a.segment(i));
    for (int j = 0; j < b.segment_count(); ++j) {
      GenCircle gb = support(b.segment(j));
      bool coincident = false;
      if (ga.is_line && gb.is_line) {
        coincident = std::abs(cross(ga.d, gb.d)) <= 1e-12 * std::abs(ga.d) * std::abs(gb.d) &&
                     std::abs(cross(ga.d, gb.p - ga.p)) <= 1e-12 * std::abs(ga.d) * scale_of(gb.p);
      } else if (!ga.is_line && !gb.is_line) {
        coincident = std::abs(ga.c - gb.c) <= 1e-12 * scale_of(ga.c) && std::abs(ga.r - gb.r) <= 1e-12 * ga.r;
      }
      if (coincident) throw Error(ErrorCode::NonTransverse, "paths overlap along a segment");
      for (cd X : meet(ga, gb)) {
        for (double ta : params_of(a.segment(i), X)) {
          for (double tb : params_of(b.segment(j), X)) {
            if (curve.distance_to_branch(X) <= curve.tolerances().clearance)
              throw Error(ErrorCode::NonTransverse, "crossing at a branch point");
            cd da = a.dx(i, ta), db = b.dx(j, tb);
            double c = cross(da, db);
            if (std::abs(c) <= 1e-9 * std::abs(da) * std::abs(db))
              throw Error(ErrorCode::NonTransverse, "tangential crossing");
            cd ya = a.y(i, ta), yb = b.y(j, tb);
            Crossing cr{i, ta, j, tb, X, c > 0 ? 1 : -1, std::abs(ya - yb) < std::abs(ya + yb)};
            bool dup = false;
            for (const Crossing& o : out) {
              if (std::abs(o.x - X) > 1e-8 * scale_of(X)) continue;
              cd oya = a.y(o.seg_a, o.t_a), oyb = b.y(o.seg_b, o.t_b);
              if (std::abs(oya - ya) <= 1e-6 * (1 + std::abs(ya)) &&
                  std::abs(oyb - yb) <= 1e-6 * (1 + std::abs(yb)) && o.sign == cr.sign)
                dup = true;
            }
            if (!dup) out.push_back(cr);
          }
        }
      }
    }
  }
  return out;
}

int intersection(const LiftedPath& a, const LiftedPath& b) {
  if (!a.closed() || !b.closed())
    throw Error(ErrorCode::InvalidArgument, "intersection needs closed lifted paths");
  int n = 0;
  for (const Crossing& c : crossings(a, b))
    if (c.same_sheet) n += c.sign;
  return n;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

struct SortedBranch {
  std::vector<double> e;  // finite roots, real parts, ascending
};

SortedBranch real_branch_points(const HyperellipticCurve& curve) {
  SortedBranch sb;
  double scale = 1;
  for (cd r : curve.roots()) scale = std::max(scale, std::abs(r));
  for (cd r : curve.roots()) {
    if (std::abs(r.imag()) > 1e-9 * scale)
      throw Error(ErrorCode::CannotAvoidMarkedPoints,
                  "loop construction needs real branch points");
    sb.e.push_back(r.real());
  }
  return sb;
}

// Circle crossing the real axis just outside e[i] on the left and e[j] on the right.
ArcSeg enclosing_circle(const std::vector<double>& e, int i, int j, double left_frac, double right_frac,
                        double theta0) {
  int n = static_cast<int>(e.size());
  double gap_left = i > 0 ? e[i] - e[i - 1] : e[i + 1] - e[i];
  double gap_right = j + 1 < n ? e[j + 1] - e[j] : e[j] - e[j - 1];
  double left = e[i] - left_frac * gap_left;
  double right = e[j] + right_frac * gap_right;
  return ArcSeg{cd(0.5 * (left + right), 0), 0.5 * (right - left), theta0, theta0 + 2 * kPi};
}

}  // namespace

LoopSystem symplectic_basis(const HyperellipticCurve& curve) {
  const int g = curve.genus();
  SortedBranch sb = real_branch_points(curve);
  const std::vector<double>& e = sb.e;
  const cd p = curve.p();

  std::vector<ArcSeg> circles;
  for (int k = 1; k <= g; ++k) circles.push_back(enclosing_circle(e, 2 * k - 2, 2 * k - 1, 0.35, 0.35, kPi / 2));
  for (int k = 1; k <= g; ++k) {
    double right = 0.3 + 0.1 * double(g - k) / g;
    circles.push_back(enclosing_circle(e, 2 * k - 1, 2 * g, 0.35, right, kPi / 2));
  }

  LoopSystem sys;
  for (int l = 0; l < 2 * g; ++l) {
    const ArcSeg& c = circles[l];
    for (int q : {curve.q1_index(), curve.q2_index()}) {
      double d = std::abs(std::abs(curve.roots()[q] - c.center) - c.radius);
      if (d <= curve.tolerances().clearance)
        throw Error(ErrorCode::CannotAvoidMarkedPoints, "loop passes too close to q1 or q2");
    }
    cd top = c.center + c.radius * I;
    XPath path{{LineSeg{p, top}, c, LineSeg{top, p}}};
    LiftedPath loop(curve, path, 0.0, {1.0});
    cd y_top = loop.y(1, 0.0);
    sys.cores.push_back(LiftedPath(curve, XPath{{c}}, y_top));
    sys.loops.push_back(std::move(loop));
    sys.labels.push_back((l < g ? "A" : "B") + std::to_string(l % g + 1));
  }

  auto matrix = [&]() {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    for (int a = 0; a < 2 * g; ++a)
      for (int b = a + 1; b < 2 * g; ++b) {
        m(a, b) = intersection(sys.cores[a], sys.cores[b]);
        m(b, a) = -m(a, b);
      }
    return m;
  };
  Eigen::MatrixXi m = matrix();
  for (int k = 0; k < g; ++k) {
    if (m(k, g + k) == -1) {
      sys.loops[g + k] = sys.loops[g + k].reversed();
      sys.cores[g + k] = sys.cores[g + k].reversed();
      m.row(g + k) *= -1;
      m.col(g + k) *= -1;
    }
  }
  Eigen::MatrixXi J = Eigen::MatrixXi::Zero(2 * g, 2 * g);
  J.topRightCorner(g, g).setIdentity();
  J.bottomLeftCorner(g, g) = -Eigen::MatrixXi::Identity(g, g);
  if (m != J) throw Error(ErrorCode::CannotAvoidMarkedPoints, "constructed loops are not a symplectic basis");
  sys.intersections = m;
  return sys;
}

GammaHalves gamma_halves(const HyperellipticCurve& curve) {
  cd a = curve.q1(), b = curve.q2(), lam = curve.lambda();
  MobiusSeg m{b + lam * a, -lam * a, 1.0 + lam, -lam, 0.0, 1.0};
  XPath path{{m}};
  return {LiftedPath(curve, path, 0.0, {1.0}), LiftedPath(curve, path, 0.0, {-1.0})};
}

LiftedPath separating_loop(const HyperellipticCurve& curve, const std::vector<int>& branch_subset) {
  std::vector<int> sub = branch_subset;
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  if (sub.size() % 2 == 0) throw Error(ErrorCode::EvenSubset, "branch subset must have odd size");
  if (sub.size() == 1) throw Error(ErrorCode::DegenerateLoop, "a single branch point bounds a contractible loop");
  for (int s : sub)
    if (s < 0 || s >= curve.weierstrass_count()) throw Error(ErrorCode::BadIndex, "subset index out of range");
  if (!std::binary_search(sub.begin(), sub.end(), curve.q1_index()) ||
      std::binary_search(sub.begin(), sub.end(), curve.q2_index()))
    throw Error(ErrorCode::InvalidArgument, "subset must contain q1 and exclude q2");
  for (int s : sub)
    if (curve.is_infinite_index(s))
      throw Error(ErrorCode::SubsetNotSeparable, "subset containing infinity is not supported");
  for (std::size_t k = 1; k < sub.size(); ++k)
    if (sub[k] != sub[k - 1] + 1)
      throw Error(ErrorCode::SubsetNotSeparable, "no circle separates a non-consecutive subset");
  SortedBranch sb = real_branch_points(curve);
  ArcSeg c = enclosing_circle(sb.e, sub.front(), sub.back(), 0.6, 0.6, 0.0);

  GammaHalves gh = gamma_halves(curve);
  LiftedPath probe(curve, XPath{{c}}, std::sqrt(curve.f(segment_x(c, 0.0))));
  std::vector<Crossing> cr = crossings(gh.plus, probe);
  double theta = -kPi / 2;
  cd seed;
  if (!cr.empty()) {
    theta = std::arg(cr.front().x - c.center);
    seed = gh.plus.y(cr.front().seg_a, cr.front().t_a);
  } else {
    seed = std::sqrt(curve.f(c.center + c.radius * std::exp(I * theta)));
  }
  ArcSeg twice{c.center, c.radius, theta, theta + 4 * kPi};
  LiftedPath d(curve, XPath{{twice}}, seed);
  if (!d.closed()) throw Error(ErrorCode::SubsetNotSeparable, "lift does not close after two turns");
  return d;
}

nlohmann::json to_json(const LiftedPath& path) {
  using nlohmann::json;
  json segs = json::array();
  for (int k = 0; k < path.segment_count(); ++k) {
    json s = std::visit(overloaded{
                            [](const LineSeg&) { return json{{"type", "line"}}; },
                            [](const ArcSeg& a) {
                              return json{{"type", "arc"},
                                          {"center", to_json_complex(a.center)},
                                          {"radius", to_json_number(a.radius)},
                                          {"theta0", to_json_number(a.theta0)},
                                          {"theta1", to_json_number(a.theta1)}};
                            },
                            [](const MobiusSeg& m) {
                              return json{{"type", "mobius"},
                                          {"coefficients",
                                           json::array({to_json_complex(m.A), to_json_complex(m.B),
                                                        to_json_complex(m.C), to_json_complex(m.D)})},
                                          {"tau0", to_json_number(m.tau0)},
                                          {"tau1", to_json_number(m.tau1)}};
                            },
                        },
                        path.segment(k));
    s["start"] = to_json_complex(path.x(k, 0.0));
    s["end"] = to_json_complex(path.x(k, 1.0));
    segs.push_back(s);
  }
  return json{{"segments", segs},
              {"y_seed", to_json_complex(path.y_seed())},
              {"y_end", to_json_complex(path.end_y())},
              {"closed", path.closed()}};
}

}  // namespace hyperreg
