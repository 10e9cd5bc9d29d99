#include "qmix/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace qmix {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTangentTol = 1e-9;
constexpr double kZeroLength = 1e-14;

// Bars in driver-local order: r[0] is driven by theta, (r[1], r[2]) close
// the triangle with w = 1 - q1.
struct Local {
  std::array<double, 3> r;
  std::array<int, 3> slot;  // local index -> slot
};

Local localize(const std::array<double, 3>& lengths, int driver) {
  Local l;
  for (int k = 0; k < 3; ++k) {
    l.slot[static_cast<std::size_t>(k)] = (driver + k) % 3;
    l.r[static_cast<std::size_t>(k)] = lengths[static_cast<std::size_t>((driver + k) % 3)];
  }
  return l;
}

LinkageConfig to_slots(const Local& l, cplx q1, cplx q2, cplx q3) {
  LinkageConfig c;
  c.q[static_cast<std::size_t>(l.slot[0])] = q1;
  c.q[static_cast<std::size_t>(l.slot[1])] = q2;
  c.q[static_cast<std::size_t>(l.slot[2])] = q3;
  return c;
}

// Triangle closure with the height clamped to be real; `side` picks the branch.
LinkageConfig closed_config(const Local& l, double theta, int side) {
  const cplx q1 = std::polar(l.r[0], theta);
  const cplx w = 1.0 - q1;
  const double len = std::abs(w);
  if (len < kZeroLength) return to_slots(l, q1, 0.0, 0.0);
  const double x = (len * len + l.r[1] * l.r[1] - l.r[2] * l.r[2]) / (2.0 * len);
  const double h = std::sqrt(std::max(0.0, l.r[1] * l.r[1] - x * x));
  const cplx q2 = cplx(x, side * h) * (w / len);
  return to_slots(l, q1, q2, w - q2);
}

std::vector<LinkageConfig> solve_local(const Local& l, double theta) {
  const cplx q1 = std::polar(l.r[0], theta);
  const double len = std::abs(1.0 - q1);
  const double outer = l.r[1] + l.r[2];
  const double inner = std::abs(l.r[1] - l.r[2]);
  if (len > outer + kTangentTol || len < inner - kTangentTol) return {};
  if (len < kZeroLength) {
    if (outer > kTangentTol) return {};  // q2 on a whole circle only when r2 = r3 > 0, impossible here
    return {to_slots(l, q1, 0.0, 0.0)};
  }
  if (std::abs(len - outer) <= kTangentTol || std::abs(len - inner) <= kTangentTol)
    return {closed_config(l, theta, +1)};
  return {closed_config(l, theta, +1), closed_config(l, theta, -1)};
}

int longest(const std::array<double, 3>& r) {
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

double max_angle_step(const LinkageConfig& a, const LinkageConfig& b, const std::array<double, 3>& r) {
  double m = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (r[k] < kZeroLength) continue;
    m = std::max(m, std::abs(wrap_angle(std::arg(b.q[k]) - std::arg(a.q[k]))));
  }
  return m;
}

// One closed loop u in [0, period) -> configuration.
struct LoopParam {
  std::function<LinkageConfig(double)> eval;
  double period = 1.0;
};

Orbit trace_loop(const LoopParam& lp, const std::array<double, 3>& r, int steps) {
  const double thr = 0.5 * 2.0 * kPi * 3.0 / steps;
  std::vector<double> us;
  std::function<void(double, const LinkageConfig&, double, const LinkageConfig&, int)> refine =
      [&](double ua, const LinkageConfig& ca, double ub, const LinkageConfig& cb, int depth) {
        if (depth >= 48 || max_angle_step(ca, cb, r) < thr) return;
        const double um = 0.5 * (ua + ub);
        const LinkageConfig cm = lp.eval(um);
        refine(ua, ca, um, cm, depth + 1);
        us.push_back(um);
        refine(um, cm, ub, cb, depth + 1);
      };
  for (int k = 0; k < steps; ++k) {
    const double ua = lp.period * k / steps;
    const double ub = lp.period * (k + 1) / steps;
    us.push_back(ua);
    refine(ua, lp.eval(ua), ub, lp.eval(ub), 0);
  }

  // Exact nested configurations: roots of Re(q_i conj q_j).
  const bool all_bars = r[0] > kZeroLength && r[1] > kZeroLength && r[2] > kZeroLength;
  std::vector<double> roots;
  if (all_bars) {
    auto f = [&](double u, std::size_t i) {
      const LinkageConfig c = lp.eval(u);
      return (c.q[i] * std::conj(c.q[(i + 1) % 3])).real();
    };
    for (std::size_t n = 0; n < us.size(); ++n) {
      const double ua = us[n];
      const double ub = n + 1 < us.size() ? us[n + 1] : lp.period;
      for (std::size_t i = 0; i < 3; ++i) {
        double lo = ua, hi = ub;
        double flo = f(lo, i);
        const double fhi = f(hi, i);
        if (!(flo * fhi < 0.0)) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid, i);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = std::abs(f(lo, i)) <= std::abs(f(hi, i)) ? lo : hi;
        if (root > ua && root < ub) roots.push_back(root);
      }
    }
  }
  us.insert(us.end(), roots.begin(), roots.end());
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());

  Orbit orbit;
  orbit.configs.reserve(us.size());
  for (double u : us) orbit.configs.push_back(lp.eval(u));
  return orbit;
}

}  // namespace

// --- spec ---------------------------------------------------------------------

LinkageSpec::LinkageSpec(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
  if (!(a >= 0.0) || !(a <= b) || !(b <= c) || !(c <= 1.0 + 1e-12))
    throw InvalidArgument("LinkageSpec: need 0 <= a <= b <= c <= 1");
  if (std::abs(a * a + b * b + c * c - 1.0) > 1e-10) throw InvalidArgument("LinkageSpec: a^2 + b^2 + c^2 must be 1");
}

LinkageSpec LinkageSpec::from_weights(const std::array<double, 3>& p) {
  std::array<double, 3> r = slot_lengths(p);
  std::sort(r.begin(), r.end());
  return LinkageSpec(r[0], r[1], r[2]);
}

std::array<double, 3> LinkageSpec::assign(std::array<int, 3> slot_of) const {
  std::array<int, 3> sorted = slot_of;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2}) throw InvalidArgument("LinkageSpec::assign: not a permutation");
  const std::array<double, 3> len = {a, b, c};
  return {len[static_cast<std::size_t>(slot_of[0])], len[static_cast<std::size_t>(slot_of[1])],
          len[static_cast<std::size_t>(slot_of[2])]};
}

std::array<double, 3> slot_lengths(const std::array<double, 3>& p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidArgument("weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw InvalidArgument("weights must sum to 1");
  return {std::sqrt(p[0] / sum), std::sqrt(p[1] / sum), std::sqrt(p[2] / sum)};
}

// --- configs ------------------------------------------------------------------

double LinkageConfig::closure_error() const { return std::abs(q[0] + q[1] + q[2] - cplx(1.0)); }

std::array<double, 3> LinkageConfig::deltas() const {
  std::array<double, 3> d{};
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx a = q[k], b = q[(k + 1) % 3];
    d[k] = (std::abs(a) < kZeroLength || std::abs(b) < kZeroLength) ? 0.0 : wrap_angle(std::arg(a) - std::arg(b));
  }
  return d;
}

bool LinkageConfig::is_nested(double tol) const {
  for (std::size_t k = 0; k < 3; ++k)
    if (std::abs(q[k]) < kZeroLength) return false;
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx a = q[k], b = q[(k + 1) % 3];
    if (std::abs((a * std::conj(b)).real() / (std::abs(a) * std::abs(b))) < tol) return true;
  }
  return false;
}

bool grashof(double a, double b, double c, double d) {
  if (!(a >= 0.0 && a <= b && b <= c && c <= d)) throw InvalidArgument("grashof: lengths must be sorted ascending");
  return a + d < b + c;
}

double b0(double c) { return (1.0 - c + std::sqrt(std::max(0.0, 1.0 + (2.0 - 3.0 * c) * c))) / 2.0; }

int orbit_count(const LinkageSpec& spec) { return spec.b > b0(spec.c) ? 2 : 1; }

std::vector<LinkageConfig> solve_configs(const std::array<double, 3>& lengths, double theta) {
  for (double r : lengths)
    if (!(r >= 0.0)) throw InvalidArgument("solve_configs: lengths must be non-negative");
  return solve_local(localize(lengths, 0), theta);
}

// --- tracing ------------------------------------------------------------------

std::vector<Orbit> orbit_trace(const std::array<double, 3>& lengths, int steps) {
  if (steps < 12) throw InvalidArgument("orbit_trace: steps must be at least 12");
  const double norm = lengths[0] * lengths[0] + lengths[1] * lengths[1] + lengths[2] * lengths[2];
  if (std::abs(norm - 1.0) > 1e-10 || *std::min_element(lengths.begin(), lengths.end()) < 0.0)
    throw InvalidArgument("orbit_trace: squared lengths must form a probability distribution");

  // Drive the longest bar; it is never zero.
  const Local l = localize(lengths, longest(lengths));
  const double r1 = l.r[0];
  const double cmin = (1.0 + r1 * r1 - (l.r[1] + l.r[2]) * (l.r[1] + l.r[2])) / (2.0 * r1);
  const double cmax = (1.0 + r1 * r1 - (l.r[1] - l.r[2]) * (l.r[1] - l.r[2])) / (2.0 * r1);

  std::vector<Orbit> out;
  if (l.r[2] < kZeroLength || l.r[1] < kZeroLength) {
    // Finite configuration set: cos theta is pinned.
    const double t = std::acos(std::clamp(cmin, -1.0, 1.0));
    out.push_back({{closed_config(l, t, +1)}});
    if (t > 1e-12 && t < kPi - 1e-12) out.push_back({{closed_config(l, -t, +1)}});
    return out;
  }

  const bool below = cmin <= -1.0 + 1e-15;
  const bool above = cmax >= 1.0 - 1e-15;
  if (below && above) {
    const bool touches = std::abs(cmin + 1.0) <= 1e-15 || std::abs(cmax - 1.0) <= 1e-15;
    if (touches) {
      const double t0 = std::abs(cmax - 1.0) <= 1e-15 ? 0.0 : kPi;
      LoopParam lp{[&l, t0](double u) {
                     return u < 1.0 ? closed_config(l, t0 + 2.0 * kPi * u, +1)
                                    : closed_config(l, t0 + 2.0 * kPi * (u - 1.0), -1);
                   },
                   2.0};
      out.push_back(trace_loop(lp, lengths, 2 * steps));
    } else {
      for (int side : {+1, -1}) {
        LoopParam lp{[&l, side](double u) { return closed_config(l, 2.0 * kPi * u, side); }, 1.0};
        out.push_back(trace_loop(lp, lengths, steps));
      }
    }
    return out;
  }

  // Arcs theta = centre - half cos(pi u); branch + on the way out, - on the way back.
  std::vector<std::pair<double, double>> arcs;
  if (above) {
    arcs.emplace_back(0.0, std::acos(std::clamp(cmin, -1.0, 1.0)));
  } else if (below) {
    arcs.emplace_back(kPi, kPi - std::acos(std::clamp(cmax, -1.0, 1.0)));
  } else {
    const double lo = std::acos(std::clamp(cmax, -1.0, 1.0));
    const double hi = std::acos(std::clamp(cmin, -1.0, 1.0));
    arcs.emplace_back(0.5 * (lo + hi), 0.5 * (hi - lo));
    arcs.emplace_back(-0.5 * (lo + hi), 0.5 * (hi - lo));
  }
  for (const auto& [centre, half] : arcs) {
    if (half < 1e-15) {
      out.push_back({{closed_config(l, centre, +1)}});
      continue;
    }
    LoopParam lp{[&l, centre = centre, half = half](double u) {
                   const double theta = centre - half * std::cos(kPi * u);
                   return closed_config(l, theta, u <= 1.0 ? +1 : -1);
                 },
                 2.0};
    out.push_back(trace_loop(lp, lengths, steps));
  }
  return out;
}

// --- brute force ---------------------------------------------------------------

int orbit_count_bruteforce(const LinkageSpec& spec, int resolution) {
  if (resolution < 360) throw InvalidArgument("orbit_count_bruteforce: resolution must be at least 360");
  const std::array<double, 3> lengths = spec.assign();
  std::vector<std::array<double, 6>> pts;
  for (int driver = 0; driver < 3; ++driver) {
    const Local l = localize(lengths, driver);
    const int n = l.r[0] < kZeroLength ? 1 : resolution;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * kPi * j / resolution;
      for (const auto& c : solve_local(l, theta))
        pts.push_back({c.q[0].real(), c.q[0].imag(), c.q[1].real(), c.q[1].imag(), c.q[2].real(), c.q[2].imag()});
    }
  }
  if (pts.empty()) return 0;

  // Along the curve some bar turns at rate >= 1/sqrt3 per unit arclength, so
  // consecutive samples of one component are within sqrt3 * dtheta; allow a
  // factor 2 for hand-overs between drivers.
  const double eps = 2.0 * std::sqrt(3.0) * (2.0 * kPi / resolution) * 1.05;
  auto cell = [eps](double v) { return static_cast<std::int64_t>(std::floor(v / eps)); };
  auto key = [](std::int64_t x, std::int64_t y, std::int64_t z) {
    return (x * 73856093) ^ (y * 19349663) ^ (z * 83492791);
  };
  std::unordered_map<std::int64_t, std::vector<int>> grid;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    grid[key(cell(p[0]), cell(p[1]), cell(p[2]))].push_back(i);
  }

  std::vector<int> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  const double eps2 = eps * eps;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    const auto cx = cell(p[0]), cy = cell(p[1]), cz = cell(p[2]);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            const auto& q = pts[static_cast<std::size_t>(j)];
            double d2 = 0.0;
            for (std::size_t k = 0; k < 6; ++k) d2 += (p[k] - q[k]) * (p[k] - q[k]);
            if (d2 <= eps2) parent[static_cast<std::size_t>(find(i))] = find(j);
          }
        }
  }
  int comps = 0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    if (find(i) == i) ++comps;
  return comps;
}

// --- output ---------------------------------------------------------------------

void write_orbit_csv(std::ostream& os, const std::vector<Orbit>& orbits) {
  os << "step,orbit,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3,delta12,delta23,delta31\n";
  const auto old = os.precision(17);
  for (std::size_t o = 0; o < orbits.size(); ++o) {
    const auto& cfgs = orbits[o].configs;
    for (std::size_t s = 0; s < cfgs.size(); ++s) {
      const auto& q = cfgs[s].q;
      const auto d = cfgs[s].deltas();
      os << s << ',' << o;
      for (const auto& v : q) os << ',' << v.real() << ',' << v.imag();
      for (double v : d) os << ',' << v;
      os << '\n';
    }
  }
  os.precision(old);
}

}  // namespace qmix
