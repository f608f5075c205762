// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "magspec/quadrature.hpp"

namespace magspec {

Complex phi_mobius(Complex lambda, double mu0) {
  if (lambda == Complex(mu0, 0)) throw std::invalid_argument("phi_mobius: pole at lambda = mu0");
  return 1.0 / (lambda - mu0);
}

Complex phi_mobius_inverse(Complex z, double mu0) {
  if (z == Complex(0, 0)) throw std::invalid_argument("phi_mobius_inverse: z = 0 maps to infinity");
  return mu0 + 1.0 / z;
}

double distortion_ratio(Complex lambda, double mu0, const LevelGeometry& geom) {
  const double d = geom.dist_levels(lambda);
  if (d == 0) throw std::invalid_argument("distortion_ratio: lambda lies on a level");
  const LevelImages images = LevelImages::make(geom, mu0);
  const Complex z = phi_mobius(lambda, mu0);
  const double r = 1.0 + std::abs(lambda);
  return images.dist_images(z) * r * r / d;
}

namespace {

// Deterministic compass descent of the distortion ratio from a sampled seed
// point; keeps the iterate inside the disk and off the level tubes.
std::pair<double, Complex> polish_ratio_min(const LevelGeometry& geom, const LevelImages& images,
                                            double mu0, Complex start, double radius,
                                            double tube) {
  auto ratio_at = [&](Complex lam) {
    const double d = geom.dist_levels(lam);
    if (d < tube || std::abs(lam - mu0) < tube || std::abs(lam) > radius)
      return std::numeric_limits<double>::infinity();
    const double w = (1.0 + std::abs(lam)) * (1.0 + std::abs(lam));
    return images.dist_images(1.0 / (lam - mu0)) * w / d;
  };
  Complex z = start;
  double val = ratio_at(z);
  double step = 0.05 * (1.0 + std::abs(z));
  for (int it = 0; it < 400 && step > 1e-12; ++it) {
    bool improved = false;
    for (const Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1),
                              Complex(M_SQRT1_2, M_SQRT1_2), Complex(-M_SQRT1_2, M_SQRT1_2),
                              Complex(M_SQRT1_2, -M_SQRT1_2), Complex(-M_SQRT1_2, -M_SQRT1_2)}) {
      const Complex cand = z + step * dir;
      const double v = ratio_at(cand);
      if (v < val) {
        val = v;
        z = cand;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return {val, z};
}

}  // namespace

DistortionProfile distortion_profile(double mu0, const LevelGeometry& geom,
                                     const SamplerSpec& sampler) {
  if (sampler.count < 1000) throw std::invalid_argument("distortion_profile: count must be >= 1000");
  if (!(sampler.radius > 0)) throw std::invalid_argument("distortion_profile: radius must be > 0");
  if (geom.coverage + 1e-9 < sampler.radius)
    throw std::invalid_argument("distortion_profile: geometry does not cover the sample radius");
  const LevelImages images = LevelImages::make(geom, mu0);

  std::mt19937_64 rng(sampler.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double tube = 1e-9 * std::max(1.0, sampler.radius);

  DistortionProfile prof;
  prof.empirical_inf = std::numeric_limits<double>::infinity();
  prof.halfline_inf = std::numeric_limits<double>::infinity();
  prof.ball_region_inf = std::numeric_limits<double>::infinity();
  prof.argmin = 0;
  prof.complement_samples = 0;
  prof.sandwich_violations = 0;

  // lowest sampled ratios seed the local descent afterwards
  std::vector<std::pair<double, Complex>> best;
  auto offer = [&best](double v, Complex lam) {
    best.push_back({v, lam});
    std::sort(best.begin(), best.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (best.size() > 24) best.pop_back();
  };

  long produced = 0;
  long guard = 0;
  while (produced < sampler.count && guard < 100 * sampler.count) {
    ++guard;
    const double r = sampler.radius * std::sqrt(unif(rng));
    const double th = 2.0 * M_PI * unif(rng);
    const Complex lam(r * std::cos(th), r * std::sin(th));
    const double d_lev = geom.dist_levels(lam);
    if (d_lev < tube || std::abs(lam - mu0) < tube) continue;  // degenerate; resample
    ++produced;

    const Complex z = 1.0 / (lam - mu0);
    const double weight = (1.0 + std::abs(lam)) * (1.0 + std::abs(lam));
    const double ratio = images.dist_images(z) * weight / d_lev;
    offer(ratio, lam);
    if (ratio < prof.empirical_inf) {
      prof.empirical_inf = ratio;
      prof.argmin = lam;
    }
    const double d_half = geom.dist_halfline(lam);
    if (d_half >= tube)
      prof.halfline_inf =
          std::min(prof.halfline_inf, images.dist_image_halfline(z) * weight / d_half);
    if (geom.in_ball_union(lam)) prof.ball_region_inf = std::min(prof.ball_region_inf, ratio);

    if (geom.in_complement(lam)) {
      ++prof.complement_samples;
      if (!(0.5 * d_lev <= d_half && d_half <= d_lev)) ++prof.sandwich_violations;
    }
    if (images.in_complement(z)) {
      const double zi = images.dist_images(z);
      const double zh = images.dist_image_halfline(z);
      if (!(0.5 * zi <= zh && zh <= zi)) ++prof.sandwich_violations;
    }
  }
  if (produced < sampler.count)
    throw NumericalError("distortion_profile: sampler starved by degenerate points");

  // Descend from the best (well separated) sample points so the reported
  // infimum reflects the basin minimum rather than sampling luck.
  std::vector<Complex> seeds;
  for (const auto& [v, lam] : best) {
    bool fresh = true;
    for (const Complex& s : seeds)
      if (std::abs(s - lam) < 0.02 * sampler.radius) fresh = false;
    if (fresh) seeds.push_back(lam);
    if (seeds.size() >= 8) break;
  }
  for (const Complex& s : seeds) {
    const auto [v, lam] = polish_ratio_min(geom, images, mu0, s, sampler.radius, tube);
    if (v < prof.empirical_inf) {
      prof.empirical_inf = v;
      prof.argmin = lam;
    }
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Rectangle domain
// ---------------------------------------------------------------------------

void RectangleDomain::validate() const {
  if (!(x_right > x_left)) throw std::invalid_argument("RectangleDomain: x_right must exceed x_left");
  if (height == 0) throw std::invalid_argument("RectangleDomain: height must be nonzero");
}

bool RectangleDomain::contains(Complex lambda, double pad) const {
  const double ylo = std::min(0.0, height), yhi = std::max(0.0, height);
  return lambda.real() >= x_left - pad && lambda.real() <= x_right + pad &&
         lambda.imag() >= ylo - pad && lambda.imag() <= yhi + pad;
}

RectangleDomain RectangleDomain::around_level(const LevelGeometry& geom, int j, double delta,
                                              double v_sup, bool upper_half) {
  if (j < 0 || static_cast<size_t>(j) >= geom.levels.size())
    throw std::invalid_argument("RectangleDomain: level index out of range");
  const double half_gap = 0.5 * geom.gap;
  if (!(delta > 0) || !(delta < half_gap))
    throw std::invalid_argument("RectangleDomain: need 0 < delta < half the level gap");
  if (!(v_sup > 0)) throw std::invalid_argument("RectangleDomain: v_sup must be > 0");
  RectangleDomain r;
  r.contained_level = geom.levels[static_cast<size_t>(j)];
  r.delta = delta;
  r.x_left = r.contained_level - (half_gap - delta);
  r.x_right = r.contained_level + (half_gap - delta);
  r.height = (upper_half ? 1.0 : -1.0) * 2.0 * v_sup;
  return r;
}

// ---------------------------------------------------------------------------
// Centered Schwarz-Christoffel machinery
// ---------------------------------------------------------------------------

namespace {

// Derivative kernel in the outward-cut normalization prod (1 - z/z_k)^{-1/2};
// each principal-branch cut leaves the closed disk, so any path inside it is
// safe.
struct CenteredKernel {
  std::array<Complex, 4> prevs;

  explicit CenteredKernel(double alpha) {
    prevs = {std::polar(1.0, alpha), std::polar(1.0, M_PI - alpha),
             std::polar(1.0, M_PI + alpha), std::polar(1.0, -alpha)};
  }

  Complex operator()(Complex z) const {
    Complex denom = 1.0;
    for (const Complex& p : prevs) denom *= std::sqrt(1.0 - z / p);
    return 1.0 / denom;
  }
};

// Integral of the kernel along the straight segment [0, z], adaptive
// composite Gauss-Legendre.
Complex segment_integral(const CenteredKernel& k, Complex z, double tol) {
  struct Panel {
    double t0, t1;
    int depth;
  };
  const auto& g16 = gauss_legendre(16);
  const auto& g32 = gauss_legendre(32);
  auto eval = [&](const QuadratureRule& rule, double t0, double t1) {
    const double h = 0.5 * (t1 - t0), c = 0.5 * (t1 + t0);
    Complex s = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * k((c + h * rule.nodes[i]) * z);
    return s * h;
  };
  Complex total = 0;
  std::vector<Panel> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const Complex coarse = eval(g16, p.t0, p.t1);
    const Complex fine = eval(g32, p.t0, p.t1);
    if (std::abs(fine - coarse) <= tol || p.depth >= 40) {
      total += fine;
      continue;
    }
    const double tm = 0.5 * (p.t0 + p.t1);
    stack.push_back({p.t0, tm, p.depth + 1});
    stack.push_back({tm, p.t1, p.depth + 1});
  }
  return total * z;
}

// Adaptive quadrature of a complex-valued function over [0, 1].
Complex adaptive_unit_segment(const std::function<Complex(double)>& g, double tol) {
  struct Panel {
    double t0, t1;
    int depth;
  };
  const auto& g16 = gauss_legendre(16);
  const auto& g32 = gauss_legendre(32);
  auto eval = [&](const QuadratureRule& rule, double t0, double t1) {
    const double h = 0.5 * (t1 - t0), c = 0.5 * (t1 + t0);
    Complex s = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * g(c + h * rule.nodes[i]);
    return s * h;
  };
  Complex total = 0;
  std::vector<Panel> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const Complex coarse = eval(g16, p.t0, p.t1);
    const Complex fine = eval(g32, p.t0, p.t1);
    if (std::abs(fine - coarse) <= tol || p.depth >= 40) {
      total += fine;
      continue;
    }
    const double tm = 0.5 * (p.t0 + p.t1);
    stack.push_back({p.t0, tm, p.depth + 1});
    stack.push_back({tm, p.t1, p.depth + 1});
  }
  return total;
}

// Integral along [0, z_k] ending exactly at a prevertex. The substitution
// t = 1 - s^2 absorbs the endpoint inverse square root exactly (the Jacobi
// weight in disguise); the companion factors stay mildly varying even when
// the prevertices crowd together, so adaptive panels finish the job.
Complex prevertex_integral(const CenteredKernel& k, int which, int /*order*/) {
  const Complex zk = k.prevs[static_cast<size_t>(which)];
  auto g = [&](double s) {
    const double t = 1.0 - s * s;
    Complex rest = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == which) continue;
      rest *= std::sqrt(1.0 - t * zk / k.prevs[static_cast<size_t>(j)]);
    }
    return 2.0 / rest;
  };
  return zk * adaptive_unit_segment(g, 1e-13);
}

struct CenteredMap {
  CenteredKernel kernel;
  double c = 1.0;  // positive scale

  explicit CenteredMap(double alpha, double scale = 1.0) : kernel(alpha), c(scale) {}

  Complex eval(Complex z, double tol = 1e-12) const {
    for (int j = 0; j < 4; ++j)
      if (std::abs(z - kernel.prevs[static_cast<size_t>(j)]) < 1e-13)
        return c * prevertex_integral(kernel, j, 96);
    return c * segment_integral(kernel, z, tol);
  }
  Complex deriv(Complex z) const { return c * kernel(z); }

  Complex inverse(Complex w, double u, double v) const {
    // u, v: half extents of the image rectangle in the real/imaginary
    // directions of the centered frame; used for the initial guess.
    Complex z(0.6 * w.real() / std::max(u, 1e-300), 0.6 * w.imag() / std::max(v, 1e-300));
    if (std::abs(z) >= 0.95) z *= 0.9 / std::abs(z);
    const double scale = u + v;
    double resid = std::abs(eval(z) - w);
    for (int it = 0; it < 100; ++it) {
      if (resid <= 1e-12 * scale) return z;
      const Complex step = -(eval(z) - w) / deriv(z);
      double damp = 1.0;
      for (int half = 0; half < 50; ++half) {
        Complex cand = z + damp * step;
        if (std::abs(cand) >= 1.0 - 1e-14) {
          damp *= 0.5;
          continue;
        }
        const double r2 = std::abs(eval(cand) - w);
        if (r2 < resid || damp < 1e-8) {
          z = cand;
          resid = r2;
          break;
        }
        damp *= 0.5;
      }
    }
    if (resid <= 1e-9 * scale) return z;
    throw MapAccuracyError("conformal inverse: Newton stalled, residual " + std::to_string(resid));
  }
};

Complex moebius_aut(Complex z, Complex a) { return (z + a) / (1.0 + std::conj(a) * z); }
Complex moebius_aut_inv(Complex z, Complex a) { return (z - a) / (1.0 - std::conj(a) * z); }

}  // namespace

Complex ConformalRectMap::forward(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("ConformalRectMap::forward: |z| > 1");
  const CenteredMap cm(alpha, c_centered);
  return rect.center() + orientation * cm.eval(moebius_aut(z, automorphism_a));
}

Complex ConformalRectMap::derivative(Complex z) const {
  const CenteredMap cm(alpha, c_centered);
  const Complex zc = moebius_aut(z, automorphism_a);
  const Complex maut_d = (1.0 - std::norm(automorphism_a)) /
                         ((1.0 + std::conj(automorphism_a) * z) * (1.0 + std::conj(automorphism_a) * z));
  return orientation * cm.deriv(zc) * maut_d;
}

Complex ConformalRectMap::inverse(Complex lambda) const {
  const CenteredMap cm(alpha, c_centered);
  const Complex w = (lambda - rect.center()) / orientation;
  const double u = 0.5 * std::abs(rect.height), v = 0.5 * rect.width();
  const Complex zc = cm.inverse(w, u, v);
  return moebius_aut_inv(zc, automorphism_a);
}

ConformalRectMap sc_calibrate(const RectangleDomain& rect, Complex lambda0, int n_quad) {
  rect.validate();
  if (n_quad < 128) throw std::invalid_argument("sc_calibrate: n_quad must be >= 128");
  if (!rect.contains(lambda0, -1e-12 * (rect.width() + std::abs(rect.height))))
    throw std::invalid_argument("sc_calibrate: lambda0 must lie strictly inside the rectangle");
  const double u_t = 0.5 * std::abs(rect.height);
  const double v_t = 0.5 * rect.width();
  const double aspect = std::max(u_t / v_t, v_t / u_t);
  if (aspect > 20.0) throw std::invalid_argument("sc_calibrate: aspect ratio > 20 not supported");

  // The centered configuration maps 1 to the mid-point of the edge pair at
  // distance u and i to the one at distance v; the ratio u/v is monotone in
  // the prevertex angle, so bisection brackets it and Newton polishes.
  auto half_sides = [&](double alpha, double scale) {
    const CenteredMap cm(alpha, scale);
    const double u = cm.eval(Complex(1.0, 0.0)).real();
    const double v = cm.eval(Complex(0.0, 1.0)).imag();
    return std::pair<double, double>(u, v);
  };
  double a_lo = 1e-12, a_hi = M_PI_2 - 1e-12;
  auto ratio_gap = [&](double alpha) {
    const auto [u, v] = half_sides(alpha, 1.0);
    return std::log(u / v) - std::log(u_t / v_t);
  };
  double g_lo = ratio_gap(a_lo), g_hi = ratio_gap(a_hi);
  if (!(g_lo > 0 && g_hi < 0))
    throw CalibrationError("sc_calibrate: bisection bracket failed", std::max(g_lo, -g_hi));
  double alpha = 0.5 * (a_lo + a_hi);
  for (int it = 0; it < 200; ++it) {
    alpha = 0.5 * (a_lo + a_hi);
    const double g = ratio_gap(alpha);
    if (g > 0) a_lo = alpha;
    else a_hi = alpha;
    if (a_hi - a_lo < 1e-15) break;
  }
  double scale = u_t / half_sides(alpha, 1.0).first;

  // Damped Newton on (alpha, log scale) against the two half side lengths.
  double best_resid = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const auto [u, v] = half_sides(alpha, scale);
    const double r1 = u - u_t, r2 = v - v_t;
    const double resid = std::hypot(r1, r2);
    best_resid = std::min(best_resid, resid);
    if (resid < 1e-12 * (u_t + v_t)) break;
    const double da = 1e-7, ds = 1e-7;
    const auto [ua, va] = half_sides(alpha + da, scale);
    const auto [us, vs] = half_sides(alpha, scale * (1.0 + ds));
    const double j11 = (ua - u) / da, j12 = (us - u) / (scale * ds);
    const double j21 = (va - v) / da, j22 = (vs - v) / (scale * ds);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0) break;
    double step_a = -(j22 * r1 - j12 * r2) / det;
    double step_s = -(-j21 * r1 + j11 * r2) / det;
    double damp = 1.0;
    for (int half = 0; half < 40; ++half) {
      const double na = std::clamp(alpha + damp * step_a, 1e-9, M_PI_2 - 1e-9);
      const double ns = std::max(scale + damp * step_s, 1e-300);
      const auto [nu, nv] = half_sides(na, ns);
      if (std::hypot(nu - u_t, nv - v_t) < resid || damp < 1e-6) {
        alpha = na;
        scale = ns;
        break;
      }
      damp *= 0.5;
    }
  }
  {
    const auto [u, v] = half_sides(alpha, scale);
    const double resid = std::hypot(u - u_t, v - v_t);
    if (!(resid < 1e-8 * (u_t + v_t)))
      throw CalibrationError("sc_calibrate: side-length Newton did not converge", resid);
  }

  ConformalRectMap map;
  map.rect = rect;
  map.lambda0 = lambda0;
  map.n_quad = n_quad;
  map.alpha = alpha;
  map.c_centered = scale;
  map.orientation = rect.height > 0 ? Complex(0, -1) : Complex(0, 1);

  // Disk automorphism moving the conformal center onto lambda0.
  const CenteredMap cm(alpha, scale);
  const Complex w0 = (lambda0 - rect.center()) / map.orientation;
  map.automorphism_a =
      (std::abs(w0) < 1e-14 * (u_t + v_t)) ? Complex(0, 0)
                                           : cm.inverse(w0, u_t, v_t);
  map.scale = map.derivative(0);

  // Composite prevertices, matched to the rectangle vertices.
  const CenteredKernel kern(alpha);
  const std::array<Complex, 4> verts{rect.v1(), rect.v2(), rect.v3(), rect.v4()};
  std::array<bool, 4> used{};
  double worst = 0;
  for (int k = 0; k < 4; ++k) {
    const Complex pv = moebius_aut_inv(kern.prevs[static_cast<size_t>(k)], map.automorphism_a);
    const Complex img = rect.center() + map.orientation * cm.eval(kern.prevs[static_cast<size_t>(k)]);
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const double d = std::abs(img - verts[static_cast<size_t>(j)]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[static_cast<size_t>(best)] = true;
    map.prevertices[static_cast<size_t>(best)] = pv;
    worst = std::max(worst, bd);
  }
  if (!(worst < 1e-8 * (u_t + v_t + 1.0)))
    throw CalibrationError("sc_calibrate: vertex images off by " + std::to_string(worst), worst);
  return map;
}

// ---------------------------------------------------------------------------
// Comparability of distances under the map
// ---------------------------------------------------------------------------

namespace {

double dist_to_rect_boundary(Complex lam, const RectangleDomain& r) {
  const double ylo = std::min(0.0, r.height), yhi = std::max(0.0, r.height);
  const double dx = std::min(lam.real() - r.x_left, r.x_right - lam.real());
  const double dy = std::min(lam.imag() - ylo, yhi - lam.imag());
  return std::min(dx, dy);
}

double dist_to_vertices(Complex lam, const RectangleDomain& r) {
  return std::min({std::abs(lam - r.v1()), std::abs(lam - r.v2()), std::abs(lam - r.v3()),
                   std::abs(lam - r.v4())});
}

// Distance from z to the unit-circle arc from angle ta to tb (counterclockwise).
double dist_to_arc(Complex z, double ta, double tb) {
  auto wrap = [](double t) {
    while (t < 0) t += 2.0 * M_PI;
    while (t >= 2.0 * M_PI) t -= 2.0 * M_PI;
    return t;
  };
  ta = wrap(ta);
  tb = wrap(tb);
  double span = tb - ta;
  if (span < 0) span += 2.0 * M_PI;
  double tz = wrap(std::arg(z) - ta);
  if (tz <= span) return std::abs(1.0 - std::abs(z));
  return std::min(std::abs(z - std::polar(1.0, ta)), std::abs(z - std::polar(1.0, tb)));
}

}  // namespace

Comparability comparability_check(const ConformalRectMap& map, int grid_n) {
  if (grid_n < 32) throw std::invalid_argument("comparability_check: grid_n must be >= 32");
  const RectangleDomain& r = map.rect;
  const double scale = r.width() + std::abs(r.height);

  // The arc between the preimages of the two real vertices that maps onto the
  // real-axis edge: pick the candidate arc whose midpoint lands on that edge.
  const double t1 = std::arg(map.prevertices[0]);
  const double t4 = std::arg(map.prevertices[3]);
  double arc_a = t4, arc_b = t1;  // counterclockwise candidates
  {
    auto arc_mid = [&](double a, double b) {
      double span = b - a;
      while (span < 0) span += 2.0 * M_PI;
      return a + 0.5 * span;
    };
    const Complex mid_img = map.forward(std::polar(1.0 - 1e-9, arc_mid(arc_a, arc_b)));
    const double to_real_edge = std::abs(mid_img.imag());
    const Complex mid_img2 = map.forward(std::polar(1.0 - 1e-9, arc_mid(arc_b, arc_a)));
    if (std::abs(mid_img2.imag()) < to_real_edge) std::swap(arc_a, arc_b);
  }

  Comparability out{std::numeric_limits<double>::infinity(), 0.0,
                    std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < grid_n; ++i) {
    const double rad = (i + 0.5) / grid_n * (1.0 - 1e-3);
    for (int j = 0; j < grid_n; ++j) {
      const double th = 2.0 * M_PI * (j + 0.5) / grid_n;
      const Complex z = std::polar(rad, th);
      const Complex lam = map.forward(z);
      if (!r.contains(lam, 1e-8 * scale))
        throw MapAccuracyError("comparability_check: grid point mapped outside the rectangle");
      const Complex lam_in(std::clamp(lam.real(), r.x_left, r.x_right),
                           std::clamp(lam.imag(), std::min(0.0, r.height), std::max(0.0, r.height)));
      const double full = dist_to_rect_boundary(lam_in, r) * dist_to_vertices(lam_in, r) /
                          (1.0 - std::abs(z));
      const double edge = dist_point_segment(lam_in, r.v1(), r.v4()) *
                          std::min(std::abs(lam_in - r.v1()), std::abs(lam_in - r.v4())) /
                          dist_to_arc(z, arc_a, arc_b);
      out.c_min = std::min(out.c_min, full);
      out.c_max = std::max(out.c_max, full);
      out.edge_c_min = std::min(out.edge_c_min, edge);
      out.edge_c_max = std::max(out.edge_c_max, edge);
    }
  }
  return out;
}

PreparedRectMap prepare_level_map(const RectangleDomain& rect, double v_sup, int n_quad) {
  rect.validate();
  PreparedRectMap out{ConformalRectMap{}, false, 1.0};
  RectangleDomain r = rect;
  // The conformal center must keep distance 1 + 2 v_sup from both the real
  // axis and the numerical-range strip |Im| <= 2 v_sup.
  const double need_im = 1.0 + 4.0 * v_sup;
  if (0.5 * std::abs(r.height) < need_im) {
    out.height_scaled = true;
    out.scale_factor = 2.0 * need_im / std::abs(r.height);
    r.height *= out.scale_factor;
  }
  out.map = sc_calibrate(r, r.center(), n_quad);
  return out;
}

}  // namespace magspec
