// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/detreg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "magspec/spectral.hpp"

namespace magspec {

namespace {

Complex correction_exponent(Complex mu, int p_ceil) {
  Complex s = 0;
  Complex pw = 1;
  for (int k = 1; k <= p_ceil - 1; ++k) {
    pw *= -mu;
    s += pw / static_cast<double>(k);
  }
  return s;
}

}  // namespace

Complex det_reg(const Matrix& a, int p_ceil) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det_reg: matrix must be square");
  if (p_ceil < 1) throw std::invalid_argument("det_reg: p_ceil must be >= 1");
  if (a.rows() == 0) return 1.0;
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw EigensolverError("det_reg: eigensolver failed");
  Complex prod = 1.0;
  Complex expo = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex mu = es.eigenvalues()[i];
    prod *= (1.0 + mu);
    expo += correction_exponent(mu, p_ceil);
  }
  return prod * std::exp(expo);
}

Complex log_det_reg_lu(const Matrix& a, int p_ceil) {
  if (a.rows() != a.cols()) throw std::invalid_argument("log_det_reg_lu: matrix must be square");
  if (p_ceil < 1) throw std::invalid_argument("log_det_reg_lu: p_ceil must be >= 1");
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  Matrix m = Matrix::Identity(n, n) + a;
  Eigen::PartialPivLU<Matrix> lu(m);
  Complex logdet = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex u = lu.matrixLU()(i, i);
    if (u == Complex(0, 0)) return Complex(-std::numeric_limits<double>::infinity(), 0);
    logdet += std::log(u);
  }
  // Row permutation sign only shifts the imaginary part by a multiple of pi;
  // track it so exp(log) reproduces the determinant itself.
  int swaps = 0;
  const auto& perm = lu.permutationP().indices();
  std::vector<int> p(perm.data(), perm.data() + perm.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    while (p[static_cast<size_t>(i)] != i) {
      std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(p[static_cast<size_t>(i)])]);
      ++swaps;
    }
  if (swaps % 2 == 1) logdet += Complex(0, M_PI);

  // sum_i mu_i^k = tr(A^k) turns the eigenvalue-product correction into traces.
  Complex expo = 0;
  Matrix pw;
  for (int k = 1; k <= p_ceil - 1; ++k) {
    if (k == 1) pw = a;
    else pw = Matrix(pw * a);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    expo += sign * pw.trace() / static_cast<double>(k);
  }
  return logdet + expo;
}

// ---------------------------------------------------------------------------
// DetFunction
// ---------------------------------------------------------------------------

DetFunction::DetFunction(const AssembledOperator& op, double p)
    : op_(&op), cache_(std::make_shared<Cache>()) {
  if (!(p >= 1)) throw std::invalid_argument("DetFunction: p must be >= 1");
  p_ceil_ = static_cast<int>(std::ceil(p - 1e-12));
  // Levels (and box modes) repeat exactly in the diagonal; collect them with
  // multiplicities for the pole-compensated branch.
  std::map<double, int> poles;
  for (Eigen::Index i = 0; i < op.dim(); ++i) poles[op.h0_diag[i]] += 1;
  poles_.assign(poles.begin(), poles.end());
}

DetFunction::DetFunction(std::function<Complex(Complex)> f)
    : synthetic_(std::move(f)), cache_(std::make_shared<Cache>()) {}

Complex DetFunction::compute_log(Complex lambda) const {
  if (synthetic_) {
    const Complex v = synthetic_(lambda);
    return std::log(v);
  }
  const Eigen::Index n = op_->dim();
  double dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) dist = std::min(dist, std::abs(lambda - op_->h0_diag[i]));
  if (dist <= 1e-12)
    throw ResolventSingular("DetFunction: lambda within 1e-12 of sigma(H0)", dist);
  Vector rd(n);
  for (Eigen::Index i = 0; i < n; ++i) rd[i] = 1.0 / (op_->h0_diag[i] - lambda);
  Matrix t = op_->v * rd.asDiagonal();
  return log_det_reg_lu(t, p_ceil_);
}

Complex DetFunction::log_value(Complex lambda) const {
  const std::pair<double, double> key{lambda.real(), lambda.imag()};
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->log_values.find(key);
    if (it != cache_->log_values.end()) return it->second;
  }
  const Complex val = compute_log(lambda);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->log_values.emplace(key, val).first->second;
}

Complex DetFunction::operator()(Complex lambda) const { return std::exp(log_value(lambda)); }

Complex DetFunction::log_holomorphic(Complex lambda) const {
  Complex l = log_value(lambda);
  for (const auto& [mu, mult] : poles_) l += static_cast<double>(mult) * std::log(lambda - mu);
  return l;
}

// ---------------------------------------------------------------------------
// Contours and winding numbers
// ---------------------------------------------------------------------------

double Contour::length() const {
  double s = 0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) s += std::abs(vertices[(i + 1) % n] - vertices[i]);
  return s;
}

Contour rectangle_contour(Complex lo, Complex hi) {
  if (!(hi.real() > lo.real()) || !(hi.imag() > lo.imag()))
    throw std::invalid_argument("rectangle_contour: degenerate rectangle");
  return Contour{{lo, Complex(hi.real(), lo.imag()), hi, Complex(lo.real(), hi.imag())}};
}

Contour circle_contour(Complex center, double radius, int segments) {
  if (!(radius > 0) || segments < 8) throw std::invalid_argument("circle_contour: bad parameters");
  Contour c;
  c.vertices.reserve(static_cast<size_t>(segments));
  for (int k = 0; k < segments; ++k) {
    const double t = 2.0 * M_PI * k / segments;
    c.vertices.push_back(center + radius * Complex(std::cos(t), std::sin(t)));
  }
  return c;
}

namespace {

// f'/f by central differences of f, computed from log values so that branch
// jumps and overflow cancel: f(l +- h)/f(l) = exp(L(l +- h) - L(l)). The step
// is 1e-6 (1 + |lambda|), capped by the local scale of the contour so the
// stencil stays meaningful on tiny quadrisection cells.
Complex log_derivative(const std::function<Complex(Complex)>& log_f, Complex lambda,
                       double scale_cap = std::numeric_limits<double>::infinity()) {
  const double h = std::min(1e-6 * (1.0 + std::abs(lambda)), scale_cap);
  const Complex l0 = log_f(lambda);
  const Complex dp = log_f(lambda + h) - l0;
  const Complex dm = log_f(lambda - h) - l0;
  // a swing of hundreds in log magnitude across the stencil means the point
  // is useless for differencing (next to an essential singularity)
  if (!std::isfinite(dp.real()) || !std::isfinite(dm.real()) || std::abs(dp.real()) > 200.0 ||
      std::abs(dm.real()) > 200.0)
    throw ContourError("log-derivative stencil straddles a singularity");
  return (std::exp(dp) - std::exp(dm)) / (2.0 * h);
}

double winding_once(const std::function<Complex(Complex)>& log_f, const Contour& contour,
                    int n_quad) {
  const size_t nv = contour.vertices.size();
  const double total_len = contour.length();
  double shortest = total_len;
  for (size_t e = 0; e < nv; ++e)
    shortest = std::min(shortest, std::abs(contour.vertices[(e + 1) % nv] - contour.vertices[e]));
  const double step_cap = 0.01 * shortest;
  Complex integral = 0;
  for (size_t e = 0; e < nv; ++e) {
    const Complex a = contour.vertices[e];
    const Complex b = contour.vertices[(e + 1) % nv];
    const double len = std::abs(b - a);
    int pts = std::max(2, static_cast<int>(std::lround(n_quad * len / total_len)));
    Complex acc = 0;
    for (int i = 0; i <= pts; ++i) {
      const double t = static_cast<double>(i) / pts;
      const Complex lam = a + t * (b - a);
      const Complex g = log_derivative(log_f, lam, step_cap);
      const double w = (i == 0 || i == pts) ? 0.5 : 1.0;
      acc += w * g;
    }
    integral += acc * (b - a) / static_cast<double>(pts);
  }
  return (integral / Complex(0, 2.0 * M_PI)).real();
}

}  // namespace

int winding_number(const std::function<Complex(Complex)>& log_f, const Contour& contour,
                   int n_quad) {
  if (contour.vertices.size() < 3) throw std::invalid_argument("winding_number: contour needs >= 3 vertices");
  if (n_quad < 64) throw std::invalid_argument("winding_number: n_quad must be >= 64");
  int mult = 1;
  while (true) {
    const double w = winding_once(log_f, contour, n_quad * mult);
    const double nearest = std::lround(w);
    if (std::abs(w - nearest) < 0.05) return static_cast<int>(nearest);
    if (mult >= 16)
      throw ContourError("winding_number: non-integer winding " + std::to_string(w) +
                         " after refinement; contour too close to a zero or pole");
    mult *= 2;
  }
}

int winding_number(const DetFunction& f, const Contour& contour, int n_quad) {
  return winding_number([&f](Complex l) { return f.log_value(l); }, contour, n_quad);
}

// ---------------------------------------------------------------------------
// Zero location
// ---------------------------------------------------------------------------

int ZeroSet::total_multiplicity() const {
  int n = 0;
  for (const auto& z : zeros) n += z.multiplicity;
  return n;
}

namespace {

struct Cell {
  Complex lo, hi;
  int winding;
  int depth;
  double diam() const { return std::max(hi.real() - lo.real(), hi.imag() - lo.imag()); }
};

constexpr int kCellQuad = 96;
constexpr int kMaxDepth = 40;

// Newton on the pole-compensated branch; near an isolated zero of order m the
// step -m / (log F)' is exact to second order.
Complex polish_zero(const DetFunction& f, Complex z0, int mult, const Cell& cell, double tol) {
  const double span = cell.diam();
  Complex z = z0;
  Complex best = z0;
  double best_abs = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    Complex g;
    try {
      g = log_derivative([&f](Complex x) { return f.log_holomorphic(x); }, z, 0.05 * span);
    } catch (const NumericalError&) {
      break;
    }
    if (g == Complex(0, 0) || !std::isfinite(std::abs(g))) break;
    const Complex step = -static_cast<double>(mult) / g;
    z += step;
    // keep the iterate near its cell
    if (std::abs(z - 0.5 * (cell.lo + cell.hi)) > 1.5 * span + tol) {
      z -= step;
      break;
    }
    double fa;
    try {
      fa = std::exp(f.log_holomorphic(z).real());
    } catch (const NumericalError&) {
      break;
    }
    if (fa < best_abs) {
      best_abs = fa;
      best = z;
    }
    if (std::abs(step) < std::max(1e-3 * tol, 1e-14 * (1.0 + std::abs(z)))) break;
  }
  return best_abs < std::numeric_limits<double>::infinity() ? best : z0;
}

}  // namespace

ZeroSet locate_zeros(const DetFunction& f, const Region& region, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("locate_zeros: tol must be > 0");

  Complex lo, hi;
  const DiskRegion* disk = std::get_if<DiskRegion>(&region);
  if (const RectRegion* r = std::get_if<RectRegion>(&region)) {
    lo = r->lo;
    hi = r->hi;
  } else {
    lo = disk->center - Complex(disk->radius, disk->radius);
    hi = disk->center + Complex(disk->radius, disk->radius);
  }
  if (!(hi.real() > lo.real()) || !(hi.imag() > lo.imag()))
    throw std::invalid_argument("locate_zeros: empty region");

  // Poles of the determinant function must keep clear of the region boundary.
  if (f.op()) {
    for (Eigen::Index i = 0; i < f.op()->dim(); ++i) {
      const Complex mu(f.op()->h0_diag[i], 0);
      const double dx = std::max({lo.real() - mu.real(), mu.real() - hi.real(), 0.0});
      const double dy = std::max({lo.imag() - mu.imag(), mu.imag() - hi.imag(), 0.0});
      const double outside = std::hypot(dx, dy);
      const double inside_x = std::min(mu.real() - lo.real(), hi.real() - mu.real());
      const double inside_y = std::min(mu.imag() - lo.imag(), hi.imag() - mu.imag());
      const double to_boundary = outside > 0 ? outside : std::min(inside_x, inside_y);
      if (to_boundary < 1e-6)
        throw std::invalid_argument("locate_zeros: region boundary within 1e-6 of sigma(H0)");
    }
  }

  auto log_holo = [&f](Complex l) { return f.log_holomorphic(l); };
  const int max_mult = f.op() ? static_cast<int>(f.op()->dim()) : 1 << 20;
  auto cell_winding = [&](const Cell& c) {
    const int w = winding_number(log_holo, rectangle_contour(c.lo, c.hi), kCellQuad);
    // the compensated branch has no poles: counts are between 0 and dim
    if (w < 0 || w > max_mult)
      throw ContourError("locate_zeros: implausible zero count " + std::to_string(w));
    return w;
  };

  ZeroSet out;
  out.region = region;
  out.residual = 0;

  Cell root{lo, hi, 0, 0};
  root.winding = cell_winding(root);
  if (root.winding < 0)
    throw ContourError("locate_zeros: negative zero count; uncompensated pole in region");

  std::vector<Cell> stack{root};
  const double jitter[] = {0.5, 0.42, 0.58, 0.34, 0.66, 0.26, 0.74, 0.21, 0.79};
  while (!stack.empty()) {
    Cell cell = stack.back();
    stack.pop_back();
    if (cell.winding == 0) continue;
    if (cell.diam() <= tol) {
      const Complex center = 0.5 * (cell.lo + cell.hi);
      const Complex z = polish_zero(f, center, cell.winding, cell, tol);
      double fa = 0;
      try {
        fa = std::exp(f.log_value(z).real());
      } catch (const NumericalError&) {
        fa = std::numeric_limits<double>::quiet_NaN();
      }
      out.zeros.push_back({z, cell.winding});
      if (std::isfinite(fa)) out.residual = std::max(out.residual, fa);
      continue;
    }
    if (cell.depth >= kMaxDepth)
      throw NumericalError("locate_zeros: subdivision exceeded depth 40");

    // Candidate split lines, preferring whatever keeps the new grid lines
    // farthest from the poles on the real axis (the determinant is expensive
    // to evaluate and wildly oscillatory near them).
    auto line_clearance = [&](bool horizontal, double coord) {
      if (!f.op()) return 1.0;
      double d = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < f.op()->dim(); ++i) {
        const double px = f.op()->h0_diag[i];
        double dx, dy;
        if (horizontal) {  // segment y = coord, x in [lo, hi]
          dy = std::abs(coord);
          dx = std::max({cell.lo.real() - px, px - cell.hi.real(), 0.0});
        } else {  // segment x = coord, y in [lo, hi]
          dx = std::abs(coord - px);
          dy = std::max({cell.lo.imag(), -cell.hi.imag(), 0.0});
        }
        d = std::min(d, std::hypot(dx, dy));
      }
      return d;
    };
    // Keep the halving-like fractions in order, but skip lines that would run
    // too close to a pole; if every candidate is too close, take the best one.
    const double floor_clear =
        0.05 * std::min(cell.hi.real() - cell.lo.real(), cell.hi.imag() - cell.lo.imag());
    auto ranked = [&](bool horizontal) {
      const double a = horizontal ? cell.lo.imag() : cell.lo.real();
      const double b = horizontal ? cell.hi.imag() : cell.hi.real();
      std::vector<double> fr;
      double best_f = 0.5, best_c = -1;
      for (double f1 : jitter) {
        const double c = line_clearance(horizontal, a + f1 * (b - a));
        if (c >= floor_clear) fr.push_back(f1);
        if (c > best_c) {
          best_c = c;
          best_f = f1;
        }
      }
      if (fr.empty()) fr.push_back(best_f);
      return fr;
    };
    const std::vector<double> fx = ranked(false), fy = ranked(true);

    // try (fx, fy) pairs in diagonal order so both lines vary independently
    std::vector<std::pair<size_t, size_t>> attempts;
    for (size_t s2 = 0; s2 < fx.size() + fy.size() - 1 && attempts.size() < 24; ++s2)
      for (size_t i = 0; i <= s2 && attempts.size() < 24; ++i) {
        const size_t j = s2 - i;
        if (i < fx.size() && j < fy.size()) attempts.push_back({i, j});
      }
    bool split_done = false;
    for (size_t attempt = 0; attempt < attempts.size() && !split_done; ++attempt) {
      const double sx =
          cell.lo.real() + fx[attempts[attempt].first] * (cell.hi.real() - cell.lo.real());
      const double sy =
          cell.lo.imag() + fy[attempts[attempt].second] * (cell.hi.imag() - cell.lo.imag());
      Cell kids[4] = {
          {cell.lo, Complex(sx, sy), 0, cell.depth + 1},
          {Complex(sx, cell.lo.imag()), Complex(cell.hi.real(), sy), 0, cell.depth + 1},
          {Complex(cell.lo.real(), sy), Complex(sx, cell.hi.imag()), 0, cell.depth + 1},
          {Complex(sx, sy), cell.hi, 0, cell.depth + 1},
      };
      try {
        int sum = 0;
        for (auto& k : kids) {
          k.winding = cell_winding(k);
          sum += k.winding;
        }
        if (sum != cell.winding) continue;  // a zero sat on the split line
        for (auto& k : kids)
          if (k.winding != 0) stack.push_back(k);
        split_done = true;
      } catch (const ContourError&) {
        continue;  // jitter the split and retry
      } catch (const ResolventSingular&) {
        continue;
      }
    }
    if (!split_done) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "locate_zeros: could not split the cell [%g, %g] x [%g, %g] (winding %d) away "
                    "from zeros/poles",
                    cell.lo.real(), cell.hi.real(), cell.lo.imag(), cell.hi.imag(), cell.winding);
      throw ContourError(buf);
    }
  }

  // Zeros of the compensated branch sitting on sigma(H0) are spectrum points
  // of the unperturbed part, not discrete eigenvalues; drop them.
  int dropped_in_disk = 0;
  if (f.op()) {
    std::vector<ZeroSet::Zero> kept;
    for (const auto& z : out.zeros) {
      double dp = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < f.op()->dim(); ++i)
        dp = std::min(dp, std::abs(z.location - f.op()->h0_diag[i]));
      if (dp < std::max(2.0 * tol, 1e-8 * (1.0 + std::abs(z.location)))) {
        if (!disk || std::abs(z.location - disk->center) <= disk->radius)
          dropped_in_disk += z.multiplicity;
        continue;
      }
      kept.push_back(z);
    }
    out.zeros = std::move(kept);
  }

  if (disk) {
    std::vector<ZeroSet::Zero> kept;
    for (const auto& z : out.zeros)
      if (std::abs(z.location - disk->center) <= disk->radius) kept.push_back(z);
    out.zeros = std::move(kept);
    const int disk_w =
        winding_number(log_holo, circle_contour(disk->center, disk->radius, 128), 4 * kCellQuad);
    if (disk_w - dropped_in_disk != out.total_multiplicity())
      throw ContourError("locate_zeros: zeros straddle the disk boundary");
  }

  std::sort(out.zeros.begin(), out.zeros.end(), [](const auto& a, const auto& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

}  // namespace magspec
