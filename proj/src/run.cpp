// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <sstream>
#include <thread>

#include "magspec/detreg.hpp"
#include "magspec/spectral.hpp"

namespace magspec {

namespace {

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<long> sweep_shape(const ExperimentConfig& cfg) {
  std::vector<long> shape;
  for (const auto& ax : cfg.sweeps) shape.push_back(static_cast<long>(ax.values.size()));
  return shape;
}

long sweep_total(const ExperimentConfig& cfg) {
  long n = 1;
  for (long s : sweep_shape(cfg)) n *= s;
  return n;
}

// Shift an abscissa to the best spot (within half a gap) away from the
// unperturbed spectrum so contours keep clear of determinant poles.
double snap_abscissa(double x, const RealVector& diag, double window) {
  double best_x = x, best_d = -1;
  for (int k = -16; k <= 16; ++k) {
    const double cand = x + k * window / 32.0;
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < diag.size(); ++i) d = std::min(d, std::abs(cand - diag[i]));
    if (d > best_d) {
      best_d = d;
      best_x = cand;
    }
  }
  return best_x;
}

// Greedy nearest matching between the determinant zeros and the eigensolver
// values inside the region; returns the largest matched distance (infinite if
// the counts disagree).
double multiset_mismatch(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0;
  for (const Complex& x : a) {
    double bd = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    for (size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(x - b[i]);
      if (d < bd) {
        bd = d;
        bi = i;
      }
    }
    used[bi] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (idx + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RunRecord run_point(const ExperimentConfig& base, int sweep_index) {
  RunRecord rec;
  rec.sweep_index = sweep_index;
  rec.config_hash = hash_hex(base.hash());
  rec.seed = base.run.seed;
  rec.timestamp = now_utc();

  ExperimentConfig cfg = base;
  {
    long rem = sweep_index;
    const auto shape = sweep_shape(base);
    for (size_t ax = 0; ax < shape.size(); ++ax) {
      const long v = rem % shape[ax];
      rem /= shape[ax];
      cfg.set_path(base.sweeps[ax].path, base.sweeps[ax].values[static_cast<size_t>(v)]);
      rec.sweep[base.sweeps[ax].path] = base.sweeps[ax].values[static_cast<size_t>(v)];
    }
  }
  rec.family = family_name(cfg.model.family);
  rec.b = cfg.model.b;
  rec.d = cfg.model.d;

  try {
    const AssembledOperator op = assemble(cfg.model, cfg.trunc, cfg.pot, cfg.run.quad_order);
    rec.dim = static_cast<int>(op.dim());
    rec.v_sup = op.v_sup_norm;

    const ComplexSpectrum spec = eigenvalues(op.h);
    double reach = cfg.model.level(cfg.trunc.n_levels);
    for (const auto& it : spec.items) reach = std::max(reach, std::abs(it.value));
    const LevelGeometry geom = LevelGeometry::make(cfg.model, reach + 1.0);
    for (const auto& it : spec.items)
      rec.spectrum.push_back({it.value.real(), it.value.imag(), static_cast<double>(it.multiplicity)});

    rec.box_ok = numerical_range_box_check(spec, op.v_sup_norm, cfg.model.family);

    for (LTVariant v : cfg.effective_variants()) {
      const LTConfig lc = cfg.lt_config(v);
      const double k = k_constant(cfg.pot, lc);
      const LTSumReport sum = lt_sum(spec, geom, lc, k);
      LTRecord lr;
      lr.variant = lt_variant_name(v);
      lr.p = lc.p;
      lr.eps = lc.eps;
      lr.gamma = lc.effective_gamma();
      lr.tau = lc.tau;
      lr.sum = sum.sum;
      lr.k = sum.k;
      lr.ratio = sum.ratio;
      lr.terms = sum.term_table;
      rec.lt.push_back(std::move(lr));
    }

    const double gap = cfg.model.level_gap();
    const double delta = cfg.run.delta > 0 ? cfg.run.delta : gap / 8.0;
    const double fam_factor = cfg.model.family == Family::Schrodinger2d ? 1.0 : 2.0;

    if (cfg.run.detect_zeros && op.v_sup_norm > 0) {
      const int j_hi = std::min(cfg.run.zero_levels, cfg.trunc.n_levels - 1);
      double x_lo = cfg.model.level(0) - (0.5 * gap - delta);
      double x_hi = cfg.model.level(j_hi) + (0.5 * gap - delta);
      x_lo = snap_abscissa(x_lo, op.h0_diag, delta);
      x_hi = snap_abscissa(x_hi, op.h0_diag, delta);
      const double y_max = fam_factor * op.v_sup_norm + std::max(0.3, 0.35 * fam_factor * op.v_sup_norm);
      const double y_min = cfg.run.region_y_min
                               ? *cfg.run.region_y_min
                               : (cfg.model.family == Family::Pauli3d ? 0.04 : -y_max);
      const RectRegion region{Complex(x_lo, y_min), Complex(x_hi, y_max)};
      const DetFunction f(op, cfg.lt_p);
      const ZeroSet zs = locate_zeros(f, region, cfg.run.zero_tol);

      std::vector<Complex> det_vals;
      for (const auto& z : zs.zeros)
        for (int m = 0; m < z.multiplicity; ++m) det_vals.push_back(z.location);
      std::vector<Complex> eig_vals;
      for (const auto& it : spec.items)
        if (it.value.real() >= x_lo && it.value.real() <= x_hi && it.value.imag() >= y_min &&
            it.value.imag() <= y_max)
          for (int m = 0; m < it.multiplicity; ++m) eig_vals.push_back(it.value);

      ZeroRecord zr;
      zr.zero_count = zs.total_multiplicity();
      zr.eig_in_region = static_cast<int>(eig_vals.size());
      zr.max_mismatch = multiset_mismatch(det_vals, eig_vals);
      zr.residual = zs.residual;
      zr.region_x0 = x_lo;
      zr.region_y0 = y_min;
      zr.region_x1 = x_hi;
      zr.region_y1 = y_max;
      rec.zeros = zr;
    }

    if (op.v_sup_norm > 0) {
      const double half_gap = 0.5 * gap;
      const int j_hi = std::min(cfg.run.zero_levels, cfg.trunc.n_levels - 1);
      for (int j = 0; j <= j_hi && delta < half_gap; ++j) {
        const RectangleDomain rd = RectangleDomain::around_level(geom, j, delta, op.v_sup_norm);
        rec.rects.push_back({rd.x_left, rd.x_right, rd.height, rd.contained_level});
      }
    }

    if (cfg.run.hansmann) {
      const double mu0 = default_mu0(op);
      const HansmannReport hr = hansmann_check(op, mu0, cfg.lt_p);
      rec.hansmann = std::array<double, 4>{hr.mu0, hr.lhs_sum, hr.rhs_norm_p, hr.ratio};
    }

    if (cfg.run.profile) {
      std::vector<Complex> path;
      std::vector<double> etas;
      for (int k = 1; k <= 6; ++k) {
        const double eta = std::pow(2.0, -k);
        etas.push_back(eta);
        path.push_back(Complex(cfg.model.level(1), eta));
      }
      const auto prof = resolvent_bound_profile(op, cfg.lt_p, path, Weight::identity(),
                                                Weight::identity(), cfg.run.quad_order);
      std::vector<double> lhs;
      for (const auto& pt : prof.points) lhs.push_back(pt.lhs);
      rec.resolvent = std::array<double, 2>{prof.sup_ratio, fit_loglog_slope(etas, lhs)};
    }

    if (cfg.run.distortion) {
      const double radius = cfg.run.distortion_radius > 0
                                ? cfg.run.distortion_radius
                                : cfg.model.level(cfg.trunc.n_levels) + 3.0 * gap;
      const LevelGeometry dg = LevelGeometry::make(cfg.model, radius);
      SamplerSpec sampler;
      sampler.count = cfg.run.distortion_samples;
      sampler.radius = radius;
      sampler.seed = mix_seed(cfg.run.seed, static_cast<std::uint64_t>(sweep_index));
      const DistortionProfile dp = distortion_profile(default_mu0(op), dg, sampler);
      rec.distortion = std::array<double, 6>{dp.empirical_inf,
                                             dp.argmin.real(),
                                             dp.argmin.imag(),
                                             dp.halfline_inf,
                                             dp.ball_region_inf,
                                             static_cast<double>(dp.sandwich_violations)};
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& cfg) {
  const long total = sweep_total(cfg);
  std::vector<RunRecord> records(static_cast<size_t>(total));

  int workers = 0;
  if (const char* env = std::getenv("MAGSPEC_WORKERS")) workers = std::atoi(env);
  if (workers <= 0)
    workers = static_cast<int>(std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));

  std::atomic<long> next{0};
  auto worker = [&]() {
    while (true) {
      const long i = next.fetch_add(1);
      if (i >= total) break;
      records[static_cast<size_t>(i)] = run_point(cfg, static_cast<int>(i));
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return records;
}

RunOutput run(const ExperimentConfig& cfg) {
  RunOutput out;
  out.records = run_sweep(cfg);
  out.jsonl_path = cfg.out_stem + ".jsonl";
  out.csv_path = cfg.out_stem + ".csv";
  write_records(out.records, out.jsonl_path);
  write_csv(out.records, out.csv_path);
  return out;
}

std::vector<std::string> check_records(const std::vector<RunRecord>& records) {
  std::vector<std::string> failures;
  for (const auto& r : records) {
    const std::string tag = "record " + std::to_string(r.sweep_index) + ": ";
    try {
      const RunRecord rt = RunRecord::from_jsonl(r.to_jsonl());
      if (!rt.same_results(r)) failures.push_back(tag + "round trip changed the record");
    } catch (const std::exception& e) {
      failures.push_back(tag + "round trip failed: " + e.what());
      continue;
    }
    if (!r.error.empty()) continue;  // errored points carry no further invariants

    ComplexSpectrum spec;
    double reach = 1.0;
    for (const auto& s : r.spectrum) {
      spec.items.push_back({Complex(s[0], s[1]), static_cast<int>(s[2])});
      reach = std::max(reach, std::abs(Complex(s[0], s[1])));
    }
    MagneticModel model{family_from_name(r.family), r.b, r.d};
    if (r.box_ok) {
      const bool expect = numerical_range_box_check(spec, r.v_sup, model.family);
      if (expect != *r.box_ok) failures.push_back(tag + "numerical-range box flag inconsistent");
    }
    const LevelGeometry geom = LevelGeometry::make(model, reach + 1.0);
    for (const auto& l : r.lt) {
      LTConfig lc;
      lc.variant = lt_variant_from_name(l.variant);
      lc.p = l.p;
      lc.eps = l.eps;
      lc.gamma = l.gamma;
      lc.tau = l.tau;
      lc.family = model.family;
      lc.d = model.d;
      lc.tail_base = model.family == Family::Pauli3d ? LTVariant::Pauli3d
                     : model.family == Family::Schrodinger2d ? LTVariant::Schrodinger
                                                             : LTVariant::Pauli2d;
      const LTSumReport again = lt_sum(spec, geom, lc, l.k);
      const double tol = 1e-12 * std::max(1.0, std::abs(l.sum));
      if (std::abs(again.sum - l.sum) > tol)
        failures.push_back(tag + "sum for " + l.variant + " does not recompute");
      double terms = 0;
      for (double t : l.terms) terms += t;
      if (std::abs(terms - l.sum) > 1e-9 * std::max(1.0, std::abs(l.sum)))
        failures.push_back(tag + "term table does not add up for " + l.variant);
    }
    if (r.zeros && std::isfinite(r.zeros->max_mismatch)) {
      if (r.zeros->zero_count != r.zeros->eig_in_region)
        failures.push_back(tag + "zero count disagrees with the eigensolver");
    }
  }
  return failures;
}

std::string sweep_report(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  std::vector<std::string> variants;
  for (const auto& r : records)
    for (const auto& l : r.lt)
      if (std::find(variants.begin(), variants.end(), l.variant) == variants.end())
        variants.push_back(l.variant);

  os << "idx";
  for (const auto& [k, v] : records.empty() ? std::map<std::string, double>{} : records.front().sweep)
    os << "\t" << k;
  for (const auto& v : variants) os << "\tratio:" << v;
  os << "\thansmann\tdistortion_inf\terror\n";
  for (const auto& r : records) {
    os << r.sweep_index;
    for (const auto& [k, v] : r.sweep) os << "\t" << v;
    for (const auto& v : variants) {
      bool found = false;
      for (const auto& l : r.lt)
        if (l.variant == v) {
          os << "\t" << l.ratio;
          found = true;
          break;
        }
      if (!found) os << "\t";
    }
    os << "\t" << (r.hansmann ? std::to_string((*r.hansmann)[3]) : "");
    os << "\t" << (r.distortion ? std::to_string((*r.distortion)[0]) : "");
    os << "\t" << r.error << "\n";
  }
  for (const auto& v : variants) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& r : records)
      for (const auto& l : r.lt)
        if (l.variant == v && std::isfinite(l.ratio) && l.ratio > 0) {
          lo = std::min(lo, l.ratio);
          hi = std::max(hi, l.ratio);
        }
    if (hi > 0)
      os << "# " << v << ": ratio range [" << lo << ", " << hi << "], spread " << hi / lo << "x\n";
  }
  return os.str();
}

}  // namespace magspec
