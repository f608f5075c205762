// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "magspec/landau.hpp"

namespace magspec {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;       // data window
  double px = 820, py = 520;   // canvas
  double ml = 60, mr = 20, mt = 20, mb = 40;

  double sx(double x) const { return ml + (x - x0) / (x1 - x0) * (px - ml - mr); }
  double sy(double y) const { return py - mb - (y - y0) / (y1 - y0) * (py - mt - mb); }
};

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  os << "<rect x='" << fmt(f.ml) << "' y='" << fmt(f.mt) << "' width='" << fmt(f.px - f.ml - f.mr)
     << "' height='" << fmt(f.py - f.mt - f.mb)
     << "' fill='none' stroke='black' stroke-width='1'/>\n";
  for (int i = 0; i <= 8; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 8.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 8.0;
    os << "<text x='" << fmt(f.sx(x)) << "' y='" << fmt(f.py - f.mb + 16)
       << "' font-size='10' text-anchor='middle'>" << fmt(x) << "</text>\n";
    os << "<text x='" << fmt(f.ml - 6) << "' y='" << fmt(f.sy(y) + 3)
       << "' font-size='10' text-anchor='end'>" << fmt(y) << "</text>\n";
  }
  os << "<text x='" << fmt(0.5 * f.px) << "' y='" << fmt(f.py - 6)
     << "' font-size='12' text-anchor='middle'>" << xlabel << "</text>\n";
  os << "<text x='14' y='" << fmt(0.5 * f.py)
     << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 " << fmt(0.5 * f.py)
     << ")'>" << ylabel << "</text>\n";
}

const char* palette(int i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % 8];
}

std::string spectrum_svg(const std::vector<RunRecord>& records) {
  Frame f{0, 1, -1, 1};
  bool any = false;
  double x0 = 0, x1 = 1, y0 = -0.5, y1 = 0.5;
  const RunRecord* geom_rec = nullptr;
  for (const auto& r : records) {
    if (r.error.empty()) geom_rec = &r;
    for (const auto& s : r.spectrum) {
      if (!any) {
        x0 = x1 = s[0];
        y0 = y1 = s[1];
        any = true;
      }
      x0 = std::min(x0, s[0]);
      x1 = std::max(x1, s[0]);
      y0 = std::min(y0, s[1]);
      y1 = std::max(y1, s[1]);
    }
  }
  if (geom_rec) {
    MagneticModel model{family_from_name(geom_rec->family), geom_rec->b, geom_rec->d};
    for (int j = 0; j <= 4; ++j) x1 = std::max(x1, model.level(j));
    x0 = std::min(x0, -2.0 * geom_rec->v_sup - 0.5);
    y1 = std::max(y1, 2.0 * geom_rec->v_sup + 0.2);
    y0 = std::min(y0, -2.0 * geom_rec->v_sup - 0.2);
  }
  const double padx = 0.05 * (x1 - x0 + 1), pady = 0.05 * (y1 - y0 + 1);
  f.x0 = x0 - padx;
  f.x1 = x1 + padx;
  f.y0 = y0 - pady;
  f.y1 = y1 + pady;

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(f.px) << "' height='"
     << fmt(f.py) << "'>\n";
  axes(os, f, "Re", "Im");
  os << "<line x1='" << fmt(f.sx(f.x0)) << "' y1='" << fmt(f.sy(0)) << "' x2='" << fmt(f.sx(f.x1))
     << "' y2='" << fmt(f.sy(0)) << "' stroke='#999' stroke-width='0.7'/>\n";

  if (geom_rec) {
    MagneticModel model{family_from_name(geom_rec->family), geom_rec->b, geom_rec->d};
    for (int j = 0;; ++j) {
      const double lv = model.level(j);
      if (lv > f.x1) break;
      os << "<line x1='" << fmt(f.sx(lv)) << "' y1='" << fmt(f.sy(f.y0)) << "' x2='"
         << fmt(f.sx(lv)) << "' y2='" << fmt(f.sy(f.y1))
         << "' stroke='#777' stroke-width='0.8' stroke-dasharray='1,2' class='level'/>\n";
    }
    // numerical-range box of the family (half strip, drawn over the window)
    const double c = model.family == Family::Schrodinger2d ? 1.0 : 2.0;
    const double vb = c * geom_rec->v_sup;
    os << "<path d='M " << fmt(f.sx(f.x1)) << " " << fmt(f.sy(vb)) << " L " << fmt(f.sx(-vb))
       << " " << fmt(f.sy(vb)) << " L " << fmt(f.sx(-vb)) << " " << fmt(f.sy(-vb)) << " L "
       << fmt(f.sx(f.x1)) << " " << fmt(f.sy(-vb))
       << "' fill='none' stroke='#2a2' stroke-dasharray='5,3' class='range-box'/>\n";
    for (const auto& rc : geom_rec->rects) {
      const double ylo = std::min(0.0, rc.height), yhi = std::max(0.0, rc.height);
      os << "<rect x='" << fmt(f.sx(rc.x_left)) << "' y='" << fmt(f.sy(yhi)) << "' width='"
         << fmt(f.sx(rc.x_right) - f.sx(rc.x_left)) << "' height='"
         << fmt(f.sy(ylo) - f.sy(yhi))
         << "' fill='none' stroke='#c80' stroke-dasharray='3,2' class='level-rect'/>\n";
    }
  }

  int idx = 0;
  for (const auto& r : records) {
    for (const auto& s : r.spectrum) {
      os << "<circle cx='" << fmt(f.sx(s[0])) << "' cy='" << fmt(f.sy(s[1]))
         << "' r='3' fill='" << palette(idx) << "' fill-opacity='0.8' data-re='" << fmt(s[0])
         << "' data-im='" << fmt(s[1]) << "' data-mult='" << fmt(s[2]) << "'/>\n";
    }
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

std::string ratios_svg(const std::vector<RunRecord>& records) {
  // ratio of each sum variant against the first sweep coordinate
  std::vector<std::string> variants;
  for (const auto& r : records)
    for (const auto& l : r.lt)
      if (std::find(variants.begin(), variants.end(), l.variant) == variants.end())
        variants.push_back(l.variant);
  std::string sweep_key = records.empty() || records.front().sweep.empty()
                              ? ""
                              : records.front().sweep.begin()->first;

  std::vector<std::pair<double, const RunRecord*>> pts;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    const double x = sweep_key.empty() ? r.sweep_index : r.sweep.at(sweep_key);
    pts.push_back({x, &r});
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Frame f{0, 1, 0, 1};
  bool any = false;
  for (const auto& [x, r] : pts)
    for (const auto& l : r->lt)
      if (std::isfinite(l.ratio)) {
        if (!any) {
          f.x0 = f.x1 = x;
          f.y0 = f.y1 = l.ratio;
          any = true;
        }
        f.x0 = std::min(f.x0, x);
        f.x1 = std::max(f.x1, x);
        f.y0 = std::min(f.y0, l.ratio);
        f.y1 = std::max(f.y1, l.ratio);
      }
  if (!any) {
    f = Frame{0, 1, 0, 1};
  } else {
    const double padx = 0.05 * (f.x1 - f.x0 + 1e-9) + 1e-9;
    const double pady = 0.05 * (f.y1 - f.y0 + 1e-9) + 1e-9;
    f.x0 -= padx;
    f.x1 += padx;
    f.y0 -= pady;
    f.y1 += pady;
  }

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(f.px) << "' height='"
     << fmt(f.py) << "'>\n";
  axes(os, f, sweep_key.empty() ? "sweep index" : sweep_key, "sum / K");
  int vi = 0;
  for (const auto& v : variants) {
    std::ostringstream path;
    bool first = true;
    for (const auto& [x, r] : pts)
      for (const auto& l : r->lt)
        if (l.variant == v && std::isfinite(l.ratio)) {
          path << (first ? "M " : "L ") << fmt(f.sx(x)) << " " << fmt(f.sy(l.ratio)) << " ";
          first = false;
        }
    os << "<path d='" << path.str() << "' fill='none' stroke='" << palette(vi)
       << "' stroke-width='1.5' data-variant='" << v << "'/>\n";
    os << "<text x='" << fmt(f.px - f.mr - 8) << "' y='" << fmt(f.mt + 14 + 13 * vi)
       << "' font-size='11' text-anchor='end' fill='" << palette(vi) << "'>" << v << "</text>\n";
    ++vi;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::vector<std::string> emit_plots(const std::vector<RunRecord>& records,
                                    const std::string& stem) {
  if (records.empty()) throw std::invalid_argument("emit_plots: no records");
  std::vector<std::string> paths;
  {
    const std::string p = stem + ".spectrum.svg";
    std::ofstream out(p);
    if (!out) throw std::invalid_argument("emit_plots: cannot write " + p);
    out << spectrum_svg(records);
    paths.push_back(p);
  }
  {
    const std::string p = stem + ".ratios.svg";
    std::ofstream out(p);
    if (!out) throw std::invalid_argument("emit_plots: cannot write " + p);
    out << ratios_svg(records);
    paths.push_back(p);
  }
  return paths;
}

}  // namespace magspec
