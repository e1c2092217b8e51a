#include "maslov_cli/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "maslov/errors.hpp"
#include "maslov/io.hpp"
#include "maslov/maslov.hpp"
#include "maslov/pulse.hpp"
#include "maslov/spectrum.hpp"

namespace maslov::cli {

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw Error(Errc::io_error, "malformed range '" + text + "'");
    return v;
  };
  if (parts.size() == 1) return {number(parts[0]), number(parts[0]), 1};
  if (parts.size() != 3) throw Error(Errc::io_error, "range must be lo:hi:n, got '" + text + "'");
  const double n = number(parts[2]);
  if (n < 1 || n != std::floor(n) || n > 4096) throw Error(Errc::io_error, "range count must be an integer in [1, 4096]");
  return {number(parts[0]), number(parts[1]), static_cast<int>(n)};
}

std::string_view cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::no_pulse: return "no-pulse";
    case CellClass::stable: return "stable";
    case CellClass::unstable: return "unstable";
    case CellClass::mixed: return "mixed";
    case CellClass::marginal: return "marginal";
    case CellClass::degenerate: return "degenerate";
  }
  return "unknown";
}

void evaluate_root(RootResult& root, const ModelParams& params, bool spectrum, int spectrum_nodes) {
  root.evaluated = true;
  try {
    const PulseProfile profile = solve_pulse(params, root.jump);
    const MaslovReport m = maslov_index(profile);
    root.maslov_index = m.total_index;
    root.predicted_index = m.prediction ? m.prediction->predicted_index : 0;
    root.agrees = m.prediction && m.total_index == root.predicted_index;
    root.inventory_agrees = m.agrees_with_prediction;
    if (spectrum) {
      SpectrumOptions so;
      so.nodes = spectrum_nodes;
      so.richardson = false;
      so.localization = false;
      const SpectrumReport s = point_spectrum(profile, so);
      root.unstable_count = s.unstable_count;
      root.spectrum_agrees = validate_counts(m, s).pass ? 1 : 0;
    }
  } catch (const Error& e) {
    root.failed = true;
    root.agrees = root.inventory_agrees = false;
    root.spectrum_agrees = -1;
    root.failure = std::string(e.name()) + ": " + e.what();
  }
}

namespace {

CellClass classify(const std::vector<RootResult>& roots) {
  if (roots.empty()) return CellClass::no_pulse;
  bool stable = false, unstable = false;
  for (const RootResult& r : roots) {
    if (r.marginal) return CellClass::marginal;
    (r.margin < 0.0 ? stable : unstable) = true;
  }
  if (stable && unstable) return CellClass::mixed;
  return stable ? CellClass::stable : CellClass::unstable;
}

template <typename F>
void parallel_for(std::size_t n, int threads, F f) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(n, threads > 0 ? static_cast<unsigned>(threads) : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

ScanResult run_scan(const ScanOptions& options) {
  ScanResult res;
  res.options = options;
  const int na = options.alpha.count, nb = options.beta.count;
  res.cells.resize(static_cast<std::size_t>(na * nb));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      ScanCell& c = res.cells[static_cast<std::size_t>(i * nb + j)];
      c.i = i;
      c.j = j;
      c.alpha = options.alpha.at(i);
      c.beta = options.beta.at(j);
      ModelParams p = options.base;
      p.alpha = c.alpha;
      p.beta = c.beta;
      if (p.alpha == 0.0 && p.beta == 0.0) continue;  // f = -gamma, no root
      for (const JumpSolution& r : solve_jump_condition(p)) {
        RootResult rr;
        rr.jump = r;
        rr.margin = stability_criterion(p, r).margin;
        rr.marginal = std::abs(rr.margin) < options.marginal_band;
        c.roots.push_back(rr);
      }
      c.cls = classify(c.roots);
      if (!c.roots.empty() && (p.alpha == 0.0 || p.beta == 0.0)) c.cls = CellClass::degenerate;
    }

  auto differs = [&](const ScanCell& a, int i, int j) {
    if (i < 0 || j < 0 || i >= na || j >= nb) return false;
    const CellClass b = res.at(i, j).cls;
    auto kind = [](CellClass k) {
      if (k == CellClass::no_pulse || k == CellClass::degenerate) return 0;
      return k == CellClass::stable ? 1 : 2;
    };
    return kind(a.cls) != 0 && kind(b) != 0 && kind(a.cls) != kind(b);
  };
  std::vector<std::size_t> boundary;
  for (ScanCell& c : res.cells) {
    c.boundary_adjacent = c.cls == CellClass::mixed || differs(c, c.i - 1, c.j) || differs(c, c.i + 1, c.j) ||
                          differs(c, c.i, c.j - 1) || differs(c, c.i, c.j + 1);
    if (c.boundary_adjacent) boundary.push_back(static_cast<std::size_t>(c.i * nb + c.j));
  }

  if (options.full) {
    std::vector<std::size_t> chosen;
    if (options.full_cells <= 0) {
      for (std::size_t k = 0; k < res.cells.size(); ++k)
        if (!res.cells[k].roots.empty() && res.cells[k].cls != CellClass::degenerate) chosen.push_back(k);
    } else {
      const std::size_t m = std::min<std::size_t>(boundary.size(), static_cast<std::size_t>(options.full_cells));
      for (std::size_t k = 0; k < m; ++k) chosen.push_back(boundary[k * boundary.size() / m]);
    }
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t k : chosen)
      for (std::size_t r = 0; r < res.cells[k].roots.size(); ++r) jobs.emplace_back(k, r);
    parallel_for(jobs.size(), options.threads, [&](std::size_t idx) {
      auto [k, r] = jobs[idx];
      ScanCell& c = res.cells[k];
      ModelParams p = options.base;
      p.alpha = c.alpha;
      p.beta = c.beta;
      evaluate_root(c.roots[r], p, options.spectrum, options.spectrum_nodes);
    });
  }
  return res;
}

std::string scan_csv(const ScanResult& result) {
  std::ostringstream out;
  out << "i,j,alpha,beta,class,boundary_adjacent,root_index,x_star,margin,marginal,evaluated,failed,"
         "maslov_index,predicted_index,unstable_count,agrees,inventory_agrees,spectrum_agrees,failure\n";
  for (const ScanCell& c : result.cells) {
    const std::string head = std::to_string(c.i) + ',' + std::to_string(c.j) + ',' + format_double(c.alpha) + ',' +
                             format_double(c.beta) + ',' + std::string(cell_class_name(c.cls)) + ',' +
                             (c.boundary_adjacent ? "1" : "0") + ',';
    if (c.roots.empty()) {
      out << head << ",,,,0,0,,,,,,,\n";
      continue;
    }
    for (const RootResult& r : c.roots) {
      out << head << r.jump.root_index << ',' << format_double(r.jump.x_star) << ',' << format_double(r.margin) << ','
          << (r.marginal ? 1 : 0) << ',' << (r.evaluated ? 1 : 0) << ',' << (r.failed ? 1 : 0) << ',';
      if (r.evaluated && !r.failed) {
        out << r.maslov_index << ',' << r.predicted_index << ',';
        if (r.unstable_count >= 0) out << r.unstable_count;
        out << ',' << (r.agrees ? 1 : 0) << ',' << (r.inventory_agrees ? 1 : 0) << ',';
        if (r.spectrum_agrees >= 0) out << r.spectrum_agrees;
      } else {
        out << ",,,,,";
      }
      out << ',' << csv_field(r.failure) << '\n';
    }
  }
  return out.str();
}

std::vector<Segment2> margin_zero_contour(const ScanResult& result) {
  const int na = result.options.alpha.count, nb = result.options.beta.count;
  std::vector<Segment2> segs;
  auto value = [&](int i, int j) {
    const ScanCell& c = result.at(i, j);
    return c.roots.empty() ? std::nan("") : c.roots.front().margin;
  };
  // corners in order (i,j), (i+1,j), (i+1,j+1), (i,j+1)
  for (int i = 0; i + 1 < na; ++i)
    for (int j = 0; j + 1 < nb; ++j) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      double v[4];
      bool ok = true;
      for (int k = 0; k < 4; ++k) {
        v[k] = value(ci[k], cj[k]);
        ok = ok && std::isfinite(v[k]);
      }
      if (!ok) continue;
      std::vector<std::pair<double, double>> pts;
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if ((v[k] < 0.0) == (v[l] < 0.0)) continue;
        const double s = v[k] / (v[k] - v[l]);
        const double a0 = result.options.alpha.at(ci[k]), a1 = result.options.alpha.at(ci[l]);
        const double b0 = result.options.beta.at(cj[k]), b1 = result.options.beta.at(cj[l]);
        pts.emplace_back(a0 + s * (a1 - a0), b0 + s * (b1 - b0));
      }
      if (pts.size() == 2) {
        segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
      } else if (pts.size() == 4) {
        // saddle: pair by the sign of the center value
        const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool first_neg = v[0] < 0.0;
        if ((center < 0.0) == first_neg) {
          segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
          segs.push_back({pts[2].first, pts[2].second, pts[3].first, pts[3].second});
        } else {
          segs.push_back({pts[0].first, pts[0].second, pts[3].first, pts[3].second});
          segs.push_back({pts[1].first, pts[1].second, pts[2].first, pts[2].second});
        }
      }
    }
  return segs;
}

std::string scan_svg(const ScanResult& result) {
  const ScanOptions& o = result.options;
  const double width = 640, height = 640, left = 70, top = 40, plot = 520;
  const double a_lo = o.alpha.lo, a_hi = o.alpha.count > 1 ? o.alpha.hi : o.alpha.lo + 1.0;
  const double b_lo = o.beta.lo, b_hi = o.beta.count > 1 ? o.beta.hi : o.beta.lo + 1.0;
  auto px = [&](double a) { return left + (a - a_lo) / (a_hi - a_lo) * plot; };
  auto py = [&](double b) { return top + plot - (b - b_lo) / (b_hi - b_lo) * plot; };
  const double cw = plot / std::max(1, o.alpha.count - 1), ch = plot / std::max(1, o.beta.count - 1);
  auto color = [](CellClass c) {
    switch (c) {
      case CellClass::no_pulse: return "#e0e0e0";
      case CellClass::stable: return "#4c9be8";
      case CellClass::unstable: return "#e8704c";
      case CellClass::mixed: return "#b07ad9";
      case CellClass::marginal: return "#f2d15c";
      case CellClass::degenerate: return "#9a9a9a";
    }
    return "#000000";
  };
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g id=\"cells\">\n";
  for (const ScanCell& c : result.cells) {
    s << "<rect x=\"" << format_double(px(c.alpha) - cw / 2) << "\" y=\"" << format_double(py(c.beta) - ch / 2)
      << "\" width=\"" << format_double(cw) << "\" height=\"" << format_double(ch) << "\" fill=\"" << color(c.cls)
      << "\"/>\n";
  }
  s << "</g>\n<g id=\"boundary\" stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n";
  for (const Segment2& g : margin_zero_contour(result))
    s << "<line x1=\"" << format_double(px(g.x0)) << "\" y1=\"" << format_double(py(g.y0)) << "\" x2=\""
      << format_double(px(g.x1)) << "\" y2=\"" << format_double(py(g.y1)) << "\"/>\n";
  s << "</g>\n<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
    << "<rect x=\"" << left - cw / 2 << "\" y=\"" << top - ch / 2 << "\" width=\"" << plot + cw << "\" height=\""
    << plot + ch << "\"/>\n</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double a = a_lo + (a_hi - a_lo) * k / 4, b = b_lo + (b_hi - b_lo) * k / 4;
    s << "<text x=\"" << format_double(px(a)) << "\" y=\"" << top + plot + ch / 2 + 18
      << "\" text-anchor=\"middle\">" << format_double(a) << "</text>\n";
    s << "<text x=\"" << left - cw / 2 - 6 << "\" y=\"" << format_double(py(b) + 4) << "\" text-anchor=\"end\">"
      << format_double(b) << "</text>\n";
  }
  s << "<text x=\"" << left + plot / 2 << "\" y=\"" << height - 30 << "\" text-anchor=\"middle\">alpha</text>\n"
    << "<text x=\"20\" y=\"" << top + plot / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << top + plot / 2 << ")\">beta</text>\n"
    << "<text x=\"" << left + plot / 2 << "\" y=\"22\" text-anchor=\"middle\">gamma = " << format_double(o.base.gamma)
    << ", D = " << format_double(o.base.dd) << ", eps = " << format_double(o.base.epsilon)
    << "</text>\n";
  const std::pair<CellClass, const char*> legend[] = {{CellClass::stable, "stable"},
                                                     {CellClass::unstable, "unstable"},
                                                     {CellClass::mixed, "two roots, mixed"},
                                                     {CellClass::marginal, "marginal"},
                                                     {CellClass::degenerate, "alpha or beta zero"},
                                                     {CellClass::no_pulse, "no pulse"}};
  double lx = 20;
  for (const auto& [cls, label] : legend) {
    s << "<rect x=\"" << lx << "\" y=\"" << height - 20 << "\" width=\"10\" height=\"10\" fill=\"" << color(cls)
      << "\"/><text x=\"" << lx + 14 << "\" y=\"" << height - 11 << "\">" << label << "</text>\n";
    lx += 28 + 6.5 * static_cast<double>(std::string_view(label).size());
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace maslov::cli
