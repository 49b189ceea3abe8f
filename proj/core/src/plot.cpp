#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "qprecode/errors.hpp"
#include "qprecode/sweep.hpp"

namespace qprecode {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* color_for(SchemeId id) {
  switch (id) {
    case SchemeId::infinite_res: return "#1f77b4";
    case SchemeId::proposed_sd: return "#d62728";
    case SchemeId::half_aware: return "#2ca02c";
    case SchemeId::heuristic: return "#9467bd";
    case SchemeId::unaware: return "#7f7f7f";
  }
  return "#000000";
}

// Rounds a raw tick spacing up to 1/2/5 times a power of ten.
double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double n = (r <= 1.0) ? 1.0 : (r <= 2.0) ? 2.0 : (r <= 5.0) ? 5.0 : 10.0;
  return n * mag;
}

}  // namespace

void emit_plot(const SweepResult& result, const std::string& path) {
  if (result.cells.empty()) throw DomainError("cannot plot an empty sweep");

  std::vector<SchemeId> order;
  std::vector<std::vector<std::pair<double, double>>> series;
  for (const auto& cell : result.cells) {
    std::size_t idx = 0;
    for (; idx < order.size(); ++idx) {
      if (order[idx] == cell.scheme) break;
    }
    if (idx == order.size()) {
      order.push_back(cell.scheme);
      series.emplace_back();
    }
    series[idx].push_back({cell.snr_db, cell.mean});
  }

  double x0 = result.cells.front().snr_db, x1 = x0;
  double ymax = 0.0;
  for (const auto& cell : result.cells) {
    x0 = std::min(x0, cell.snr_db);
    x1 = std::max(x1, cell.snr_db);
    ymax = std::max(ymax, cell.mean);
  }
  if (x1 == x0) {
    x0 -= 1.0;
    x1 += 1.0;
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  const double y0 = 0.0;
  const double y1 = ymax * 1.08;

  const double W = 860, H = 540;
  const double ml = 72, mr = 180, mt = 28, mb = 58;
  const double pw = W - ml - mr;
  const double ph = H - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  const auto sy = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(W) << ' ' << num(H)
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"" << num(W) << "\" height=\"" << num(H) << "\" fill=\"#ffffff\"/>\n";

  const double xstep = nice_step((x1 - x0) / 7.0);
  const double ystep = nice_step((y1 - y0) / 6.0);
  for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + 1e-9 * xstep; x += xstep) {
    const double px = sx(x);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#e4e4e4\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y = std::ceil(y0 / ystep) * ystep; y <= y1 + 1e-9 * ystep; y += ystep) {
    const double py = sy(y);
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(py) << "\" stroke=\"#e4e4e4\"/>\n";
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }

  out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(ml) << "\" y2=\""
      << num(mt + ph) << "\" stroke=\"#333333\"/>\n";
  out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(ml + pw)
      << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(H - 14)
      << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  out << "<text x=\"18\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(mt + ph / 2)
      << ")\">average sum rate (bits/s/Hz)</text>\n";

  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* color = color_for(order[i]);
    if (series[i].size() >= 2) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t p = 0; p < series[i].size(); ++p) {
        if (p) out << ' ';
        out << num(sx(series[i][p].first)) << ',' << num(sy(series[i][p].second));
      }
      out << "\"/>\n";
    }
    for (const auto& [x, y] : series[i]) {
      out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
          << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
  }

  const double lx = ml + pw + 16;
  double ly = mt + 10;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* color = color_for(order[i]);
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 26)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    out << "<circle cx=\"" << num(lx + 13) << "\" cy=\"" << num(ly) << "\" r=\"3.5\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4) << "\">"
        << to_string(order[i]) << "</text>\n";
    ly += 22;
  }

  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qprecode
