#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cli.hpp"

namespace betalab::cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Linear ticks at 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_profile_csv(std::ostream& os, const RotationalProfile& p) {
  os << "r,fp,gp,f,g,cos_alpha,residual\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    os << num(p.r[i]) << ',' << num(p.fp[i]) << ',' << num(p.gp[i]) << ',' << num(p.f[i]) << ','
       << num(p.g[i]) << ',' << num(p.cos_alpha[i]) << ',' << num(p.first_integral_residual(i))
       << '\n';
}

RotationalProfile read_profile_csv(std::istream& is, double beta, double c1, double c2) {
  std::string line;
  if (!std::getline(is, line) || line != "r,fp,gp,f,g,cos_alpha,residual")
    throw UsageError("unexpected CSV header: " + line);
  RotationalProfile p;
  p.beta = beta;
  p.c1 = c1;
  p.c2 = c2;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 7) throw UsageError("CSV row with " + std::to_string(v.size()) + " fields");
    p.r.push_back(v[0]);
    p.fp.push_back(v[1]);
    p.gp.push_back(v[2]);
    p.f.push_back(v[3]);
    p.g.push_back(v[4]);
    p.cos_alpha.push_back(v[5]);
  }
  if (!p.r.empty()) {
    p.eps = p.r.front();
    p.f0 = p.f.front();
    p.g0 = p.g.front();
  }
  return p;
}

void write_svg(std::ostream& os, const std::vector<Curve>& curves, bool log_r,
               const std::string& title) {
  const double W = 720, H = 480, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
  double fmin = rmin, fmax = -rmin;
  for (const Curve& c : curves)
    for (std::size_t i = 0; i < c.r.size(); ++i) {
      if (!std::isfinite(c.f[i])) continue;
      rmin = std::min(rmin, c.r[i]);
      rmax = std::max(rmax, c.r[i]);
      fmin = std::min(fmin, c.f[i]);
      fmax = std::max(fmax, c.f[i]);
    }
  if (!(rmax > rmin)) rmax = rmin + 1.0;
  if (!(fmax > fmin)) {
    fmin -= 0.5;
    fmax += 0.5;
  }
  auto xr = [&](double r) { return log_r ? std::log10(r) : r; };
  const double x0 = xr(rmin), x1 = xr(rmax);
  const double pad = 0.05 * (fmax - fmin);
  const double y0 = fmin - pad, y1 = fmax + pad;
  auto px = [&](double r) { return left + (xr(r) - x0) / (x1 - x0) * pw; };
  auto py = [&](double f) { return top + (y1 - f) / (y1 - y0) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\"/></g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  std::vector<double> rt;
  if (log_r) {
    for (double e = std::ceil(x0 - 1e-9); e <= x1 + 1e-9; e += 1.0) rt.push_back(std::pow(10.0, e));
  } else {
    rt = nice_ticks(rmin, rmax);
  }
  for (double r : rt) {
    const double x = px(r);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(x) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << tick_label(r) << "</text>\n";
  }
  for (double f : nice_ticks(y0, y1)) {
    const double y = py(f);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(y) << "\" x2=\"" << left << "\" y2=\""
       << fixed(y) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
       << tick_label(f) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\" "
        "font-size=\"13\">r"
     << (log_r ? " (log scale)" : "") << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">f(r)</text>\n";
  os << "</g>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const Curve& c = curves[k];
    const char* color = c.dashed ? "#444444" : kPalette[k % std::size(kPalette)];
    os << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (c.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " d=\"";
    bool pen = false;
    for (std::size_t i = 0; i < c.r.size(); ++i) {
      if (!std::isfinite(c.f[i])) {
        pen = false;
        continue;
      }
      os << (pen ? " L" : "M") << fixed(px(c.r[i])) << ' ' << fixed(py(c.f[i]));
      pen = true;
    }
    os << "\"/>\n";
    const double ly = top + 16 + 20 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.6\""
       << (c.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>";
    os << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace betalab::cli
