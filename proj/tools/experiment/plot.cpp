#include "plot.hpp"

#include "ballwidth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ballwidth::experiment {

namespace {

constexpr double kW = 640, kH = 480, kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string loglog_svg(const std::vector<std::pair<double, double>>& points, const RateFit& fit,
                       double theory_slope, const std::string& title, const std::string& hash) {
  if (points.empty()) throw DomainError("loglog_svg: no points");
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300, mx = 0, my = 0;
  for (const auto& [n, w] : points) {
    if (!(n > 0 && w > 0)) throw DomainError("loglog_svg: points must be positive");
    x0 = std::min(x0, std::log10(n));
    x1 = std::max(x1, std::log10(n));
    y0 = std::min(y0, std::log10(w));
    y1 = std::max(y1, std::log10(w));
    mx += std::log10(n);
    my += std::log10(w);
  }
  mx /= points.size();
  my /= points.size();
  // pad so both lines stay inside the frame
  const double px = std::max(0.1, 0.05 * (x1 - x0));
  x0 -= px;
  x1 += px;
  const double ext = std::max(std::abs(fit.exponent), std::abs(theory_slope)) * px;
  y0 = std::floor(y0 - ext);
  y1 = std::ceil(y1 + ext);

  auto X = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto Y = [&](double ly) { return kH - kBottom - (ly - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!hash.empty()) s << "<!-- manifest_hash=" << hash << " -->\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
    << "\" height=\"" << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = int(y0); e <= int(y1); ++e) {
    s << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << num(Y(e)) << "\" y2=\""
      << num(Y(e)) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(Y(e) + 4) << "\" text-anchor=\"end\">"
      << sci(std::pow(10.0, e)) << "</text>\n";
  }
  for (const auto& [n, w] : points) {
    const double lx = std::log10(n);
    s << "<text x=\"" << num(X(lx)) << "\" y=\"" << kH - kBottom + 18 << "\" text-anchor=\"middle\">"
      << n << "</text>\n";
  }
  s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 16 << "\" text-anchor=\"middle\">n</text>\n";

  auto line = [&](double slope, double intercept10, const char* colour, const char* dash) {
    s << "<line x1=\"" << num(X(x0)) << "\" y1=\"" << num(Y(intercept10 + slope * x0)) << "\" x2=\""
      << num(X(x1)) << "\" y2=\"" << num(Y(intercept10 + slope * x1)) << "\" stroke=\"" << colour
      << "\" stroke-dasharray=\"" << dash << "\"/>\n";
  };
  // rate_fit works in natural logs; intercept / ln 10 moves it to base 10
  line(fit.exponent, fit.intercept / std::log(10.0), "steelblue", "none");
  line(theory_slope, my - theory_slope * mx, "firebrick", "6,4");
  for (const auto& [n, w] : points)
    s << "<circle cx=\"" << num(X(std::log10(n))) << "\" cy=\"" << num(Y(std::log10(w)))
      << "\" r=\"4\" fill=\"black\"/>\n";

  s << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 18 << "\" fill=\"steelblue\">fit slope "
    << num(fit.exponent) << "</text>\n";
  s << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 34 << "\" fill=\"firebrick\">reference slope "
    << num(theory_slope) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace ballwidth::experiment
