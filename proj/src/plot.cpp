// Minimal hand-rolled SVG writer. All coordinates go through one formatter so
// identical reports produce identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "symdyn/harness.hpp"

namespace symdyn {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Frame {
  double xmax, ymax;
  double px(double x) const { return kLeft + x / xmax * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - y / ymax * (kHeight - kTop - kBottom); }
};

void header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  const double x0 = f.px(0), y0 = f.py(0);
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(f.px(f.xmax))
      << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\""
      << num(f.py(f.ymax)) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.xmax * i / 4, yv = f.ymax * i / 4;
    out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(y0 + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << tick(xv)
        << "</text>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(yv) + 3)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << tick(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << num(f.px(f.xmax / 2)) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(f.py(f.ymax / 2))
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
      << num(f.py(f.ymax / 2)) << ")\">" << ylabel << "</text>\n";
}

}  // namespace

std::string continuity_svg(const ContinuityReport& report) {
  require(!report.rows.empty(), Errc::invalid_argument, "continuity_svg: empty report");

  auto summary = report.summarize();
  std::sort(summary.begin(), summary.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });

  double xmax = 0, ymax = 0;
  for (const auto& r : report.rows) {
    xmax = std::max(xmax, r.eps);
    ymax = std::max({ymax, r.delta_h, r.budget});
  }
  const Frame f{xmax > 0 ? xmax * 1.05 : 1.0, ymax > 0 ? ymax * 1.05 : 1.0};

  std::ostringstream out;
  header(out, "entropy change vs perturbation rate");
  axes(out, f, "eps", "|h(x) - h(y)|");

  out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"" << num(f.px(0))
      << ',' << num(f.py(0));
  for (const auto& s : summary)
    if (s.eps > 0) out << ' ' << num(f.px(s.eps)) << ',' << num(f.py(s.budget));
  out << "\"/>\n";

  for (const auto& r : report.rows) {
    out << "<circle cx=\"" << num(f.px(r.eps)) << "\" cy=\"" << num(f.py(r.delta_h))
        << "\" r=\"3\" fill=\"" << (r.hard_pass ? "#2c7fb8" : "#d95f0e") << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string return_time_svg(const ReturnTimeCensus& rtc, std::size_t max_bars) {
  require(rtc.returns > 0, Errc::invalid_argument, "return_time_svg: empty census");
  require(max_bars >= 1, Errc::invalid_argument, "return_time_svg: max_bars must be >= 1");

  double mean = 0;
  for (const auto& [r, c] : rtc.counts) mean += static_cast<double>(r) * static_cast<double>(c);
  mean /= static_cast<double>(rtc.returns);
  const double p = 1.0 / mean;

  const std::size_t bars = std::min(max_bars, rtc.counts.rbegin()->first);
  double ymax = 0;
  for (std::size_t r = 1; r <= bars; ++r)
    ymax = std::max({ymax, rtc.mass(r), p * std::pow(1 - p, static_cast<double>(r - 1))});
  const Frame f{static_cast<double>(bars) + 1.0, ymax * 1.05};

  std::ostringstream out;
  header(out, "return-time distribution (geometric overlay)");
  axes(out, f, "return time", "mass");

  const double bw = (f.px(1) - f.px(0)) * 0.8;
  for (std::size_t r = 1; r <= bars; ++r) {
    const double m = rtc.mass(r);
    out << "<rect x=\"" << num(f.px(static_cast<double>(r)) - bw / 2) << "\" y=\"" << num(f.py(m))
        << "\" width=\"" << num(bw) << "\" height=\"" << num(f.py(0) - f.py(m))
        << "\" fill=\"#9ecae1\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
  for (std::size_t r = 1; r <= bars; ++r) {
    const double g = p * std::pow(1 - p, static_cast<double>(r - 1));
    out << (r > 1 ? " " : "") << num(f.px(static_cast<double>(r))) << ',' << num(f.py(g));
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace symdyn
