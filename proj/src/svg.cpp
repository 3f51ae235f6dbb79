#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ulef/svg.hpp"

namespace ulef {

namespace {

constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 70;
const char* const kColors[] = {"#3465a4", "#cc0000", "#4e9a06", "#75507b", "#c4a000"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

struct Frame {
  double lo, hi;
  double y(double v) const { return kTop + (kHeight - kTop - kBottom) * (hi - v) / (hi - lo); }
};

Frame frame(double lo, double hi) {
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi - lo < 1e-12) hi = lo + 1;
  const double pad = 0.05 * (hi - lo);
  return {lo < 0 ? lo - pad : lo, hi + pad};
}

void header(std::ostringstream& o, const std::string& title, const Frame& f, const std::string& y_label) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << num(f.y(0)) << "\" x2=\"" << kWidth - kRight << "\" y2=\""
    << num(f.y(0)) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = f.lo + (f.hi - f.lo) * k / 4;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.y(v) + 4) << "\" text-anchor=\"end\">" << label_num(v)
      << "</text>\n";
  }
  o << "<text transform=\"translate(16," << num((kTop + kHeight - kBottom) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, const std::string& y_label) {
  double lo = 0, hi = 0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const Frame f = frame(lo, hi);
  std::ostringstream o;
  header(o, title, f, y_label);
  const double slot = (kWidth - kLeft - kRight) / std::max<std::size_t>(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kLeft + slot * i + slot * 0.15, w = slot * 0.7;
    const double top = f.y(std::max(values[i], 0.0)), bottom = f.y(std::min(values[i], 0.0));
    o << "<rect x=\"" << num(x) << "\" y=\"" << num(top) << "\" width=\"" << num(w) << "\" height=\""
      << num(bottom - top) << "\" fill=\"" << kColors[0] << "\"/>\n";
    const double cx = x + w / 2, cy = kHeight - kBottom + 12;
    o << "<text transform=\"translate(" << num(cx) << "," << num(cy) << ") rotate(45)\">" << escape(labels.at(i))
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label) {
  double lo = 0, hi = 0, xlo = 0, xhi = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      lo = std::min(lo, s.y[i]);
      hi = std::max(hi, s.y[i]);
      xlo = first ? s.x[i] : std::min(xlo, s.x[i]);
      xhi = first ? s.x[i] : std::max(xhi, s.x[i]);
      first = false;
    }
  if (xhi - xlo < 1e-12) xhi = xlo + 1;
  const Frame f = frame(lo, hi);
  auto px = [&](double x) { return kLeft + (kWidth - kLeft - kRight) * (x - xlo) / (xhi - xlo); };
  std::ostringstream o;
  header(o, title, f, y_label);
  for (int k = 0; k <= 4; ++k) {
    const double v = xlo + (xhi - xlo) * k / 4;
    o << "<text x=\"" << num(px(v)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
      << label_num(v) << "</text>\n";
  }
  o << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << kHeight - kBottom + 36
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 5];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) pts += (i ? " " : "") + num(px(s.x[i])) + "," + num(f.y(s.y[i]));
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(f.y(s.y[i])) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
    o << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
      << color << "\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ulef
