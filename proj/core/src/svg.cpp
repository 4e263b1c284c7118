#include "pbflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pbflow/errors.hpp"

namespace pbflow {

namespace {
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
}

void write_svg_chart(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& opt) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (!(xmax >= xmin) || !(ymax >= ymin)) throw InvalidArgument("write_svg_chart: empty data");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const int ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto px = [&](double x) { return ml + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

  std::ofstream out(path);
  if (!out) throw InvalidArgument("write_svg_chart: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << opt.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << opt.title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << opt.x_label
      << (opt.log_x ? " (log10)" : "") << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">" << opt.y_label << (opt.log_y ? " (log10)" : "") << "</text>\n";
  // simple ticks at the extremes
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", opt.log_x ? std::pow(10.0, xmin) : xmin);
  out << "<text x=\"" << ml << "\" y=\"" << mt + ph + 16 << "\" font-size=\"10\">" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", opt.log_x ? std::pow(10.0, xmax) : xmax);
  out << "<text x=\"" << ml + pw - 20 << "\" y=\"" << mt + ph + 16 << "\" font-size=\"10\">" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", opt.log_y ? std::pow(10.0, ymin) : ymin);
  out << "<text x=\"4\" y=\"" << mt + ph << "\" font-size=\"10\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", opt.log_y ? std::pow(10.0, ymax) : ymax);
  out << "<text x=\"4\" y=\"" << mt + 10 << "\" font-size=\"10\">" << buf << "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = kColors[ci % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\""
          << color << "\"/>\n";
    out << "<text x=\"" << ml + pw - 150 << "\" y=\"" << mt + 14 + 14 * ci
        << "\" font-size=\"11\" fill=\"" << color << "\">" << s.label << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace pbflow
