#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace ringqpe::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.00" || s == "-0.000") s.erase(0, 1);
  return s;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series) {
  constexpr double kLeft = 80.0, kRight = 770.0, kTop = 50.0, kBottom = 440.0;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    for (double y : s.y) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (!(xmax > xmin)) xmin -= 1.0, xmax += 1.0;
  if (!(ymax > ymin)) ymin -= 1.0, ymax += 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape_xml(title) + "</text>\n";
  out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(kRight - kLeft) +
         "\" height=\"" + fixed(kBottom - kTop) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out += "<text x=\"" + fixed(px(xv)) + "\" y=\"460\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + tick_label(xv) + "</text>\n";
    out += "<text x=\"72\" y=\"" + fixed(py(yv) + 4.0) + "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + tick_label(yv) + "</text>\n";
  }
  if (ymin < 0.0 && ymax > 0.0) {
    out += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(py(0.0)) + "\" x2=\"" + fixed(kRight) +
           "\" y2=\"" + fixed(py(0.0)) + "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
  }
  out += "<text x=\"425\" y=\"485\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_xml(x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"245\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 245)\">" + escape_xml(y_label) + "</text>\n";

  int legend = 0;
  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += fixed(px(s.x[i])) + "," + fixed(py(s.y[i]));
    }
    out += "\"/>\n";
    const double ly = kTop + 16.0 + 18.0 * legend++;
    out += "<line x1=\"" + fixed(kRight - 150.0) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(kRight - 125.0) +
           "\" y2=\"" + fixed(ly) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fixed(kRight - 118.0) + "\" y=\"" + fixed(ly + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {}

void OutputDir::ensure() const {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_)) {
    throw IoError("cannot create output directory '" + root_.string() + "'" +
                  (ec ? ": " + ec.message() : std::string{}));
  }
}

void OutputDir::write(const std::string& name, const std::string& content) const {
  const auto target = root_ / name;
  const auto temp = root_ / ("." + name + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + temp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError("cannot move output into place at '" + target.string() + "'");
  }
}

}  // namespace ringqpe::cli
