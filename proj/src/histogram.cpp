#include "rmtlab/histogram.hpp"

#include "rmtlab/statistics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace rmtlab::experiment {

Histogram build_histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (values.empty()) throw std::invalid_argument("histogram of an empty sample");
  if (bins < 4) throw std::invalid_argument("histogram needs at least 4 bins");
  if (!(hi > lo)) throw std::invalid_argument("histogram range is empty");

  Histogram h;
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b < bins; ++b) h.density.push_back(stats::normal02_density(lo + (b + 0.5) * width));

  for (double v : values) {
    ++h.total;
    if (v < lo) {
      ++h.underflow;
    } else if (v > hi) {
      ++h.overflow;
    } else {
      const auto b = std::min(bins - 1, static_cast<int>((v - lo) / width));
      ++h.counts[static_cast<std::size_t>(b)];
    }
  }
  return h;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_csv(const Histogram& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "bin_left,bin_right,count,normal02_density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ',' << h.counts[b] << ',' << fmt(h.density[b]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Bars scaled as empirical density count / (total · width) so they sit on
// the same axis as the N(0, 2) curve.
void write_svg(const Histogram& h, const std::filesystem::path& path) {
  constexpr double kWidth = 640, kHeight = 400, kMargin = 40;
  const double lo = h.edges.front(), hi = h.edges.back();
  const double bin_width = (hi - lo) / static_cast<double>(h.counts.size());
  double top = stats::normal02_density(0.0);
  for (long c : h.counts) top = std::max(top, static_cast<double>(c) / (static_cast<double>(h.total) * bin_width));
  top *= 1.1;
  auto sx = [&](double x) { return kMargin + (x - lo) / (hi - lo) * (kWidth - 2 * kMargin); };
  auto sy = [&](double y) { return kHeight - kMargin - y / top * (kHeight - 2 * kMargin); };

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double d = static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * bin_width);
    out << "<rect x=\"" << fmt(sx(h.edges[b])) << "\" y=\"" << fmt(sy(d)) << "\" width=\""
        << fmt(sx(h.edges[b + 1]) - sx(h.edges[b])) << "\" height=\"" << fmt(sy(0) - sy(d))
        << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
  constexpr int kSamples = 200;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = lo + (hi - lo) * i / kSamples;
    out << fmt(sx(x)) << ',' << fmt(sy(stats::normal02_density(x))) << (i == kSamples ? "" : " ");
  }
  out << "\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << fmt(sy(0)) << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
      << fmt(sy(0)) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">normalized sample vs N(0,2), R="
      << h.total << "</text>\n</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

Histogram emit_histogram(std::span<const double> values, int bins, const std::filesystem::path& dir) {
  Histogram h = build_histogram(values, bins);
  std::filesystem::create_directories(dir);
  write_csv(h, dir / "histogram.csv");
  write_svg(h, dir / "histogram.svg");
  return h;
}

}  // namespace rmtlab::experiment
