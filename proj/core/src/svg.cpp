// Copyright 2026 The trajgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajgan/svg.hpp"

#include <fstream>

#include "trajgan/errors.hpp"

namespace trajgan {

namespace {
constexpr double kMargin = 40.0;
}

SvgCanvas::SvgCanvas(int width_px, int height_px, double x_min, double x_max, double y_min,
                     double y_max)
    : width_(width_px), height_(height_px), x_min_(x_min), x_max_(x_max), y_min_(y_min),
      y_max_(y_max) {
  if (x_max_ <= x_min_) x_max_ = x_min_ + 1.0;
  if (y_max_ <= y_min_) y_max_ = y_min_ + 1.0;
}

double SvgCanvas::px(double x) const {
  return kMargin + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * kMargin);
}

double SvgCanvas::py(double y) const {
  return height_ - kMargin - (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * kMargin);
}

void SvgCanvas::polyline(const std::vector<Vec2>& points, const std::string& color,
                         double stroke_width, double opacity) {
  if (points.size() < 2) return;
  body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width
        << "\" stroke-opacity=\"" << opacity << "\" points=\"";
  for (const Vec2& p : points) body_ << px(p.x()) << ',' << py(p.y()) << ' ';
  body_ << "\"/>\n";
}

void SvgCanvas::circle(const Vec2& center, double radius_px, const std::string& color,
                       double opacity) {
  body_ << "<circle cx=\"" << px(center.x()) << "\" cy=\"" << py(center.y()) << "\" r=\""
        << radius_px << "\" fill=\"" << color << "\" fill-opacity=\"" << opacity << "\"/>\n";
}

void SvgCanvas::text(const Vec2& anchor, const std::string& label, int font_px,
                     const std::string& color) {
  body_ << "<text x=\"" << px(anchor.x()) << "\" y=\"" << py(anchor.y()) << "\" font-size=\""
        << font_px << "\" fill=\"" << color << "\" font-family=\"sans-serif\">" << label
        << "</text>\n";
}

void SvgCanvas::frame(const std::string& x_label, const std::string& y_label) {
  body_ << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << (width_ - 2 * kMargin) << "\" height=\"" << (height_ - 2 * kMargin)
        << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  body_ << "<text x=\"" << width_ / 2.0 << "\" y=\"" << height_ - 8 << "\" font-size=\"12\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << x_label << "</text>\n";
  body_ << "<text x=\"12\" y=\"" << height_ / 2.0 << "\" font-size=\"12\" "
        << "font-family=\"sans-serif\" transform=\"rotate(-90 12 " << height_ / 2.0 << ")\" "
        << "text-anchor=\"middle\">" << y_label << "</text>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x_min_);
  body_ << "<text x=\"" << kMargin << "\" y=\"" << height_ - kMargin + 16
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", x_max_);
  body_ << "<text x=\"" << width_ - kMargin << "\" y=\"" << height_ - kMargin + 16
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << buf
        << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", y_min_);
  body_ << "<text x=\"" << kMargin - 4 << "\" y=\"" << height_ - kMargin
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << buf
        << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", y_max_);
  body_ << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 10
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << buf
        << "</text>\n";
}

void SvgCanvas::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write svg: " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
      << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
}

}  // namespace trajgan
