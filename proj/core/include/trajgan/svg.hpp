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

#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "trajgan/types.hpp"

namespace trajgan {

// Minimal static SVG canvas for the plot subcommand. World coordinates map
// into the pixel viewport with y pointing up.
class SvgCanvas {
 public:
  SvgCanvas(int width_px, int height_px, double x_min, double x_max, double y_min, double y_max);

  void polyline(const std::vector<Vec2>& points, const std::string& color, double stroke_width,
                double opacity = 1.0);
  void circle(const Vec2& center, double radius_px, const std::string& color,
              double opacity = 1.0);
  void text(const Vec2& anchor, const std::string& label, int font_px = 12,
            const std::string& color = "#333333");
  // Plain frame with min/max labels, enough for metric curves.
  void frame(const std::string& x_label, const std::string& y_label);

  void save(const std::filesystem::path& path) const;

 private:
  double px(double x) const;
  double py(double y) const;

  int width_, height_;
  double x_min_, x_max_, y_min_, y_max_;
  std::ostringstream body_;
};

}  // namespace trajgan
