// Copyright 2026 The otlab Authors. All Rights Reserved.
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

#ifndef OTLAB_PLOT_HPP
#define OTLAB_PLOT_HPP

#include <opencv2/core.hpp>
#include <string>
#include <vector>

namespace otlab {

// Minimal raster plotting: axes with ticks, scatters, polylines, segments
// and boxplot glyphs, written out as PNG.
class PlotCanvas {
 public:
  PlotCanvas(int width, int height, double x_lo, double x_hi, double y_lo,
             double y_hi, const std::string& title);

  cv::Point map(double x, double y) const;
  void draw_axes(const std::string& x_label, const std::string& y_label);
  void scatter(const std::vector<double>& xs, const std::vector<double>& ys,
               const cv::Scalar& color, int radius = 2);
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const cv::Scalar& color, int thickness = 1);
  void segment(double x0, double y0, double x1, double y1,
               const cv::Scalar& color, int thickness = 1);
  void boxplot(double x_center, double half_width, double lo, double q1,
               double median, double q3, double hi, const cv::Scalar& color);
  void label(double x, double y, const std::string& text,
             const cv::Scalar& color);
  void save(const std::string& path) const;

 private:
  cv::Mat img_;
  double x_lo_, x_hi_, y_lo_, y_hi_;
  int margin_left_ = 64, margin_right_ = 16, margin_top_ = 28,
      margin_bottom_ = 44;
};

// Figure sets regenerated purely from the files persisted in a run or sweep
// directory; rendering never re-runs training or solvers.
void plot_run_dir(const std::string& run_dir);
void plot_sweep_dir(const std::string& sweep_dir);

}  // namespace otlab

#endif  // OTLAB_PLOT_HPP
