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

#include "otlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <sstream>

#include "json.hpp"
#include "otlab/experiments.hpp"
#include "otlab/record.hpp"

namespace otlab {

namespace fs = std::filesystem;

namespace {
const cv::Scalar kWhite(255, 255, 255);
const cv::Scalar kBlack(30, 30, 30);
const cv::Scalar kGrey(190, 190, 190);
const cv::Scalar kBlue(180, 90, 30);    // BGR
const cv::Scalar kRed(60, 60, 200);
const cv::Scalar kGreen(90, 160, 60);
const cv::Scalar kOrange(40, 140, 230);

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}
}  // namespace

PlotCanvas::PlotCanvas(int width, int height, double x_lo, double x_hi,
                       double y_lo, double y_hi, const std::string& title)
    : img_(height, width, CV_8UC3, kWhite),
      x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
  if (x_hi_ <= x_lo_) x_hi_ = x_lo_ + 1.0;
  if (y_hi_ <= y_lo_) y_hi_ = y_lo_ + 1.0;
  cv::putText(img_, title, {margin_left_, 18}, cv::FONT_HERSHEY_SIMPLEX, 0.45,
              kBlack, 1, cv::LINE_AA);
}

cv::Point PlotCanvas::map(double x, double y) const {
  const int w = img_.cols - margin_left_ - margin_right_;
  const int h = img_.rows - margin_top_ - margin_bottom_;
  const double fx = (x - x_lo_) / (x_hi_ - x_lo_);
  const double fy = (y - y_lo_) / (y_hi_ - y_lo_);
  return {margin_left_ + static_cast<int>(std::lround(fx * w)),
          margin_top_ + h - static_cast<int>(std::lround(fy * h))};
}

void PlotCanvas::draw_axes(const std::string& x_label,
                           const std::string& y_label) {
  const cv::Point origin = map(x_lo_, y_lo_);
  const cv::Point xe = map(x_hi_, y_lo_);
  const cv::Point ye = map(x_lo_, y_hi_);
  cv::line(img_, origin, xe, kBlack, 1, cv::LINE_AA);
  cv::line(img_, origin, ye, kBlack, 1, cv::LINE_AA);
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_lo_ + (x_hi_ - x_lo_) * k / 4.0;
    const double yv = y_lo_ + (y_hi_ - y_lo_) * k / 4.0;
    const cv::Point px = map(xv, y_lo_);
    const cv::Point py = map(x_lo_, yv);
    cv::line(img_, px, {px.x, px.y + 4}, kBlack, 1);
    cv::line(img_, py, {py.x - 4, py.y}, kBlack, 1);
    cv::putText(img_, tick_label(xv), {px.x - 14, px.y + 18},
                cv::FONT_HERSHEY_SIMPLEX, 0.35, kBlack, 1, cv::LINE_AA);
    cv::putText(img_, tick_label(yv), {2, py.y + 4},
                cv::FONT_HERSHEY_SIMPLEX, 0.35, kBlack, 1, cv::LINE_AA);
  }
  cv::putText(img_, x_label, {img_.cols / 2 - 20, img_.rows - 8},
              cv::FONT_HERSHEY_SIMPLEX, 0.4, kBlack, 1, cv::LINE_AA);
  cv::putText(img_, y_label, {4, margin_top_ - 6}, cv::FONT_HERSHEY_SIMPLEX,
              0.4, kBlack, 1, cv::LINE_AA);
}

void PlotCanvas::scatter(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const cv::Scalar& color, int radius) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    cv::circle(img_, map(xs[k], ys[k]), radius, color, cv::FILLED,
               cv::LINE_AA);
  }
}

void PlotCanvas::polyline(const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const cv::Scalar& color, int thickness) {
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    cv::line(img_, map(xs[k], ys[k]), map(xs[k + 1], ys[k + 1]), color,
             thickness, cv::LINE_AA);
  }
}

void PlotCanvas::segment(double x0, double y0, double x1, double y1,
                         const cv::Scalar& color, int thickness) {
  cv::line(img_, map(x0, y0), map(x1, y1), color, thickness, cv::LINE_AA);
}

void PlotCanvas::boxplot(double x_center, double half_width, double lo,
                         double q1, double median, double q3, double hi,
                         const cv::Scalar& color) {
  const cv::Point tl = map(x_center - half_width, q3);
  const cv::Point br = map(x_center + half_width, q1);
  cv::rectangle(img_, tl, br, color, 1, cv::LINE_AA);
  const cv::Point ml = map(x_center - half_width, median);
  const cv::Point mr = map(x_center + half_width, median);
  cv::line(img_, ml, mr, color, 2, cv::LINE_AA);
  cv::line(img_, map(x_center, q3), map(x_center, hi), color, 1, cv::LINE_AA);
  cv::line(img_, map(x_center, q1), map(x_center, lo), color, 1, cv::LINE_AA);
  cv::line(img_, map(x_center - half_width * 0.5, hi),
           map(x_center + half_width * 0.5, hi), color, 1, cv::LINE_AA);
  cv::line(img_, map(x_center - half_width * 0.5, lo),
           map(x_center + half_width * 0.5, lo), color, 1, cv::LINE_AA);
}

void PlotCanvas::label(double x, double y, const std::string& text,
                       const cv::Scalar& color) {
  cv::putText(img_, text, map(x, y), cv::FONT_HERSHEY_SIMPLEX, 0.4, color, 1,
              cv::LINE_AA);
}

void PlotCanvas::save(const std::string& path) const {
  if (!cv::imwrite(path, img_)) {
    throw std::runtime_error("failed to write figure: " + path);
  }
}

namespace {

std::vector<std::array<double, 4>> read_csv_rows(const fs::path& path,
                                                 int n_cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing data file: " + path.string());
  std::vector<std::array<double, 4>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 4> row{0, 0, 0, 0};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < n_cols; ++c) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("short row in " + path.string());
      }
      row[c] = std::stod(cell);
    }
    rows.push_back(row);
  }
  return rows;
}

struct Cloud {
  std::vector<double> xs, ys;
};

Cloud read_scatter(const fs::path& path) {
  Cloud cloud;
  for (const auto& row : read_csv_rows(path, 2)) {
    cloud.xs.push_back(row[0]);
    cloud.ys.push_back(row[1]);
  }
  return cloud;
}

// samples_<iter>.csv / arc_<iter>.csv discovery
std::map<long, fs::path> indexed_files(const fs::path& dir,
                                       const std::string& prefix) {
  std::map<long, fs::path> found;
  if (!fs::exists(dir)) return found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 4 &&
        name.substr(name.size() - 4) == ".csv") {
      const std::string num =
          name.substr(prefix.size(), name.size() - prefix.size() - 4);
      try {
        found[std::stol(num)] = entry.path();
      } catch (const std::exception&) {
      }
    }
  }
  return found;
}

}  // namespace

void plot_run_dir(const std::string& run_dir) {
  verify_run_dir_integrity(run_dir);
  const fs::path dir = run_dir;

  const auto metrics = read_metrics_file((dir / "metrics.ndjson").string());
  std::vector<std::string> missing;

  // Loss curves.
  if (!metrics.empty()) {
    std::vector<double> iters, lv, lt, wh, wm;
    double lv_lo = 0, lv_hi = 0, lt_lo = 0, lt_hi = 0;
    for (const auto& rec : metrics) {
      iters.push_back(static_cast<double>(rec.iter));
      lv.push_back(rec.loss_v);
      lt.push_back(rec.loss_T);
      wh.push_back(rec.w_hat_mean);
      wm.push_back(rec.w_mean);
      lv_lo = std::min(lv_lo, rec.loss_v);
      lv_hi = std::max(lv_hi, rec.loss_v);
      lt_lo = std::min(lt_lo, rec.loss_T);
      lt_hi = std::max(lt_hi, rec.loss_T);
    }
    PlotCanvas cv_top(900, 280, 0, iters.back(), lv_lo, lv_hi,
                      "potential loss");
    cv_top.draw_axes("iteration", "L_v");
    cv_top.polyline(iters, lv, kBlue);
    cv_top.save((dir / "fig_loss_v.png").string());

    PlotCanvas cv_bot(900, 280, 0, iters.back(), lt_lo, lt_hi,
                      "generator loss");
    cv_bot.draw_axes("iteration", "L_T");
    cv_bot.polyline(iters, lt, kOrange);
    cv_bot.save((dir / "fig_loss_T.png").string());

    const double w_hi =
        std::max(*std::max_element(wh.begin(), wh.end()),
                 *std::max_element(wm.begin(), wm.end()));
    PlotCanvas cv_w(900, 280, 0, iters.back(), 0.0, std::max(w_hi, 1.2),
                    "sample-weight means");
    cv_w.draw_axes("iteration", "weight");
    cv_w.polyline(iters, wh, kBlue);
    cv_w.polyline(iters, wm, kRed);
    cv_w.label(iters.back() * 0.75, w_hi, "w_hat (blue), w (red)", kBlack);
    cv_w.save((dir / "fig_weights.png").string());
  } else {
    missing.push_back("metrics.ndjson");
  }

  // Sample scatter grid.
  const auto sample_files = indexed_files(dir, "samples_");
  if (!sample_files.empty() && fs::exists(dir / "data_samples.csv")) {
    const Cloud data = read_scatter(dir / "data_samples.csv");
    std::vector<cv::Mat> panels;
    for (const auto& [iter, path] : sample_files) {
      const Cloud gen = read_scatter(path);
      PlotCanvas canvas(320, 320, -15.0, 15.0, -15.0, 15.0,
                        "iter " + std::to_string(iter));
      canvas.draw_axes("", "");
      canvas.scatter(data.xs, data.ys, kRed, 1);
      canvas.scatter(gen.xs, gen.ys, kBlue, 1);
      const std::string tmp = (dir / ".panel_tmp.png").string();
      canvas.save(tmp);
      panels.push_back(cv::imread(tmp));
      fs::remove(tmp);
    }
    const int cols = 3;
    const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
    cv::Mat blank(320, 320, CV_8UC3, kWhite);
    std::vector<cv::Mat> row_imgs;
    for (int r = 0; r < rows; ++r) {
      std::vector<cv::Mat> row;
      for (int c = 0; c < cols; ++c) {
        const std::size_t k = r * cols + c;
        row.push_back(k < panels.size() ? panels[k] : blank.clone());
      }
      cv::Mat row_img;
      cv::hconcat(row, row_img);
      row_imgs.push_back(row_img);
    }
    cv::Mat grid;
    cv::vconcat(row_imgs, grid);
    cv::imwrite((dir / "fig_samples.png").string(), grid);
  } else {
    missing.push_back("samples_*.csv / data_samples.csv");
  }

  // ARC boxplots.
  const auto arc_files = indexed_files(dir, "arc_");
  if (!arc_files.empty()) {
    double max_arc = 0.0;
    std::map<long, std::array<double, 5>> summaries;
    for (const auto& [iter, path] : arc_files) {
      std::vector<double> vals;
      for (const auto& row : read_csv_rows(path, 1)) vals.push_back(row[0]);
      std::sort(vals.begin(), vals.end());
      const auto q = [&](double p) {
        const double pos = p * (vals.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, vals.size() - 1);
        return vals[lo] * (1 - (pos - lo)) + vals[hi] * (pos - lo);
      };
      summaries[iter] = {vals.front(), q(0.25), q(0.5), q(0.75), vals.back()};
      max_arc = std::max(max_arc, vals.back());
    }
    const double x_hi = static_cast<double>(arc_files.rbegin()->first);
    PlotCanvas canvas(900, 360, -x_hi * 0.05, x_hi * 1.05, 0.0,
                      max_arc * 1.05 + 1e-9, "potential rate of change");
    canvas.draw_axes("iteration", "|v(b)-v(a)| / |b-a|");
    for (const auto& [iter, s] : summaries) {
      canvas.boxplot(static_cast<double>(iter), x_hi * 0.02, s[0], s[1], s[2],
                     s[3], s[4], kBlue);
    }
    canvas.save((dir / "fig_arc.png").string());
  } else {
    missing.push_back("arc_*.csv");
  }

  // Transport pair segments.
  if (fs::exists(dir / "transport_pairs.csv")) {
    const auto rows = read_csv_rows(dir / "transport_pairs.csv", 4);
    PlotCanvas canvas(480, 480, -15.0, 15.0, -15.0, 15.0, "transport pairs");
    canvas.draw_axes("", "");
    if (fs::exists(dir / "data_samples.csv")) {
      const Cloud data = read_scatter(dir / "data_samples.csv");
      canvas.scatter(data.xs, data.ys, kRed, 1);
    }
    for (const auto& row : rows) {
      canvas.segment(row[0], row[1], row[2], row[3], kGrey);
    }
    for (const auto& row : rows) {
      canvas.scatter({row[0]}, {row[1]}, kGreen, 2);
      canvas.scatter({row[2]}, {row[3]}, kBlue, 2);
    }
    canvas.save((dir / "fig_transport.png").string());
  } else {
    missing.push_back("transport_pairs.csv");
  }

  // Empirical W2 sequence.
  if (fs::exists(dir / "w2_series.csv")) {
    const auto rows = read_csv_rows(dir / "w2_series.csv", 2);
    if (!rows.empty()) {
      std::vector<double> xs, ys;
      double hi = 0;
      for (const auto& row : rows) {
        xs.push_back(row[0]);
        ys.push_back(row[1]);
        hi = std::max(hi, row[1]);
      }
      PlotCanvas canvas(900, 280, 0, xs.back(), 0, hi * 1.1 + 1e-9,
                        "empirical W2 to target");
      canvas.draw_axes("iteration", "W2");
      canvas.polyline(xs, ys, kGreen, 2);
      canvas.save((dir / "fig_w2.png").string());
    }
  } else {
    missing.push_back("w2_series.csv");
  }

  if (!missing.empty()) {
    std::string msg = "plot_run_dir: missing data files in " + run_dir + ":";
    for (const auto& m : missing) msg += " " + m + ";";
    throw std::runtime_error(msg);
  }
}

void plot_sweep_dir(const std::string& sweep_dir) {
  const fs::path dir = sweep_dir;
  std::ifstream in(dir / "sweep.json");
  if (!in) {
    throw std::runtime_error("no records: missing sweep.json in " + sweep_dir);
  }
  nlohmann::json sj;
  in >> sj;

  struct AxisPoints {
    std::vector<double> xs, w2, covered;
  };
  std::map<std::string, AxisPoints> axes;
  for (const auto& cell : sj.at("cells")) {
    if (cell.value("n_finished", 0) < 1) continue;
    const double w2 = cell.value("w2_mean", 0.0);
    const double covered = cell.value("covered_mean", 0.0);
    if (cell.contains("tau")) {
      axes["tau"].xs.push_back(cell["tau"].get<double>());
      axes["tau"].w2.push_back(w2);
      axes["tau"].covered.push_back(covered);
    }
    if (cell.contains("reg_lambda")) {
      axes["reg_lambda"].xs.push_back(cell["reg_lambda"].get<double>());
      axes["reg_lambda"].w2.push_back(w2);
      axes["reg_lambda"].covered.push_back(covered);
    }
    if (cell.contains("alpha_range")) {
      axes["alpha_max"].xs.push_back(cell["alpha_range"][1].get<double>());
      axes["alpha_max"].w2.push_back(w2);
      axes["alpha_max"].covered.push_back(covered);
    }
  }
  for (auto& [name, pts] : axes) {
    if (pts.xs.size() < 2) continue;
    std::vector<std::size_t> order(pts.xs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pts.xs[a] < pts.xs[b];
    });
    std::vector<double> xs, w2, covered;
    for (const std::size_t k : order) {
      xs.push_back(pts.xs[k]);
      w2.push_back(pts.w2[k]);
      covered.push_back(pts.covered[k]);
    }
    const double w2_hi = *std::max_element(w2.begin(), w2.end());
    PlotCanvas canvas(700, 360, xs.front(), xs.back(), 0.0,
                      w2_hi * 1.15 + 1e-9, name + " vs empirical W2");
    canvas.draw_axes(name, "W2 (mean over seeds)");
    canvas.polyline(xs, w2, kGreen, 2);
    canvas.scatter(xs, w2, kGreen, 3);
    canvas.save((dir / ("fig_sweep_" + name + "_w2.png")).string());

    PlotCanvas canvas2(700, 360, xs.front(), xs.back(), 0.0, 8.5,
                       name + " vs covered modes");
    canvas2.draw_axes(name, "covered modes (mean)");
    canvas2.polyline(xs, covered, kBlue, 2);
    canvas2.scatter(xs, covered, kBlue, 3);
    canvas2.save((dir / ("fig_sweep_" + name + "_modes.png")).string());
  }
}

}  // namespace otlab
