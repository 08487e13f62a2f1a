#include "wg/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "wg/basis.hpp"

namespace wg {

namespace {

nlohmann::ordered_json record_to_json(const LevelRecord& rec) {
  nlohmann::ordered_json j;
  j["level"] = rec.level;
  j["dofs"] = rec.dofs;
  j["h_min"] = rec.h_min;
  j["h_max"] = rec.h_max;
  j["eta_h"] = rec.eta_h;
  j["error"] = rec.error ? nlohmann::ordered_json(*rec.error) : nlohmann::ordered_json(nullptr);
  j["effectivity"] =
      rec.effectivity ? nlohmann::ordered_json(*rec.effectivity) : nlohmann::ordered_json(nullptr);
  j["marked"] = rec.marked;
  j["seconds"] = rec.seconds;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string history_to_json(const AdaptHistory& history) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const LevelRecord& rec : history.levels) arr.push_back(record_to_json(rec));
  return arr.dump(2) + "\n";
}

void write_history_json(const AdaptHistory& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_history_json: cannot open " + path);
  out << history_to_json(history);
}

void write_history_csv(const AdaptHistory& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_history_csv: cannot open " + path);
  out << "level,dofs,h_min,h_max,eta_h,error,effectivity,marked,seconds\n";
  for (const LevelRecord& rec : history.levels) {
    out << rec.level << ',' << rec.dofs << ',' << fmt17(rec.h_min) << ',' << fmt17(rec.h_max)
        << ',' << fmt17(rec.eta_h) << ',';
    if (rec.error) out << fmt17(*rec.error);
    out << ',';
    if (rec.effectivity) out << fmt17(*rec.effectivity);
    out << ',' << rec.marked << ',' << fmt17(rec.seconds) << '\n';
  }
}

namespace {

// Uniform bin grid over the unit square for point location.
class CellLocator {
 public:
  explicit CellLocator(const Mesh& mesh) : mesh_(mesh) {
    bins_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.n_cells()) / 2.0)));
    table_.resize(static_cast<size_t>(bins_) * static_cast<size_t>(bins_));
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const auto p = mesh.cell_points(c);
      double xlo = p[0].x, xhi = p[0].x, ylo = p[0].y, yhi = p[0].y;
      for (const Vec2& v : p) {
        xlo = std::min(xlo, v.x);
        xhi = std::max(xhi, v.x);
        ylo = std::min(ylo, v.y);
        yhi = std::max(yhi, v.y);
      }
      for (int bx = bin(xlo); bx <= bin(xhi); ++bx)
        for (int by = bin(ylo); by <= bin(yhi); ++by)
          table_[static_cast<size_t>(by * bins_ + bx)].push_back(c);
    }
  }

  // Cell containing p (barycentric tolerance); -1 if none.
  int locate(Vec2 p) const {
    int best = -1;
    double best_score = -1e30;
    for (int c : table_[static_cast<size_t>(bin(p.y) * bins_ + bin(p.x))]) {
      const auto t = mesh_.cell_points(c);
      const double area2 = cross(t[1] - t[0], t[2] - t[0]);
      const double b0 = cross(t[1] - p, t[2] - p) / area2;
      const double b1 = cross(t[2] - p, t[0] - p) / area2;
      const double b2 = cross(t[0] - p, t[1] - p) / area2;
      const double score = std::min({b0, b1, b2});
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return best_score > -1e-9 ? best : -1;
  }

 private:
  int bin(double t) const {
    return std::clamp(static_cast<int>(t * bins_), 0, bins_ - 1);
  }

  const Mesh& mesh_;
  int bins_ = 1;
  std::vector<std::vector<int>> table_;
};

}  // namespace

void write_solution_grid_csv(const Mesh& mesh, const WeakFunction& u, int n,
                             const std::string& path) {
  if (n < 2) throw std::invalid_argument("write_solution_grid_csv: n must be >= 2");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_solution_grid_csv: cannot open " + path);
  out << "x,y,u\n";
  const CellLocator locator(mesh);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1)};
      const int c = locator.locate(p);
      double value = 0.0;
      if (c >= 0) {
        const CellBasis basis(mesh, c, u.degree);
        value = basis.eval(u.cell_block(c), p);
      }
      out << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(value) << '\n';
    }
  }
}

}  // namespace wg
