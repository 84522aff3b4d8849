#ifndef MANETSIM_GEOMETRY_HPP
#define MANETSIM_GEOMETRY_HPP

#include <cmath>

namespace manetsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Terrain {
  double width = 1500.0;
  double height = 1500.0;

  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

}  // namespace manetsim

#endif
