#include "feec2d/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace feec2d {

namespace {

// Symmetric orbits in barycentric coordinates (l1,l2,l3), l1+l2+l3 = 1.
// Cartesian reference coordinates are (x,y) = (l2,l3).
void add_orbit3(std::vector<TriQuadPoint>& pts, double a, double b, double w) {
  // permutations of (a,b,b)
  pts.push_back({b, b, w});
  pts.push_back({a, b, w});
  pts.push_back({b, a, w});
}

void add_orbit6(std::vector<TriQuadPoint>& pts, double a, double b, double c, double w) {
  pts.push_back({b, c, w});
  pts.push_back({c, b, w});
  pts.push_back({a, c, w});
  pts.push_back({c, a, w});
  pts.push_back({a, b, w});
  pts.push_back({b, a, w});
}

TriangleRule make_fixed(int degree) {
  TriangleRule r;
  r.degree = degree;
  auto& p = r.points;
  const double half = 0.5;  // weights below are normalized to sum 1
  switch (degree) {
    case 1:
      p.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0});
      break;
    case 2:
      add_orbit3(p, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      add_orbit3(p, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      add_orbit3(p, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      p.push_back({1.0 / 3.0, 1.0 / 3.0, 0.225});
      add_orbit3(p, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      add_orbit3(p, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      add_orbit3(p, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      add_orbit3(p, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      add_orbit6(p, 0.053145049844816, 0.310352451033785, 0.636502499121399,
                 0.082851075618374);
      break;
    default:
      throw std::logic_error("no fixed triangle rule for this degree");
  }
  for (auto& q : p) q.w *= half;
  return r;
}

// Collapsed tensor Gauss (Duffy) rule: x = xi, y = eta*(1-xi).
// A polynomial of total degree d becomes degree <= d+1 in xi and <= d in eta,
// so m = ceil((d+2)/2) Gauss points per direction are exact.
TriangleRule make_collapsed(int degree) {
  TriangleRule r;
  r.degree = degree;
  const int m = (degree + 3) / 2;
  const auto& g = segment_rule(m);
  for (const auto& gx : g)
    for (const auto& gy : g)
      r.points.push_back({gx.s, gy.s * (1.0 - gx.s), gx.w * gy.w * (1.0 - gx.s)});
  return r;
}

std::vector<SegQuadPoint> make_gauss(int n) {
  // Nodes of Legendre P_n on (-1,1) by Newton iteration from Chebyshev guesses.
  std::vector<SegQuadPoint> out(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[i] = {0.5 * (x + 1.0), 0.5 * w};  // map to [0,1]
  }
  // ascending node order for reproducible summation
  for (int i = 0; i < n / 2; ++i) std::swap(out[i], out[n - 1 - i]);
  return out;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static std::map<int, TriangleRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  int key = degree <= 1 ? 1 : degree == 3 ? 4 : degree;  // no degree-3 table; bump to 4
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  TriangleRule r = key <= 6 ? make_fixed(key) : make_collapsed(key);
  return cache.emplace(key, std::move(r)).first->second;
}

const std::vector<SegQuadPoint>& segment_rule(int n) {
  static std::map<int, std::vector<SegQuadPoint>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  return cache.emplace(n, make_gauss(n)).first->second;
}

}  // namespace feec2d
