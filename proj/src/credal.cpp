#include "credal_chain/credal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "credal_chain/errors.hpp"

namespace credal {

namespace {

LinearOptimum greedy(const CredalLinearInstance& instance, bool maximize) {
  const ProbabilityInterval& interval = instance.interval;
  const auto& c = instance.coefficients;
  if (c.size() != interval.size()) throw StructuralError("greedy: coefficient length mismatch");
  if (!is_coherent(interval)) throw DomainError("greedy: interval is not coherent");

  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return maximize ? c[a] > c[b] : c[a] < c[b];
  });

  LinearOptimum opt;
  opt.x = interval.lower();
  double budget = 1.0 - interval.sum_lower();
  for (std::size_t i : order) {
    if (budget <= 0.0) break;
    const double add = std::min(interval.width(i), budget);
    opt.x[i] += add;
    budget -= add;
  }
  for (std::size_t i = 0; i < c.size(); ++i) opt.value += c[i] * opt.x[i];
  return opt;
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12) return false;
  }
  return true;
}

void push_unique(std::vector<std::vector<double>>& points, std::vector<double> p) {
  for (const auto& q : points) {
    if (same_point(p, q)) return;
  }
  points.push_back(std::move(p));
}

using Key = std::pair<std::int64_t, std::int64_t>;

__int128 cross(const Key& o, const Key& a, const Key& b) {
  const auto w = [](std::int64_t v) { return static_cast<__int128>(v); };
  return w(a.first - o.first) * w(b.second - o.second) - w(a.second - o.second) * w(b.first - o.first);
}

// Andrew's monotone chain on the first two coordinates; drops collinear
// points. Orientation is decided on a 1e-12 integer grid: with floating
// coordinates, ties in the first coordinate that differ in the last bit put
// points out of order along a vertical edge and an endpoint gets popped.
std::vector<std::vector<double>> hull_2d(const std::vector<std::vector<double>>& pts) {
  std::vector<std::pair<Key, std::size_t>> keyed;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    keyed.push_back({{std::llround(pts[i][0] * 1e12), std::llround(pts[i][1] * 1e12)}, i});
  }
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  if (keyed.size() < 3) {
    std::vector<std::vector<double>> out;
    for (const auto& [key, i] : keyed) out.push_back(pts[i]);
    return out;
  }
  std::vector<std::size_t> hull(2 * keyed.size());
  std::size_t k = 0;
  const auto key = [&](std::size_t h) { return keyed[hull[h]].first; };
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    while (k >= 2 && cross(key(k - 2), key(k - 1), keyed[i].first) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t i = keyed.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(key(k - 2), key(k - 1), keyed[i].first) <= 0) --k;
    hull[k++] = i;
  }
  std::vector<std::vector<double>> out;
  for (std::size_t h = 0; h + 1 < k; ++h) out.push_back(pts[keyed[hull[h]].second]);
  return out;
}

std::vector<std::vector<double>> prune(std::vector<std::vector<double>> pts) {
  if (pts.empty()) return pts;
  const std::size_t n = pts.front().size();
  if (n == 2) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                        [](const auto& a, const auto& b) { return a[0] < b[0]; });
    std::vector<std::vector<double>> out{*lo};
    push_unique(out, *hi);
    return out;
  }
  if (n == 3) return hull_2d(pts);
  return pts;
}

}  // namespace

LinearOptimum greedy_linear_min(const CredalLinearInstance& instance) {
  return greedy(instance, false);
}

LinearOptimum greedy_linear_max(const CredalLinearInstance& instance) {
  return greedy(instance, true);
}

std::vector<std::vector<double>> credal_set_vertices(const ProbabilityInterval& interval) {
  if (!is_coherent(interval)) throw DomainError("credal_set_vertices: interval is not coherent");
  const std::size_t n = interval.size();
  if (n > 8) throw StructuralError("credal_set_vertices: frame too large for enumeration");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<double>> vertices;
  do {
    std::vector<double> x = interval.lower();
    double budget = 1.0 - interval.sum_lower();
    for (std::size_t i : perm) {
      const double add = std::clamp(interval.width(i), 0.0, std::max(budget, 0.0));
      x[i] += add;
      budget -= add;
    }
    push_unique(vertices, std::move(x));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return vertices;
}

std::vector<NodeBounds> credal_chain_bounds(const ChainModel& chain) {
  std::vector<NodeBounds> out;
  for (std::size_t node = 1; node < chain.length(); ++node) {
    const ConditionalBounds last = chain.bounds(node - 1);
    NodeBounds nb;
    nb.node = node + 1;
    for (std::size_t j = 0; j < chain.frame(node).size(); ++j) {
      for (const bool upper_side : {false, true}) {
        std::vector<double> c = upper_side ? last.upper_column(j) : last.lower_column(j);
        for (std::size_t l = node - 1; l-- > 0;) {
          const auto& link = chain.link(l);
          std::vector<double> d(link.size());
          for (std::size_t i = 0; i < link.size(); ++i) {
            const CredalLinearInstance inst{c, link[i]};
            d[i] = upper_side ? greedy_linear_max(inst).value : greedy_linear_min(inst).value;
          }
          c = std::move(d);
        }
        const CredalLinearInstance inst{c, chain.prior()};
        if (upper_side) {
          nb.upper.push_back(greedy_linear_max(inst).value);
        } else {
          nb.lower.push_back(greedy_linear_min(inst).value);
        }
      }
    }
    out.push_back(std::move(nb));
  }
  return out;
}

std::vector<NodeBounds> brute_force_bounds(const ChainModel& chain) {
  if (chain.length() > 4) throw StructuralError("brute_force_bounds: refuses chains longer than 4");
  for (const Frame& f : chain.frames()) {
    if (f.size() > 3) throw StructuralError("brute_force_bounds: refuses frames larger than 3");
  }
  std::vector<std::vector<double>> points = credal_set_vertices(chain.prior());
  std::vector<NodeBounds> out;
  for (std::size_t l = 0; l + 1 < chain.length(); ++l) {
    const auto& link = chain.link(l);
    const std::size_t parents = link.size();
    const std::size_t children = chain.frame(l + 1).size();
    std::vector<std::vector<std::vector<double>>> verts;
    for (const auto& interval : link) verts.push_back(credal_set_vertices(interval));

    NodeBounds nb;
    nb.node = l + 2;
    nb.lower.assign(children, std::numeric_limits<double>::infinity());
    nb.upper.assign(children, -std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> next;
    std::vector<std::size_t> choice(parents, 0);
    for (const auto& p : points) {
      std::fill(choice.begin(), choice.end(), 0);
      for (;;) {
        std::vector<double> q(children, 0.0);
        for (std::size_t i = 0; i < parents; ++i) {
          for (std::size_t j = 0; j < children; ++j) q[j] += p[i] * verts[i][choice[i]][j];
        }
        for (std::size_t j = 0; j < children; ++j) {
          nb.lower[j] = std::min(nb.lower[j], q[j]);
          nb.upper[j] = std::max(nb.upper[j], q[j]);
        }
        next.push_back(std::move(q));
        std::size_t i = 0;
        while (i < parents && ++choice[i] == verts[i].size()) choice[i++] = 0;
        if (i == parents) break;
      }
    }
    out.push_back(std::move(nb));
    points = prune(std::move(next));
  }
  return out;
}

}  // namespace credal
