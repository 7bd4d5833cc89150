#include "weierlab/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "weierlab/errors.hpp"
#include "weierlab/quadrature.hpp"

namespace weierlab {
namespace {

struct LineFit {
  double slope = 0, intercept = 0, residual = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  LineFit f;
  double den = n * sxx - sx * sx;
  f.slope = den != 0 ? (n * sxy - sx * sy) / den : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double r = y[k] - (f.slope * x[k] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

// Best exponent p for L = A eps^{-p} + B, by golden-section search on the
// residual of the linear fit in eps^{-p}.
double fit_power_exponent(std::span<const double> eps, std::span<const double> y, LineFit* out) {
  std::vector<double> x(eps.size());
  auto resid = [&](double p) {
    for (std::size_t k = 0; k < eps.size(); ++k) x[k] = std::pow(eps[k], -p);
    return fit_line(x, y).residual;
  };
  double a = 1e-3, b = 4.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = resid(c), fd = resid(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = resid(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = resid(d);
    }
  }
  double p = 0.5 * (a + b);
  for (std::size_t k = 0; k < eps.size(); ++k) x[k] = std::pow(eps[k], -p);
  if (out) *out = fit_line(x, y);
  return p;
}

bool agree(double a, double b) {
  return std::abs(a - b) <= 0.1 * std::max(std::abs(a), std::abs(b));
}

double ray_clearance(Complex origin, Complex dir, const std::vector<Complex>& punctures) {
  double best = std::numeric_limits<double>::infinity();
  for (Complex p : punctures) {
    double t = std::max(0.0, ((p - origin) * std::conj(dir)).real());
    best = std::min(best, std::abs(origin + t * dir - p));
  }
  return best;
}

double segment_clearance(Complex a, Complex b, Complex skip, const std::vector<Complex>& punctures) {
  double best = std::numeric_limits<double>::infinity();
  Complex ab = b - a;
  for (Complex p : punctures) {
    if (p == skip) continue;
    double t = std::clamp(((p - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
    best = std::min(best, std::abs(a + t * ab - p));
  }
  return best;
}

}  // namespace

double path_length(const Density& density, std::span<const Complex> polyline, double rel_tol) {
  double total = 0.0;
  for (std::size_t k = 1; k < polyline.size(); ++k) {
    Complex a = polyline[k - 1], b = polyline[k];
    double len = std::abs(b - a);
    if (len == 0) continue;
    total += len * adaptive_simpson([&](double t) { return density(a + t * (b - a)); }, 0.0, 1.0,
                                    rel_tol);
  }
  return total;
}

std::vector<double> graph_distances(const MeshedDomain& mesh, std::span<const int> sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(mesh.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (int s : sources) {
    dist[s] = 0.0;
    queue.push({0.0, s});
  }
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : mesh.neighbors(u)) {
      double nd = d + nb.weight;
      if (nd < dist[nb.node]) {
        dist[nb.node] = nd;
        queue.push({nd, nb.node});
      }
    }
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == inf) {
      throw Error(ErrorCode::Disconnected,
                  "mesh node " + std::to_string(i) + " is not connected to any source");
    }
  }
  return dist;
}

std::vector<double> boundary_distance_field(const MeshedDomain& mesh) {
  std::vector<int> sources;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.nodes()[i].flags & (kBoundaryAdjacent | kPunctureAdjacent)) {
      sources.push_back(static_cast<int>(i));
    }
  }
  if (sources.empty()) throw Error(ErrorCode::Disconnected, "mesh has no boundary nodes");
  return graph_distances(mesh, sources);
}

double hyperbolic_distance(Complex z1, Complex z2) {
  if (!(std::abs(z1) < 1.0) || !(std::abs(z2) < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "hyperbolic distance needs points in the unit disk");
  }
  double delta = std::abs(z1 - z2) / std::abs(1.0 - std::conj(z1) * z2);
  return std::log1p(delta) - std::log1p(-delta);
}

std::string to_string(CompletenessTarget::Kind kind) {
  switch (kind) {
    case CompletenessTarget::Kind::Puncture: return "puncture";
    case CompletenessTarget::Kind::BoundaryPoint: return "boundary_point";
    case CompletenessTarget::Kind::Infinity: return "infinity";
  }
  return "unknown";
}

CompletenessReport completeness_probe(const Density& density, const DomainSpec& domain,
                                      const CompletenessTarget& target,
                                      std::span<const double> eps_levels,
                                      std::optional<Complex> start) {
  if (eps_levels.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "completeness probe needs at least three eps levels");
  }
  for (std::size_t k = 0; k < eps_levels.size(); ++k) {
    if (!(eps_levels[k] >= 1e-8) || (k > 0 && !(eps_levels[k] < eps_levels[k - 1]))) {
      throw Error(ErrorCode::InvalidArgument,
                  "eps levels must be strictly decreasing and at least 1e-8");
    }
  }
  const auto& punctures = domain.punctures();
  CompletenessReport rep;
  rep.target = target;
  rep.eps.assign(eps_levels.begin(), eps_levels.end());

  using Kind = CompletenessTarget::Kind;
  // Each piece integrates over s = log(distance) so that the density blow-up
  // near the target is spread evenly.
  std::vector<double> pieces;
  if (target.kind == Kind::Infinity) {
    Complex c = start.value_or(domain.center());
    Complex dir = target.point;
    if (std::abs(dir) == 0.0) {
      double best = -1;
      for (int k = 0; k < 64; ++k) {
        Complex cand = std::polar(1.0, 2 * std::numbers::pi * k / 64);
        double cl = ray_clearance(c, cand, punctures);
        if (cl > best + 1e-12) {
          best = cl;
          dir = cand;
        }
      }
    }
    dir /= std::abs(dir);
    if (!(eps_levels[0] < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "eps levels toward infinity must be below 1");
    }
    rep.start = c;
    rep.direction = dir;
    double base = adaptive_simpson([&](double t) { return density(c + t * dir); }, 0.0, 1.0);
    double prev = 0.0;
    for (std::size_t k = 0; k < eps_levels.size(); ++k) {
      double hi = -std::log(eps_levels[k]);
      pieces.push_back(adaptive_simpson(
          [&](double s) { return density(c + std::exp(s) * dir) * std::exp(s); }, prev, hi));
      prev = hi;
    }
    pieces[0] += base;
  } else {
    Complex p = target.point;
    if (target.kind == Kind::Puncture &&
        std::none_of(punctures.begin(), punctures.end(), [&](Complex q) { return q == p; })) {
      throw Error(ErrorCode::InvalidArgument, "target is not a puncture of the domain");
    }
    Complex s0;
    if (start) {
      s0 = *start;
    } else {
      s0 = domain.center();
      double d = std::abs(p - s0);
      bool ok = d > 1e-9 && segment_clearance(s0, p, p, punctures) > 0.1 * d;
      if (!ok) {
        if (target.kind != Kind::Puncture) {
          throw Error(ErrorCode::InvalidArgument, "no clear straight path to the target");
        }
        double rho = 0.5 * domain.boundary_distance(p);
        for (Complex q : punctures) {
          if (q != p) rho = std::min(rho, 0.5 * std::abs(q - p));
        }
        double best = -1;
        for (int k = 0; k < 16; ++k) {
          Complex cand = p + std::polar(rho, 2 * std::numbers::pi * k / 16);
          double cl = segment_clearance(cand, p, p, punctures);
          if (cl > best) {
            best = cl;
            s0 = cand;
          }
        }
      }
    }
    double dist = std::abs(p - s0);
    if (!(eps_levels[0] < dist)) {
      throw Error(ErrorCode::InvalidArgument, "largest eps exceeds the distance to the target");
    }
    Complex u = (p - s0) / dist;
    rep.start = s0;
    rep.direction = u;
    double prev = std::log(dist);
    for (double e : eps_levels) {
      double lo = std::log(e);
      pieces.push_back(adaptive_simpson(
          [&](double s) { return density(p - std::exp(s) * u) * std::exp(s); }, lo, prev));
      prev = lo;
    }
  }

  double acc = 0.0;
  for (double piece : pieces) {
    acc += piece;
    rep.lengths.push_back(acc);
  }

  const std::size_t n = rep.eps.size();
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = -std::log(rep.eps[k]);
  std::span<const double> xs(x), ys(rep.lengths), es(rep.eps);
  LineFit all = fit_line(xs, ys);
  LineFit first = fit_line(xs.first(n - 1), ys.first(n - 1));
  LineFit last = fit_line(xs.last(n - 1), ys.last(n - 1));
  rep.slope = all.slope;
  rep.intercept = all.intercept;
  rep.residual = all.residual;
  rep.window_first = first.slope;
  rep.window_last = last.slope;
  rep.stable = agree(first.slope, last.slope);
  rep.divergence = rep.stable && all.slope > 0;

  // Growth faster than logarithmic: switch to a power law.
  if (!rep.stable && last.slope > 1.1 * first.slope && last.slope > 0) {
    LineFit pw, pw_first, pw_last;
    double p = fit_power_exponent(es, ys, &pw);
    double p_first = fit_power_exponent(es.first(n - 1), ys.first(n - 1), &pw_first);
    double p_last = fit_power_exponent(es.last(n - 1), ys.last(n - 1), &pw_last);
    rep.model = "power";
    rep.exponent = p;
    rep.slope = pw.slope;
    rep.intercept = pw.intercept;
    rep.residual = pw.residual;
    rep.window_first = p_first;
    rep.window_last = p_last;
    rep.stable = agree(p_first, p_last);
    rep.divergence = rep.stable && pw.slope > 0 && p > 0;
  }
  return rep;
}

CompletenessReport completeness_probe(const MTriple& t, const CompletenessTarget& target,
                                      std::span<const double> eps_levels,
                                      std::optional<Complex> start) {
  if (target.kind == CompletenessTarget::Kind::Infinity) {
    if (!std::holds_alternative<TruncatedPlane>(t.domain().region())) {
      throw Error(ErrorCode::InvalidArgument, "probe toward infinity needs a truncated plane");
    }
    double reach = 4.0 / eps_levels.back() + 4.0 * t.domain().half_extent();
    MTriple wide(DomainSpec(TruncatedPlane{reach}, t.domain().punctures()), t.f(), t.g(), t.m());
    return completeness_probe([&](Complex z) { return wide.metric_density(z); }, t.domain(),
                              target, eps_levels, start);
  }
  return completeness_probe([&](Complex z) { return t.metric_density(z); }, t.domain(), target,
                            eps_levels, start);
}

}  // namespace weierlab
