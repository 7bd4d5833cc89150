#include "weierlab/mtriple.hpp"

#include <cmath>
#include <sstream>

#include "weierlab/errors.hpp"
#include "weierlab/rational.hpp"

namespace weierlab {
namespace {

std::string format_point(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

}  // namespace

RegularityReport check_regularity(const DomainSpec& domain, const MeroExpr& f, const MeroExpr& g,
                                  int m) {
  RegularityReport report;
  if (!f.is_rational() || !g.is_rational()) {
    report.checked = false;
    return report;
  }
  std::vector<Complex> candidates = critical_points(f);
  for (const Complex& c : critical_points(g)) candidates.push_back(c);

  std::vector<Complex> seen;
  for (const Complex& p : candidates) {
    if (!domain.contains(p, 1e-9)) continue;
    bool dup = false;
    for (const Complex& s : seen) dup = dup || std::abs(s - p) < 1e-6;
    if (dup) continue;
    seen.push_back(p);

    RegularityEntry e;
    e.point = p;
    e.order_f = f.is_constant() ? 0 : local_order(f, p);
    e.order_g = g.is_constant() ? 0 : local_order(g, p);
    if (e.order_f < 0) {
      throw Error(ErrorCode::NonHolomorphic, "f has a pole at " + format_point(p));
    }
    if (e.order_f == 0 && e.order_g >= 0) continue;
    if (e.order_g < 0) {
      e.ok = e.order_f == -m * e.order_g;
      e.verdict = e.ok ? "pole of g balanced by zero of f"
                       : "zero order of f differs from m times the pole order of g";
    } else {
      e.ok = false;
      e.verdict = "f vanishes where g has no pole";
    }
    report.overall = report.overall && e.ok;
    report.entries.push_back(e);
  }
  return report;
}

MTriple::MTriple(DomainSpec domain, MeroExpr f, MeroExpr g, int m)
    : domain_(std::move(domain)), f_(std::move(f)), g_(std::move(g)), m_(m) {
  if (m_ < 1) throw Error(ErrorCode::InvalidArgument, "m must be a positive integer");
  if (f_.is_constant()) {
    ExtComplex c = f_.eval(0.0);
    if (c.is_finite() && c.value() == Complex(0.0, 0.0)) {
      throw Error(ErrorCode::RegularityViolation, "f must not vanish identically");
    }
  }
  dg_ = derivative(g_);
  ghat_ = MeroExpr::constant(1.0) / g_;
  fhat_ = g_.pow(m_) * f_;
  dghat_ = derivative(ghat_);
  fc_ = CompiledExpr(f_);
  gc_ = CompiledExpr(g_);
  dgc_ = CompiledExpr(dg_);
  report_ = check_regularity(domain_, f_, g_, m_);
  if (!report_.overall) {
    for (const auto& e : report_.entries) {
      if (!e.ok) {
        throw Error(ErrorCode::RegularityViolation,
                    "regularity violated at " + format_point(e.point) + ": " + e.verdict);
      }
    }
  }
}

MTriple make_triple(DomainSpec domain, MeroExpr f, MeroExpr g, int m) {
  return MTriple(std::move(domain), std::move(f), std::move(g), m);
}

void MTriple::check_point(Complex z) const {
  if (domain_.puncture_near(z, 1e-12) >= 0) {
    throw Error(ErrorCode::Puncture, "evaluation at a puncture");
  }
  if (!domain_.region_contains(z)) {
    throw Error(ErrorCode::InvalidArgument, "evaluation point outside the domain");
  }
}

ExtComplex MTriple::gauss_map(Complex z) const { return eval_ext(g_, z); }

namespace {

// (1 + |g|^2)^{m/2} without calling pow for the common small m.
double conformal_factor(double one_plus, int m) {
  double r = (m % 2) ? std::sqrt(one_plus) : 1.0;
  for (int k = 0; k < m / 2; ++k) r *= one_plus;
  return r;
}

}  // namespace

double MTriple::metric_density(Complex z) const {
  check_point(z);
  auto fv = fc_(z);
  auto gv = gc_(z);
  if (fv && gv && modulus(*gv) <= kPoleThreshold) {
    return conformal_factor(1.0 + std::norm(*gv), m_) * modulus(*fv);
  }
  ExtComplex g = eval_ext(g_, z);
  if (g.is_finite() && modulus(g.value()) <= kPoleThreshold) {
    ExtComplex f = eval_ext(f_, z);
    if (f.is_infinite()) throw Error(ErrorCode::NonHolomorphic, "f has a pole here");
    return conformal_factor(1.0 + std::norm(g.value()), m_) * modulus(f.value());
  }
  ExtComplex gh = eval_ext(ghat_, z);
  ExtComplex fh = eval_ext(fhat_, z);
  if (gh.is_infinite() || fh.is_infinite()) {
    throw Error(ErrorCode::NonFinite, "metric density is infinite here");
  }
  return conformal_factor(1.0 + std::norm(gh.value()), m_) * modulus(fh.value());
}

double MTriple::curvature(Complex z) const {
  check_point(z);
  const int p = m_ + 2;
  auto finish = [&](Complex gval, Complex dgval, Complex fval) {
    double f2 = std::norm(fval);
    if (f2 == 0.0) throw Error(ErrorCode::NonFinite, "metric degenerates (f = 0)");
    return -2.0 * m_ * std::norm(dgval) / (std::pow(1.0 + std::norm(gval), p) * f2);
  };
  auto fv = fc_(z);
  auto gv = gc_(z);
  if (fv && gv && modulus(*gv) <= kPoleThreshold) {
    if (auto dgv = dgc_(z)) return finish(*gv, *dgv, *fv);
  }
  ExtComplex g = eval_ext(g_, z);
  if (g.is_finite() && modulus(g.value()) <= kPoleThreshold) {
    ExtComplex f = eval_ext(f_, z);
    ExtComplex dg = eval_ext(dg_, z);
    if (f.is_infinite() || dg.is_infinite()) {
      throw Error(ErrorCode::NonFinite, "curvature data singular here");
    }
    return finish(g.value(), dg.value(), f.value());
  }
  ExtComplex gh = eval_ext(ghat_, z);
  ExtComplex fh = eval_ext(fhat_, z);
  ExtComplex dgh = eval_ext(dghat_, z);
  if (gh.is_infinite() || fh.is_infinite() || dgh.is_infinite()) {
    throw Error(ErrorCode::NonFinite, "curvature data singular in the 1/g chart");
  }
  return finish(gh.value(), dgh.value(), fh.value());
}

double MTriple::log_density(Complex z) const {
  double lam = metric_density(z);
  if (!(lam > 1e-300) || !std::isfinite(lam)) {
    throw Error(ErrorCode::Degenerate, "metric density vanishes on the stencil");
  }
  return std::log(lam);
}

double MTriple::curvature_fd(Complex z, double h, bool richardson) const {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "stencil radius must be positive");
  auto estimate = [&](double step) {
    const Complex offsets[4] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
    for (const Complex& o : offsets) {
      if (!domain_.contains(z + o, 0.0) || domain_.puncture_near(z, step * 1.000001) >= 0) {
        throw Error(ErrorCode::StencilOutOfDomain, "finite-difference stencil leaves the domain");
      }
    }
    const double center = log_density(z);
    double lap = -4.0 * center;
    for (const Complex& o : offsets) lap += log_density(z + o);
    lap /= step * step;
    const double lam = std::exp(center);
    return -lap / (lam * lam);
  };
  const double coarse = estimate(h);
  if (!richardson) return coarse;
  const double fine = estimate(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace weierlab
