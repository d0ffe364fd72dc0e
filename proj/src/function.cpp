#include "nsdiag/function.hpp"

#include <cmath>
#include <sstream>

namespace nsdiag {

bool Box::contains(const Vector& x) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Box symmetric_box(int dim, double half_width) {
  return {Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width)};
}

ExtReal ProperFunction::operator()(const Vector& x) const {
  if (x.size() != dim) throw ConfigError(name + ": expected a point of dimension " + std::to_string(dim));
  ExtReal v = eval(x);
  if (v.is_neg_inf()) throw DomainError(name + ": proper functions never take the value -inf");
  return v;
}

namespace {

bool same_point(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a - b).norm() <= 1e-12 * std::max(1.0, b.norm());
}

}  // namespace

HintSource witness_hints(const ProperFunction& f, const Vector& x, const Vector& u, WitnessUse use) {
  const double sigma = u.norm();
  if (sigma == 0.0) return {};
  const Vector dir = u / sigma;
  for (const auto& w : f.witnesses) {
    if (!(w.uses & use) || !w.generator) continue;
    if (!same_point(w.point, x) || (w.direction - dir).norm() > 1e-12) continue;
    // A sequence for the unit direction d serves sigma*d after t -> t/sigma, u' -> sigma*u'.
    HintSource gen = w.generator;
    return [gen, sigma](double t_max) {
      auto base = gen(t_max * sigma);
      for (auto& s : base) {
        s.t /= sigma;
        s.direction *= sigma;
      }
      return base;
    };
  }
  return {};
}

std::vector<Vector> witness_points(const ProperFunction& f, const Vector& x, double radius) {
  std::vector<Vector> out;
  for (const auto& w : f.witnesses) {
    if (!(w.uses & use_oracle) || !w.generator || !same_point(w.point, x)) continue;
    for (const auto& s : w.generator(radius)) {
      Vector step = s.t * s.direction;
      double n = step.norm();
      if (n > 0.0 && n <= radius) out.push_back(x + step);
    }
  }
  return out;
}

Quotient eval_quotient1(const ProperFunction& f, const Vector& x) {
  const ExtReal fx = f(x);
  if (!fx.is_finite()) throw PreconditionError(f.name + ": f(x) must be finite");
  const double base = fx.value();
  return [f, x, base](double t, const Vector& u) -> ExtReal {
    ExtReal v = f(x + t * u);
    if (v.is_pos_inf()) return v;
    return ExtReal((v.value() - base) / t);
  };
}

Quotient eval_quotient2(const ProperFunction& f, const Vector& x, const Vector& x1star) {
  const ExtReal fx = f(x);
  if (!fx.is_finite()) throw PreconditionError(f.name + ": f(x) must be finite");
  const double base = fx.value();
  return [f, x, x1star, base](double t, const Vector& u) -> ExtReal {
    ExtReal v = f(x + t * u);
    if (v.is_pos_inf()) return v;
    return ExtReal(2.0 * (v.value() - base - t * x1star.dot(u)) / (t * t));
  };
}

GradientCheck check_gradient(const ProperFunction& f, int n, std::uint64_t seed, double rel_tol,
                             const std::function<bool(const Vector&)>& accept) {
  if (!f.has_gradient()) throw CapabilityError(f.name + ": no analytic gradient");
  GradientCheck out;
  Rng rng(seed);
  const double h = 1e-6;
  int attempts = 0;
  while (out.points_checked < n && attempts < 1000 * n) {
    ++attempts;
    Vector x(f.dim);
    for (int i = 0; i < f.dim; ++i)
      x[i] = f.domain_box.lo[i] + (f.domain_box.hi[i] - f.domain_box.lo[i]) * rng.uniform();
    if (accept && !accept(x)) continue;
    Vector fd(f.dim);
    bool finite = true;
    for (int i = 0; i < f.dim && finite; ++i) {
      Vector e = Vector::Zero(f.dim);
      e[i] = h;
      ExtReal a = f(x + e), b = f(x - e);
      finite = a.is_finite() && b.is_finite();
      if (finite) fd[i] = (a.value() - b.value()) / (2 * h);
    }
    if (!finite) continue;
    Vector g = f.gradient(x);
    double err = (fd - g).norm() / std::max(1.0, g.norm());
    ++out.points_checked;
    if (err > out.worst_relative_error) {
      out.worst_relative_error = err;
      out.worst_point = x;
    }
  }
  out.ok = out.points_checked > 0 && out.worst_relative_error <= rel_tol;
  return out;
}

Vector parse_point(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("malformed point component '" + item + "'");
    }
  }
  if (vals.empty()) throw ConfigError("empty point");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace nsdiag
