#include "ddnn/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace ddnn {

using Eigen::Matrix2d;
using Eigen::Vector2d;

double default_source(double x, double y) { return x * y * (3.0 - x) * (2.0 - y); }

ProblemDef laplace() {
  ProblemDef p;
  p.name = "laplace";
  p.alpha = [](const Vector2d&, double, const Vector2d& z) { return z; };
  p.beta = [](const Vector2d&, double, const Vector2d&) { return 0.0; };
  p.j_alpha = [](const Vector2d&, const Vector2d&) { return Matrix2d::Identity().eval(); };
  p.j_beta = [](const Vector2d&, double) { return 0.0; };
  p.source = default_source;
  p.semilinear = true;
  return p;
}

ProblemDef semilinear_reaction() {
  ProblemDef p;
  p.name = "semilinear";
  p.alpha = [](const Vector2d&, double, const Vector2d& z) { return z; };
  p.beta = [](const Vector2d&, double y, const Vector2d&) { return std::abs(y) * y; };
  p.j_alpha = [](const Vector2d&, const Vector2d&) { return Matrix2d::Identity().eval(); };
  p.j_beta = [](const Vector2d&, double y) { return 2.0 * std::abs(y); };
  p.source = default_source;
  p.semilinear = true;
  return p;
}

ProblemDef quasilinear_sin(double gamma) {
  ProblemDef p;
  p.name = "quasilinear-sin";
  p.alpha = [gamma](const Vector2d&, double, const Vector2d& z) {
    return (z + gamma * std::sin(z.norm()) * Vector2d::Ones()).eval();
  };
  p.beta = [](const Vector2d&, double, const Vector2d&) { return 0.0; };
  p.j_alpha = [gamma](const Vector2d&, const Vector2d& z) {
    const double n = z.norm();
    Matrix2d j = Matrix2d::Identity();
    if (n > 0.0) j += gamma * std::cos(n) / n * Vector2d::Ones() * z.transpose();
    return j;
  };
  p.j_beta = [](const Vector2d&, double) { return 0.0; };
  p.source = default_source;
  p.semilinear = false;
  return p;
}

ProblemDef p_laplace(double p_exp) {
  if (p_exp < 2.0) throw std::invalid_argument("p_laplace requires p >= 2");
  ProblemDef p;
  p.name = "p-laplace";
  p.alpha = [p_exp](const Vector2d&, double, const Vector2d& z) {
    const double n = z.norm();
    const double w = n > 0.0 ? std::pow(n, p_exp - 2.0) : (p_exp == 2.0 ? 1.0 : 0.0);
    return (w * z).eval();
  };
  p.beta = [](const Vector2d&, double y, const Vector2d&) { return y; };
  // |z| -> sqrt(|z|^2 + eps^2) inside the Jacobian only, so Newton sees a
  // nonsingular linearization at grad u = 0.
  p.j_alpha = [p_exp](const Vector2d&, const Vector2d& z) {
    constexpr double eps = 1e-8;
    const double s = std::sqrt(z.squaredNorm() + eps * eps);
    Matrix2d j = std::pow(s, p_exp - 2.0) * Matrix2d::Identity();
    j += (p_exp - 2.0) * std::pow(s, p_exp - 4.0) * z * z.transpose();
    return j;
  };
  p.j_beta = [](const Vector2d&, double) { return 1.0; };
  p.source = default_source;
  p.semilinear = false;
  return p;
}

ProblemDef make_problem(const std::string& name, double gamma, double p) {
  if (name == "laplace") return laplace();
  if (name == "semilinear") return semilinear_reaction();
  if (name == "quasilinear-sin") return quasilinear_sin(gamma);
  if (name == "p-laplace") return p_laplace(p);
  throw std::invalid_argument("unknown problem \"" + name +
                              "\" (expected laplace, semilinear, quasilinear-sin or p-laplace)");
}

}  // namespace ddnn
