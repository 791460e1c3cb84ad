#include "levy_transport/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace levy_transport {

namespace {
// exp(-g) underflows to exactly 0 past ~745; skip the derivative algebra
// there so intermediates cannot overflow.
constexpr double kExpUnderflow = 745.0;
}  // namespace

double BumpProfile::value(double x) const {
  const double c = radius_ * radius_;
  const double u = x - center_;
  const double den = c - u * u;
  if (den <= 0.0) return 0.0;
  const double g = c / den;
  return (g > kExpUnderflow) ? 0.0 : std::exp(-g);
}

double BumpProfile::slope(double x) const {
  const double c = radius_ * radius_;
  const double u = x - center_;
  const double den = c - u * u;
  if (den <= 0.0) return 0.0;
  const double g = c / den;
  if (g > kExpUnderflow) return 0.0;
  const double dg = 2.0 * c * u / (den * den);
  return -dg * std::exp(-g);
}

double BumpProfile::curvature(double x) const {
  const double c = radius_ * radius_;
  const double u = x - center_;
  const double den = c - u * u;
  if (den <= 0.0) return 0.0;
  const double g = c / den;
  if (g > kExpUnderflow) return 0.0;
  const double dg = 2.0 * c * u / (den * den);
  const double ddg = 2.0 * c * (c + 3.0 * u * u) / (den * den * den);
  return (dg * dg - ddg) * std::exp(-g);
}

double GaussianProfile::value(double x) const {
  const double u = (x - center_) / width_;
  return std::exp(-0.5 * u * u);
}

double GaussianProfile::slope(double x) const {
  const double u = (x - center_) / width_;
  return -u / width_ * value(x);
}

double GaussianProfile::curvature(double x) const {
  const double u = (x - center_) / width_;
  return (u * u - 1.0) / (width_ * width_) * value(x);
}

double SineGaussianProfile::value(double x) const {
  const double u = x / width_;
  return std::sin(freq_ * x) * std::exp(-0.5 * u * u);
}

double SineGaussianProfile::slope(double x) const {
  const double w2 = width_ * width_;
  const double env = std::exp(-0.5 * x * x / w2);
  return env * (freq_ * std::cos(freq_ * x) - (x / w2) * std::sin(freq_ * x));
}

double SineGaussianProfile::curvature(double x) const {
  const double w2 = width_ * width_;
  const double env = std::exp(-0.5 * x * x / w2);
  const double s = std::sin(freq_ * x);
  const double c = std::cos(freq_ * x);
  return env * (-freq_ * freq_ * s - 2.0 * (x / w2) * freq_ * c +
                ((x * x) / (w2 * w2) - 1.0 / w2) * s);
}

const BumpProfile& default_initial_condition() {
  static const BumpProfile bump(0.1, 0.0);
  return bump;
}

double eval_initial(double x) { return default_initial_condition().value(x); }

std::shared_ptr<const Profile> make_initial_condition(const std::string& name, double param) {
  if (name == "bump") return std::make_shared<BumpProfile>(param > 0.0 ? param : 0.1);
  if (name == "gaussian") return std::make_shared<GaussianProfile>(param > 0.0 ? param : 0.5);
  throw std::invalid_argument("make_initial_condition: unknown profile '" + name + "'");
}

}  // namespace levy_transport
