#pragma once

#include <limits>
#include <memory>
#include <string>

namespace levy_transport {

// A C^2 function of one real variable with known support, used both as the
// initial condition of the transport problem and as a test input for the
// nonlocal operators.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double value(double x) const = 0;
  virtual double slope(double x) const = 0;
  virtual double curvature(double x) const = 0;
  // Radius R such that value(x) == 0 (to double precision) for |x| > R;
  // infinity for non-decaying profiles.
  virtual double support_radius() const = 0;
};

// Compactly supported mollifier-type bump
//   b(x) = exp(-c / (c - x^2)) for x^2 < c,  0 otherwise,  c = radius^2,
// with peak value 1/e at the center.
class BumpProfile final : public Profile {
 public:
  explicit BumpProfile(double radius = 0.1, double center = 0.0)
      : radius_(radius), center_(center) {}
  double value(double x) const override;
  double slope(double x) const override;
  double curvature(double x) const override;
  double support_radius() const override { return std::abs(center_) + radius_; }
  double radius() const { return radius_; }
  double center() const { return center_; }

 private:
  double radius_;
  double center_;
};

class GaussianProfile final : public Profile {
 public:
  explicit GaussianProfile(double width = 0.5, double center = 0.0)
      : width_(width), center_(center) {}
  double value(double x) const override;
  double slope(double x) const override;
  double curvature(double x) const override;
  double support_radius() const override { return std::abs(center_) + 40.0 * width_; }

 private:
  double width_;
  double center_;
};

// sin(freq x) under a Gaussian envelope; smooth and effectively compact.
class SineGaussianProfile final : public Profile {
 public:
  explicit SineGaussianProfile(double freq = 3.0, double width = 1.0)
      : freq_(freq), width_(width) {}
  double value(double x) const override;
  double slope(double x) const override;
  double curvature(double x) const override;
  double support_radius() const override { return 40.0 * width_; }

 private:
  double freq_;
  double width_;
};

class AffineProfile final : public Profile {
 public:
  AffineProfile(double intercept, double gradient)
      : intercept_(intercept), gradient_(gradient) {}
  double value(double x) const override { return intercept_ + gradient_ * x; }
  double slope(double) const override { return gradient_; }
  double curvature(double) const override { return 0.0; }
  double support_radius() const override { return std::numeric_limits<double>::infinity(); }

 private:
  double intercept_;
  double gradient_;
};

class QuadraticProfile final : public Profile {
 public:
  double value(double x) const override { return x * x; }
  double slope(double x) const override { return 2.0 * x; }
  double curvature(double) const override { return 2.0; }
  double support_radius() const override { return std::numeric_limits<double>::infinity(); }
};

// Pointwise sum, for linearity checks.
class SumProfile final : public Profile {
 public:
  SumProfile(std::shared_ptr<const Profile> f, std::shared_ptr<const Profile> g)
      : f_(std::move(f)), g_(std::move(g)) {}
  double value(double x) const override { return f_->value(x) + g_->value(x); }
  double slope(double x) const override { return f_->slope(x) + g_->slope(x); }
  double curvature(double x) const override { return f_->curvature(x) + g_->curvature(x); }
  double support_radius() const override {
    return std::max(f_->support_radius(), g_->support_radius());
  }

 private:
  std::shared_ptr<const Profile> f_;
  std::shared_ptr<const Profile> g_;
};

// Default initial condition: bump of radius 0.1 centered at the origin.
const BumpProfile& default_initial_condition();
double eval_initial(double x);

// Named initial-condition factory ("bump" with a radius parameter,
// "gaussian" with a width parameter).
std::shared_ptr<const Profile> make_initial_condition(const std::string& name, double param);

}  // namespace levy_transport
