#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcpdist {

/// Parameters of a planar Matérn cluster process.
///
/// Parents form a homogeneous Poisson process of density `lambda_p`; each
/// parent carries a Poisson(`m_bar`) number of offspring placed uniformly on
/// the disk of radius `r_d` around it. Lengths are in one consistent unit
/// (meters by convention) and are never converted.
class MCPParams {
 public:
  MCPParams(double lambda_p, double m_bar, double r_d)
      : lambda_p_(lambda_p), m_bar_(m_bar), r_d_(r_d) {
    check("lambda_p", lambda_p);
    check("m_bar", m_bar);
    check("r_d", r_d);
  }

  double lambda_p() const { return lambda_p_; }
  double m_bar() const { return m_bar_; }
  double r_d() const { return r_d_; }

  /// Density of offspring points, m_bar * lambda_p.
  double intensity() const { return lambda_p_ * m_bar_; }

  MCPParams with_r_d(double r_d) const { return {lambda_p_, m_bar_, r_d}; }

  friend bool operator==(const MCPParams&, const MCPParams&) = default;

 private:
  static void check(const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw std::invalid_argument(std::string("MCPParams: ") + name +
                                  " must be finite and > 0");
    }
  }

  double lambda_p_;
  double m_bar_;
  double r_d_;
};

}  // namespace mcpdist
