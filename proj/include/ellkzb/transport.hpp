#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellkzb/kzb.hpp"

namespace ekzb {

/// Transport needs h~0 = 0; otherwise the horizontal sections solve a PDE in u.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class TransportVariable { Z, Tau };

struct TransportOptions {
  double tolerance = 1e-12;   // local error per unit parameter, step doubling
  double initial_step = 0.05; // fraction of a segment
  int fixed_steps = 0;        // > 0: this many RK4 steps per segment, no control
  int max_steps = 1000000;
  double min_step = 1e-10;
};

struct TransportResult {
  Eigen::MatrixXcd value;
  int steps = 0;
  int rejected = 0;
};

/// Moves z_point (or tau) along the polyline start -> path[0] -> path[1] -> ... and
/// integrates the horizontal-section equation for F (columns of F0 are transported together).
TransportResult transport(const RMatrixModel& m, const MarkedConfig& cfg, TransportVariable which, int point,
                          const std::vector<cplx>& path, const Eigen::MatrixXcd& F0,
                          const TransportOptions& opts = {});

/// Right-hand side A with dF/dw = A(w) F at the given position of the moving variable.
Eigen::MatrixXcd transport_generator(const RMatrixModel& m, const MarkedConfig& cfg, TransportVariable which,
                                     int point, cplx w);

struct PathSpec {
  TransportVariable which = TransportVariable::Z;
  int point = 0;
  std::vector<cplx> vertices;
};
/// "z<k>:<w1>;<w2>;..." or "tau:<w1>;...", complex numbers as re+imi.
PathSpec parse_path(const std::string& text);

}  // namespace ekzb
