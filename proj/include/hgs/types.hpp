#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hgs {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using MultiIndex = std::vector<int>;

inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  kStructural,       // malformed dimensions or non-unitary / non-symmetric input
  kUsage,            // inconsistent arguments
  kUnphysical,       // state or matrix outside the physical region
  kNumericalHealth,  // result failed an internal consistency check
  kResource,         // derivative order or memory cap exceeded
  kUnsupported,      // operation undefined for this input class
  kConvergence,      // truncation did not capture the requested norm
  kInfeasible,       // optimizer found no feasible point
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace hgs
